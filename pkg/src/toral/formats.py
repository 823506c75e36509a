"""Reading and writing matrices.

Text format: the first line holds ``n``, then ``n`` lines of ``n`` integers.
JSON format: ``{"n": n, "rows": [[...], ...]}``.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .errors import ParseError
from .exact_linalg import IntMatrix


def _check_square(n, rows) -> IntMatrix:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"matrix size must be a positive integer, got {n!r}")
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, found {len(rows)}")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ParseError(f"row {i + 1} has {len(row)} entries, expected {n}")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in row):
            raise ParseError(f"row {i + 1} contains a non-integer entry")
    return IntMatrix(rows)


def parse_matrix_text(text: str) -> IntMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ParseError("empty matrix input")
    try:
        header = lines[0].split()
        if len(header) != 1:
            raise ParseError("first line must contain only the size n")
        n = int(header[0])
        rows = [[int(tok) for tok in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise ParseError(f"non-integer token in matrix: {exc}") from exc
    return _check_square(n, rows)


def parse_matrix_json(text: str) -> IntMatrix:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from exc
    if not isinstance(obj, dict) or "n" not in obj or "rows" not in obj:
        raise ParseError('matrix JSON needs "n" and "rows"')
    rows = obj["rows"]
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise ParseError('"rows" must be a list of lists')
    return _check_square(obj["n"], rows)


def parse_matrix(text: str) -> IntMatrix:
    return parse_matrix_json(text) if text.lstrip().startswith("{") else parse_matrix_text(text)


def read_matrix(path: Union[str, Path]) -> IntMatrix:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return parse_matrix(text)
    except ParseError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def format_matrix_text(M: IntMatrix) -> str:
    return "\n".join([str(M.n)] + [" ".join(map(str, r)) for r in M.rows]) + "\n"


def matrix_to_json(M: IntMatrix) -> dict:
    return {"n": M.n, "rows": M.tolist()}
