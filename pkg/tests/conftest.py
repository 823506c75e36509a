import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

from toral.exact_linalg import IntMatrix, inverse_unimodular
from toral.poly import Poly

DATA = Path(__file__).parent / "data"

CAT = IntMatrix([[2, 1], [1, 1]])
CUBIC = IntMatrix.companion(Poly([-1, -2, 1, 1]))  # t^3 + t^2 - 2t - 1
QUARTIC = IntMatrix.companion(Poly([1, 0, -2, -1, 1]))  # t^4 - t^3 - 2t^2 + 1
_W = IntMatrix([[1, 2, 0, 1], [0, 1, 1, 0], [0, 0, 1, -1], [0, 0, 0, 1]])
# cat map (+) companion(t^2 - t - 1), disguised by a unimodular change of basis
REDUCIBLE = inverse_unimodular(_W) @ IntMatrix.block_diag(CAT, IntMatrix.companion(Poly([-1, -1, 1]))) @ _W

BASES = {"cat": CAT, "cubic": CUBIC, "quartic": QUARTIC, "reducible": REDUCIBLE}

ROTATION = IntMatrix([[0, -1], [1, 0]])
UNIPOTENT = IntMatrix([[1, 1], [0, 1]])


def random_unimodular(n: int, rng: random.Random, steps: int | None = None) -> IntMatrix:
    """Product of random elementary matrices, occasionally with a sign flip."""
    U = IntMatrix.identity(n)
    for _ in range(steps if steps is not None else 3 * n):
        i, j = rng.sample(range(n), 2)
        rows = [[int(a == b) for b in range(n)] for a in range(n)]
        rows[i][j] = rng.choice([-2, -1, 1, 2])
        U = U @ IntMatrix(rows)
    if rng.random() < 0.5:
        U = U @ IntMatrix.diag([-1] + [1] * (n - 1))
    return U


def conjugate(A: IntMatrix, U: IntMatrix) -> IntMatrix:
    return inverse_unimodular(U) @ A @ U


def int_matrices(n_min=1, n_max=4, lo=-9, hi=9):
    return st.integers(n_min, n_max).flatmap(
        lambda n: st.lists(
            st.lists(st.integers(lo, hi), min_size=n, max_size=n), min_size=n, max_size=n
        ).map(IntMatrix)
    )


def rect_matrices(max_rows=4, max_cols=4, lo=-9, hi=9):
    return st.tuples(st.integers(1, max_rows), st.integers(1, max_cols)).flatmap(
        lambda rc: st.lists(
            st.lists(st.integers(lo, hi), min_size=rc[1], max_size=rc[1]),
            min_size=rc[0],
            max_size=rc[0],
        )
    )


@pytest.fixture
def data_dir():
    return DATA


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is not None and acceptance.RESULTS:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in acceptance.RESULTS:
            terminalreporter.write_line(line)
