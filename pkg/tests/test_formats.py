import json

import pytest
from hypothesis import given

from conftest import int_matrices
from toral.errors import ParseError
from toral.formats import format_matrix_text, matrix_to_json, parse_matrix, read_matrix


def test_text_with_comments():
    M = parse_matrix("# cat map\n2\n2 1  # first row\n1 1\n")
    assert M.tolist() == [[2, 1], [1, 1]]


def test_json_input():
    assert parse_matrix('{"n": 2, "rows": [[1, 1], [0, 1]]}').tolist() == [[1, 1], [0, 1]]


@pytest.mark.parametrize(
    "text",
    [
        "",
        "2\n1 2\n3\n",
        "2\n1 2 3\n4 5 6\n",
        "3\n1 0 0\n0 1 0\n",
        "2\n1 x\n0 1\n",
        "2 2\n1 0\n0 1\n",
        "0\n",
        '{"n": 2, "rows": [[1, 2], [3]]}',
        '{"n": 2, "rows": [[1, 2, 3], [4, 5, 6]]}',
        '{"n": 2, "rows": [[1, 2.5], [3, 4]]}',
        '{"n": 2}',
        '{"n": 2, "rows": [[1, 2], [3, 4]',
        '{"n": true, "rows": [[1]]}',
    ],
)
def test_malformed_inputs_rejected(text):
    with pytest.raises(ParseError):
        parse_matrix(text)


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        read_matrix(tmp_path / "nope.mat")


@given(int_matrices(1, 5))
def test_round_trips(M):
    assert parse_matrix(format_matrix_text(M)) == M
    assert parse_matrix(json.dumps(matrix_to_json(M))) == M
