import pytest

from hgorth.error import ParseError
from hgorth.problem_file import load_problem, parse_problem


def test_parse():
    problem = parse_problem('{"mean": [0, 1], "cov": [[1, 0], [0, 2]], "signs": [1, -1]}')

    assert problem.spec.mean.tolist() == [0.0, 1.0]
    assert problem.spec.cov.tolist() == [[1.0, 0.0], [0.0, 2.0]]
    assert problem.signs == (1, -1)


@pytest.mark.parametrize(
    "text, row, col",
    [
        ('{"mean": [0, 0], "cov": [[1, 0]]}', 1, None),
        ('{"mean": [0, 0], "cov": [[1, 0], [0]]}', 1, 1),
        ('{"mean": [0, 0], "cov": [[1, 0], [0, "a"]]}', 1, 1),
        ('{"mean": [0, true], "cov": [[1, 0], [0, 1]]}', None, 1),
        ('{"mean": [0, 0], "cov": [[1, 0], [0, 1]], "signs": [1, 0]}', None, 1),
        ('{"mean": [0, 0]}', None, None),
        ("[1, 2]", None, None),
    ],
)
def test_parse_error(text, row, col):
    with pytest.raises(ParseError) as e:
        parse_problem(text)

    assert (e.value.row, e.value.col) == (row, col)


def test_missing_file(tmpdir):
    with pytest.raises(ParseError):
        load_problem(str(tmpdir.join("missing.json")))


def test_load(tmpdir):
    path = tmpdir.join("p.json")
    path.write('{"mean": [0.5], "cov": [[2.0]]}')

    assert load_problem(str(path)).spec.cov.tolist() == [[2.0]]
