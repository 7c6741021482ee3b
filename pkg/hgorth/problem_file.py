r"""Problem file reader.

A problem file is a json document::

    {"mean": [0.0, 0.0], "cov": [[1.0, 0.5], [0.5, 1.0]], "signs": [1, -1]}

"signs" is optional. Rows and columns in error messages are 0-based indices
into "cov" (or "mean"/"signs"), except for json syntax errors which carry
the 1-based line and column of the document.
"""

import json
import math
from collections import namedtuple

import six

from .error import ParseError
from ._base.model import ProblemSpec

__all__ = ("ProblemFile", "load_problem", "parse_problem")

ProblemFile = namedtuple("ProblemFile", "spec signs")


def _number(v, what, row=None, col=None):
    if isinstance(v, bool) or not isinstance(v, (six.integer_types, float)):
        raise ParseError("{} must be a number: {!r}".format(what, v), row, col)

    v = float(v)
    if not math.isfinite(v):
        raise ParseError("{} must be finite: {!r}".format(what, v), row, col)

    return v


def _array(v, what):
    if not isinstance(v, list):
        raise ParseError("{} must be an array: {!r}".format(what, v))

    return v


def parse_problem(text):
    r"""Parse a problem document.

    >>> parse_problem('{"mean": [0], "cov": [[2]]}').spec.cov.tolist()
    [[2.0]]

    Returns:
        ProblemFile

    Raises:
        ParseError

    """
    try:
        doc = json.loads(text)
    except ValueError as e:
        raise ParseError(
            "invalid json: {}".format(getattr(e, "msg", e)),
            getattr(e, "lineno", None),
            getattr(e, "colno", None),
        )

    if not isinstance(doc, dict):
        raise ParseError("problem must be a json object")

    for key in ("mean", "cov"):
        if key not in doc:
            raise ParseError("missing key: {!r}".format(key))

    mean = [_number(v, "mean entry", col=i) for i, v in enumerate(_array(doc["mean"], "mean"))]
    d = len(mean)
    if d == 0:
        raise ParseError("mean must not be empty")

    cov_rows = _array(doc["cov"], "cov")
    if len(cov_rows) != d:
        raise ParseError(
            "cov has {} rows, expected {}".format(len(cov_rows), d), row=min(len(cov_rows), d)
        )

    cov = []
    for i, row in enumerate(cov_rows):
        if not isinstance(row, list):
            raise ParseError("cov row must be an array: {!r}".format(row), row=i)

        if len(row) != d:
            raise ParseError(
                "cov row has {} entries, expected {}".format(len(row), d),
                row=i,
                col=min(len(row), d),
            )

        cov.append([_number(v, "cov entry", row=i, col=j) for j, v in enumerate(row)])

    signs = doc.get("signs")
    if signs is not None:
        signs = _array(signs, "signs")
        if len(signs) != d:
            raise ParseError("signs has {} entries, expected {}".format(len(signs), d))

        for j, s in enumerate(signs):
            if isinstance(s, bool) or s not in (1, -1):
                raise ParseError("sign must be 1 or -1: {!r}".format(s), col=j)

        signs = tuple(int(s) for s in signs)

    return ProblemFile(ProblemSpec(mean, cov), signs)


def load_problem(path):
    r"""Read a problem file.

    Parameters:
        path(str): file path

    Returns:
        ProblemFile

    """
    try:
        with open(path) as f:
            text = f.read()
    except (IOError, OSError) as e:
        raise ParseError("cannot read {}: {}".format(path, e))

    return parse_problem(text)
