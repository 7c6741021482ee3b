from __future__ import print_function

import os
import sys
import json
import math

import six
import numpy as np


def parse_enum(enum, v):
    if isinstance(v, enum):
        return v

    try:
        return enum[v]
    except KeyError:
        return enum(v)


class DummyBar(object):
    def __init__(self, *args, **kwargs):
        pass

    def __enter__(self):
        return self

    def __exit__(self, *args, **kws):
        pass

    def update(self, *args, **kws):
        pass

    @classmethod
    def write(cls, s, file=sys.stderr, end="\n"):
        print(s, file=file, end=end)  # noqa: T003


def PathType(string):
    if not os.path.isfile(string):
        raise ValueError("file not exists: {}".format(string))

    return string


def module_prog(pkg):
    return "{} -m {}".format(os.path.basename(sys.executable), pkg)


def format_float(v):
    r"""Format float with 17 significant digits.

    >>> format_float(0.25)
    '0.25'
    >>> format_float(1.0 / 3.0)
    '0.33333333333333331'
    >>> format_float(float("nan"))
    'NaN'

    """
    if math.isnan(v):
        return "NaN"

    if math.isinf(v):
        return "Infinity" if v > 0 else "-Infinity"

    s = "{:.17g}".format(v)
    if "e" not in s and "." not in s:
        s += ".0"

    return s


def dumps(obj, indent=2, _level=0):
    r"""Serialize to json, writing every float with 17 significant digits.

    >>> print(dumps({"p": 0.5, "n": [1, 2]}, indent=None))
    {"n": [1, 2], "p": 0.5}

    """
    if isinstance(obj, (bool, np.bool_)) or obj is None:
        return json.dumps(bool(obj) if obj is not None else None)

    if isinstance(obj, (six.integer_types, np.integer)):
        return str(int(obj))

    if isinstance(obj, (float, np.floating)):
        return format_float(float(obj))

    if isinstance(obj, six.string_types):
        return json.dumps(obj)

    if isinstance(obj, np.ndarray):
        obj = obj.tolist()

    if indent is None:
        sep, pad, end = ", ", "", ""
    else:
        sep = ",\n"
        pad = "\n" + " " * (indent * (_level + 1))
        end = "\n" + " " * (indent * _level)

    def sub(v):
        return dumps(v, indent, _level + 1)

    if isinstance(obj, dict):
        if not obj:
            return "{}"

        items = [
            "{}: {}".format(json.dumps(str(k)), sub(obj[k])) for k in sorted(obj)
        ]
        if indent is None:
            return "{" + sep.join(items) + "}"

        return "{" + pad + (sep + " " * (indent * (_level + 1))).join(items) + end + "}"

    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"

        items = [sub(v) for v in obj]
        if indent is None or all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(items) + "]"

        return "[" + pad + (sep + " " * (indent * (_level + 1))).join(items) + end + "]"

    raise TypeError("{!r} is not json serializable".format(obj))
