r"""Timing of the holonomic gradient method across dimensions."""

import logging

import numpy as np

from .probability import orthant_sum_check
from ._base.model import ProblemSpec
from ._base.config import IntegratorConfig
from ._base.calculator import OrthantCalculator

__all__ = ("random_correlation", "parse_dims", "BenchReport", "run_bench")

logger = logging.getLogger(__name__)

EXTRA_VECTORS = 2


def random_correlation(d, rng):
    r"""Random correlation matrix.

    Gram matrix of d gaussian vectors in :math:`R^{d+2}`, scaled to unit diagonal.

    >>> import numpy as np
    >>> R = random_correlation(3, np.random.default_rng(0))
    >>> np.diag(R).tolist()
    [1.0, 1.0, 1.0]

    """
    V = rng.standard_normal((d, d + EXTRA_VECTORS))
    G = V.dot(V.T)
    s = np.sqrt(np.diag(G))
    R = G / np.outer(s, s)
    R = (R + R.T) / 2
    np.fill_diagonal(R, 1.0)
    return R


def parse_dims(s):
    r"""Parse "5..12" or "5,7,9".

    >>> parse_dims("5..8")
    [5, 6, 7, 8]
    >>> parse_dims("2,4")
    [2, 4]

    """
    if ".." in s:
        lo, hi = s.split("..", 1)
        dims = list(range(int(lo), int(hi) + 1))
    else:
        dims = [int(v) for v in s.split(",") if v.strip()]

    if not dims or min(dims) < 1:
        raise ValueError("invalid dimensions: {!r}".format(s))

    return dims


class BenchReport(object):
    r"""Rows of per-dimension timings."""

    columns = (
        "dim",
        "trials",
        "mean_seconds",
        "min_seconds",
        "max_seconds",
        "failures",
        "max_sum_check_error",
    )

    __slots__ = ("rows", "seed")

    def __init__(self, rows, seed):
        self.rows = rows
        self.seed = seed

    def to_json(self):
        return {"seed": self.seed, "rows": self.rows}

    def pandas(self):
        from pandas import DataFrame

        return DataFrame(self.rows, columns=list(self.columns))


def run_bench(dims, trials=3, seed=0, sum_check_max_dim=8, config=None, quiet=True):
    r"""Time zero-mean random problems.

    Failures are counted, not raised. The sum check runs on the first trial
    of each dimension up to `sum_check_max_dim`.

    Returns:
        BenchReport

    """
    if config is None:
        config = IntegratorConfig()

    rng = np.random.default_rng(seed)
    calc = OrthantCalculator(config, max_dim=max(dims))
    rows = []

    for d in dims:
        specs = [ProblemSpec(np.zeros(d), random_correlation(d, rng)) for _ in range(trials)]

        times = []
        failures = 0
        for spec, r in zip(specs, calc.map(specs, nproc=1, quiet=quiet)):
            if calc.is_failure(r):
                failures += 1
                logger.warning("d=%d: %s", d, r.error)
                continue

            times.append(r.elapsed_seconds)

        error = None
        if d <= sum_check_max_dim and specs:
            try:
                error = orthant_sum_check(specs[0], config)
            except Exception as e:
                logger.warning("d=%d sum check: %s", d, e)

        row = {
            "dim": d,
            "trials": trials,
            "mean_seconds": float(np.mean(times)) if times else None,
            "min_seconds": float(np.min(times)) if times else None,
            "max_seconds": float(np.max(times)) if times else None,
            "failures": failures,
            "max_sum_check_error": error,
        }
        logger.info("d=%d mean %s s, %d failures", d, row["mean_seconds"], failures)
        rows.append(row)

    return BenchReport(rows, seed)
