from __future__ import print_function

import sys
import logging
import argparse
from multiprocessing import freeze_support

import numpy as np

from . import __version__
from .bench import run_bench, parse_dims
from .error import HGMException, OracleMismatch, OracleInapplicable
from ._util import PathType, dumps, module_prog
from .oracles import (
    mc_orthant,
    standardize,
    direct_g_quadrature,
    bivariate_reference,
    univariate_reference,
    equicorrelated_reference,
)
from ._base.model import DEFAULT_MAX_DIM, HARD_MAX_DIM, natural_params, validate_problem
from .probability import (
    SUM_CHECK_MAX_DIM,
    log_prefactor,
    orthant_probability,
    signed_orthant_table,
    orthant_probability_signed,
)
from .problem_file import load_problem
from ._base.config import IntegratorConfig

logger = logging.getLogger(__package__)

EQUICORR_ATOL = 1e-12
ORACLES = ("mc", "equicorr", "bivariate", "univariate", "quadrature")


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        err = {"error": "UsageError", "message": message, "exit_code": 2}
        print(dumps(err))  # noqa: T003
        sys.exit(2)


def add_integrator_arguments(parser, max_dim):
    parser.add_argument("input", type=PathType, metavar="FILE", help="problem file (json)")
    parser.add_argument("--rtol", type=float, default=1e-10, help="relative tolerance")
    parser.add_argument("--atol", type=float, default=1e-12, help="absolute tolerance")
    parser.add_argument(
        "--method", choices=["rk4", "rkf45"], default="rkf45", help="integrator (default: rkf45)"
    )
    parser.add_argument("--max-steps", type=int, default=10 ** 6, help="step limit")
    parser.add_argument(
        "--initial-step", type=float, default=1e-3, help="first step (rk4: fixed step)"
    )
    parser.add_argument(
        "--max-dim",
        type=int,
        default=max_dim,
        help="dimension cap (default: {}, at most {})".format(max_dim, HARD_MAX_DIM),
    )
    parser.add_argument(
        "--no-verify",
        action="store_true",
        help="skip the second rkf45 run at halved tolerances",
    )
    parser.add_argument(
        "--no-timing",
        action="store_true",
        help="write elapsed_seconds as 0 (byte-identical output)",
    )


def make_parser():
    parser = ArgumentParser(prog=module_prog(__package__))
    parser.add_argument(
        "--version", action="version", version="{}-{}".format(__package__, __version__)
    )
    parser.add_argument("-v", "--verbosity", action="count", default=0, help="verbosity")

    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    compute = sub.add_parser("compute", help="orthant probability of a problem file")
    add_integrator_arguments(compute, DEFAULT_MAX_DIM)

    check = sub.add_parser("sum-check", help="sum of all 2^d orthant probabilities")
    add_integrator_arguments(check, SUM_CHECK_MAX_DIM)
    check.add_argument(
        "-p", "--processes", default=1, type=int, help="number of processes (default: 1)"
    )
    check.add_argument("-q", "--quiet", action="store_true", help="hide progress bar")

    compare = sub.add_parser("compare", help="compare with an independent oracle")
    add_integrator_arguments(compare, DEFAULT_MAX_DIM)
    compare.add_argument("--oracle", choices=ORACLES, required=True, help="reference method")
    compare.add_argument("--samples", type=int, default=10 ** 6, help="monte carlo samples")
    compare.add_argument("--seed", type=int, default=0, help="monte carlo seed")
    compare.add_argument(
        "--tolerance", type=float, default=1e-6, help="allowed difference (default: 1e-6)"
    )

    bench = sub.add_parser("bench", help="timings across dimensions")
    bench.add_argument("--dims", type=parse_dims, default="5..12", help="e.g. 5..12 or 5,8")
    bench.add_argument("--trials", type=int, default=3, help="problems per dimension")
    bench.add_argument("--seed", type=int, default=0, help="random seed")
    bench.add_argument(
        "--sum-check-max-dim", type=int, default=8, help="largest dimension to sum-check"
    )
    bench.add_argument("--csv", action="store_true", help="print csv instead of json")
    bench.add_argument("-q", "--quiet", action="store_true", help="hide progress bar")

    return parser


def integrator_config(p):
    return IntegratorConfig(
        method=p.method,
        rtol=p.rtol,
        atol=p.atol,
        initial_step=p.initial_step,
        max_steps=p.max_steps,
        verify=not p.no_verify,
    )


def evaluate(p, config):
    problem = load_problem(p.input)
    if problem.signs is None:
        result = orthant_probability(problem.spec, config, p.max_dim)
    else:
        result = orthant_probability_signed(problem.spec, problem.signs, config, p.max_dim)

    return problem, result


def cmd_compute(p):
    _, result = evaluate(p, integrator_config(p))
    return result.asdict(timing=not p.no_timing)


def cmd_sum_check(p):
    config = integrator_config(p)
    problem = load_problem(p.input)
    table = signed_orthant_table(
        problem.spec, config, nproc=p.processes, quiet=p.quiet, max_dim=p.max_dim
    )

    return {
        "error": abs(1.0 - sum(r.probability for _, r in table)),
        "orthants": [{"signs": list(s), "probability": r.probability} for s, r in table],
        "config": config.to_json(),
    }


def equicorrelation(spec):
    std = standardize(spec)
    d = std.dim
    off = std.cov[~np.eye(d, dtype=bool)]

    if d == 1:
        return std, 0.0

    if np.ptp(off) > EQUICORR_ATOL:
        raise OracleInapplicable("equicorr", "correlations are not all equal")

    rho = float(np.mean(off))
    if rho < -EQUICORR_ATOL:
        raise OracleInapplicable("equicorr", "negative correlation {!r}".format(rho))

    return std, max(rho, 0.0)


def reference(oracle, spec, p):
    r"""Oracle value and pass threshold."""
    d = spec.dim
    extra = {}

    if oracle == "mc":
        est = mc_orthant(spec, samples=p.samples, seed=p.seed)
        extra = {"std_error": est.std_error, "samples": est.samples, "seed": est.seed}
        return est.estimate, max(p.tolerance, 3 * est.std_error), extra

    if oracle == "equicorr":
        std, rho = equicorrelation(spec)
        extra = {"rho": rho}
        return equicorrelated_reference(d, rho, shifts=std.mean), p.tolerance, extra

    if oracle == "bivariate":
        if d != 2:
            raise OracleInapplicable("bivariate", "dimension {} != 2".format(d))

        std = standardize(spec)
        if np.any(std.mean != 0):
            raise OracleInapplicable("bivariate", "mean is not zero")

        return bivariate_reference(std.cov[0, 1]), p.tolerance, extra

    if oracle == "univariate":
        if d != 1:
            raise OracleInapplicable("univariate", "dimension {} != 1".format(d))

        return univariate_reference(spec.mean[0], spec.cov[0, 0]), p.tolerance, extra

    if oracle == "quadrature":
        if d > 3:
            raise OracleInapplicable("quadrature", "dimension {} > 3".format(d))

        params = natural_params(spec)
        g = direct_g_quadrature(params.x, params.y, (1 << d) - 1)
        return float(np.exp(log_prefactor(spec)) * g), p.tolerance, extra

    raise ValueError("unknown oracle: {!r}".format(oracle))


def cmd_compare(p):
    problem, result = evaluate(p, integrator_config(p))

    spec = validate_problem(problem.spec, p.max_dim)
    if problem.signs is not None:
        spec = spec.transformed(problem.signs)

    value, threshold, extra = reference(p.oracle, spec, p)
    difference = abs(result.probability - value)
    logger.info("hgm %r, %s %r, difference %.3e", result.probability, p.oracle, value, difference)

    if not difference <= threshold:
        raise OracleMismatch(p.oracle, difference, threshold)

    report = {
        "oracle": p.oracle,
        "probability": result.probability,
        "reference": value,
        "difference": difference,
        "tolerance": threshold,
    }
    report.update(extra)
    return report


def cmd_bench(p):
    report = run_bench(
        p.dims, trials=p.trials, seed=p.seed, sum_check_max_dim=p.sum_check_max_dim, quiet=p.quiet
    )

    if p.csv:
        try:
            return report.pandas().to_csv(index=False)
        except ImportError:
            logger.warning("pandas is not installed, writing json")

    return report.to_json()


commands = {
    "compute": cmd_compute,
    "sum-check": cmd_sum_check,
    "compare": cmd_compare,
    "bench": cmd_bench,
}


def fail(error, code):
    logger.error("%s", error)
    if isinstance(error, HGMException):
        print(dumps(error.to_json()))  # noqa: T003
    else:
        print(  # noqa: T003
            dumps({"error": error.__class__.__name__, "message": str(error), "exit_code": code})
        )

    sys.exit(code)


def main(args=None):
    parser = make_parser()
    p = parser.parse_args(args)

    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s:%(name)s: %(message)s"))
    logger.addHandler(handler)
    logger.setLevel([logging.WARNING, logging.INFO, logging.DEBUG][min(p.verbosity, 2)])

    try:
        out = commands[p.command](p)
    except HGMException as e:
        fail(e, e.exit_code)
    except ValueError as e:
        fail(e, 2)
    finally:
        logger.removeHandler(handler)

    if isinstance(out, str):
        sys.stdout.write(out)
    else:
        print(dumps(out))  # noqa: T003

    return 0


if __name__ == "__main__":
    freeze_support()
    sys.exit(main())
