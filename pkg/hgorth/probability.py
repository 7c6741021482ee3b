r"""Orthant probabilities.

Completing the square in the normal density,

.. math::

    -\frac{1}{2}(t - \mu)^T \Sigma^{-1} (t - \mu)
        = t^T x t + y^T t - \frac{1}{2}\mu^T \Sigma^{-1} \mu

so that

.. math::

    P(X_1 \ge 0, \dots, X_d \ge 0) = (2\pi)^{-d/2} \det(\Sigma)^{-1/2}
        \exp\left(-\frac{1}{2}\mu^T\Sigma^{-1}\mu\right) g(x, y).

In natural parameters the exponential factor is
:math:`\exp(\frac{1}{4} y^T x^{-1} y)`, not :math:`\exp(-\frac{1}{2} y^T x^{-1} y)`.
"""

import time
import logging
import itertools

import numpy as np
from scipy import linalg, special

from .error import NonFiniteState, DimensionTooLarge, ProbabilityOutOfRange
from .pfaffian import normalized_residual
from .integrator import REFINEMENT_FACTOR, integrate_verified
from ._base.model import DEFAULT_MAX_DIM, build_path, natural_params, validate_problem
from ._base.config import IntegratorConfig
from ._base.result import OrthantResult

__all__ = (
    "log_prefactor",
    "log_halfspace_bound",
    "orthant_probability",
    "orthant_probability_signed",
    "signed_orthant_table",
    "orthant_sum_check",
)

logger = logging.getLogger(__name__)

SUM_CHECK_MAX_DIM = 14


def log_prefactor(spec):
    r"""Logarithm of the density prefactor.

    >>> import numpy as np
    >>> from hgorth._base.model import ProblemSpec
    >>> lp = log_prefactor(ProblemSpec([0.0], [[1.0]]))
    >>> round(lp, 12) == round(-0.5 * np.log(2 * np.pi), 12)
    True

    """
    L = linalg.cholesky(spec.cov, lower=True)
    z = linalg.solve_triangular(L, spec.mean, lower=True)

    return float(
        -0.5 * spec.dim * np.log(2 * np.pi) - np.sum(np.log(np.diag(L))) - 0.5 * z.dot(z)
    )


def log_halfspace_bound(spec):
    r"""Logarithm of :math:`\min_i \Phi(\mu_i / \sigma_i)`.

    Every orthant lies inside each of its half-spaces.

    >>> from hgorth._base.model import ProblemSpec
    >>> round(float(np.exp(log_halfspace_bound(ProblemSpec([0.0, 3.0], np.eye(2))))), 12)
    0.5

    """
    return float(np.min(special.log_ndtr(spec.mean / np.sqrt(np.diag(spec.cov)))))


def orthant_probability(spec, config=None, max_dim=DEFAULT_MAX_DIM):
    r"""Evaluate :math:`P(X_1 \ge 0, \dots, X_d \ge 0)` by the holonomic gradient method.

    >>> from hgorth._base.model import ProblemSpec
    >>> round(orthant_probability(ProblemSpec([0.0], [[1.0]])).probability, 12)
    0.5

    With ``config.verify`` (the default) rkf45 runs twice, the second time at halved
    tolerances, and the second run is reported. A result above the smallest half-space
    probability by more than the integration error is rejected.

    Parameters:
        spec(ProblemSpec): problem
        config(IntegratorConfig): integrator settings
        max_dim(int): dimension cap

    Returns:
        OrthantResult

    Raises:
        RefinementMismatch: halving the tolerances moved g by 10 rtol or more
        ProbabilityOutOfRange: result exceeds the half-space bound

    """
    if config is None:
        config = IntegratorConfig()

    start = time.perf_counter()

    spec = validate_problem(spec, max_dim)
    params = natural_params(spec)
    path = build_path(params)
    trajectory, change = integrate_verified(path, config)

    G = trajectory.final_state
    g = G.full
    if not (np.isfinite(g) and g > 0):
        raise NonFiniteState(1.0)

    lp = log_prefactor(spec)
    log_p = lp + np.log(g)

    slack = max(REFINEMENT_FACTOR * config.rtol, change or 0.0)
    bound = log_halfspace_bound(spec)
    if log_p > bound + np.log1p(slack):
        raise ProbabilityOutOfRange(float(np.exp(log_p)), float(np.exp(bound)))

    probability = float(np.exp(log_p))
    if probability > 1.0:
        logger.warning("probability exceeds 1 by %.3e, within integration error", probability - 1)
        probability = 1.0

    residual = normalized_residual(G.values, params.x, params.y)

    return OrthantResult(
        probability=probability,
        g_value=g,
        log_prefactor=lp,
        steps=trajectory.steps_taken,
        rejected_steps=trajectory.rejected_steps,
        residual_norm=residual,
        path_info=path.info(),
        elapsed_seconds=time.perf_counter() - start,
        config=config,
        refinement_change=change,
    )


def _check_signs(signs, dim):
    signs = np.asarray(signs)
    if signs.shape != (dim,) or not np.all(np.abs(signs) == 1):
        raise ValueError("signs must be {} values of +1 or -1: {!r}".format(dim, signs))

    return tuple(int(s) for s in signs)


def orthant_probability_signed(spec, signs, config=None, max_dim=DEFAULT_MAX_DIM):
    r"""Probability of the orthant :math:`\{\varepsilon_i X_i \ge 0\}`.

    Parameters:
        signs(Iterable[int]): :math:`\varepsilon \in \{\pm 1\}^d`

    Returns:
        OrthantResult

    """
    signs = _check_signs(signs, spec.dim)
    result = orthant_probability(spec.transformed(signs), config, max_dim)
    result.signs = signs
    return result


def signed_orthant_table(spec, config=None, nproc=1, quiet=True, max_dim=SUM_CHECK_MAX_DIM):
    r"""Probabilities of all :math:`2^d` orthants.

    Signs are enumerated as ``itertools.product((1, -1), repeat=d)``.

    Returns:
        list[(tuple[int], OrthantResult)]

    Raises:
        DimensionTooLarge: d > max_dim

    """
    from ._base.calculator import OrthantCalculator

    if spec.dim > max_dim:
        raise DimensionTooLarge(spec.dim, max_dim)

    spec = validate_problem(spec, max_dim)
    calc = OrthantCalculator(config, max_dim=max_dim)

    signs = list(itertools.product((1, -1), repeat=spec.dim))
    results = list(
        calc.map(((spec, s) for s in signs), nproc=nproc, njobs=len(signs), quiet=quiet)
    )

    for r in results:
        if calc.is_failure(r):
            raise r.error

    return list(zip(signs, results))


def orthant_sum_check(spec, config=None, nproc=1, max_dim=SUM_CHECK_MAX_DIM):
    r"""Error :math:`|1 - \sum_\varepsilon P(X \in E_\varepsilon)|`.

    Returns:
        float

    """
    table = signed_orthant_table(spec, config, nproc=nproc, max_dim=max_dim)
    return abs(1.0 - sum(r.probability for _, r in table))
