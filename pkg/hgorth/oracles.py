r"""Independent reference values for orthant probabilities.

None of these share code with the holonomic gradient engine beyond input
validation.
"""

from collections import namedtuple

import numpy as np
from scipy import linalg, special, integrate

from .error import InvalidRho, InvalidVariance, TooHighDimension
from .pfaffian import subset_moments
from ._base.model import HARD_MAX_DIM, ProblemSpec, SubsetIndex, as_mask, validate_problem

__all__ = (
    "McEstimate",
    "mc_orthant",
    "equicorrelated_reference",
    "bivariate_reference",
    "univariate_reference",
    "direct_g_quadrature",
    "standardize",
)

McEstimate = namedtuple("McEstimate", "estimate std_error samples seed")

MIN_SAMPLES = 1000
HERMITE_POINTS = 200
QUAD_RADIUS = 12.0
QUAD_TOL = 1e-12
DIRECT_TOL = 1e-10
ENVELOPE = np.sqrt(2 * np.log(1e18))


def mc_orthant(spec, samples=10 ** 6, seed=0, chunk=100000):
    r"""Monte Carlo estimate of the positive orthant probability.

    Draws :math:`X = \mu + L Z` in chunks of `chunk` rows from a seeded
    :py:class:`numpy.random.Generator`.

    >>> mc_orthant(ProblemSpec([0.0], [[1.0]]), samples=1000, seed=1) == \
    ...     mc_orthant(ProblemSpec([0.0], [[1.0]]), samples=1000, seed=1)
    True

    Returns:
        McEstimate

    """
    samples = int(samples)
    if samples < MIN_SAMPLES:
        raise ValueError("samples must be >= {}: {}".format(MIN_SAMPLES, samples))

    spec = validate_problem(spec, HARD_MAX_DIM)
    L = linalg.cholesky(spec.cov, lower=True)
    rng = np.random.default_rng(seed)

    hits = 0
    remaining = samples
    while remaining > 0:
        n = min(chunk, remaining)
        X = spec.mean + rng.standard_normal((n, spec.dim)).dot(L.T)
        hits += int(np.count_nonzero(np.all(X >= 0, axis=1)))
        remaining -= n

    p = hits / float(samples)
    return McEstimate(p, float(np.sqrt(p * (1 - p) / samples)), samples, seed)


def _shifts(d, shifts):
    if shifts is None:
        return np.zeros(d)

    shifts = np.asarray(shifts, dtype=float)
    if shifts.shape != (d,):
        raise ValueError("shifts must have length {}: {}".format(d, shifts.shape))

    return shifts


def equicorrelated_reference(d, rho, shifts=None, method="quad"):
    r"""Orthant probability of a unit-variance equicorrelated normal.

    .. math::

        \int_{-\infty}^{\infty} \phi(s) \prod_i
            \Phi\left(\frac{\sqrt{\rho} s + \mu_i}{\sqrt{1 - \rho}}\right) ds

    >>> round(equicorrelated_reference(10, 0.5), 10) == round(1 / 11.0, 10)
    True

    Parameters:
        d(int): dimension
        rho(float): common correlation, 0 <= rho < 1
        shifts(Iterable[float]): means, zero when None
        method(str): "quad" (adaptive) or "hermite" (200 point Gauss-Hermite)

    Raises:
        InvalidRho

    """
    rho = float(rho)
    if not 0 <= rho < 1:
        raise InvalidRho(rho)

    mu = _shifts(int(d), shifts)

    if rho == 0:
        return float(np.prod(special.ndtr(mu)))

    a = np.sqrt(rho)
    b = np.sqrt(1 - rho)

    if method == "hermite":
        u, w = np.polynomial.hermite.hermgauss(HERMITE_POINTS)
        s = np.sqrt(2) * u
        values = np.prod(special.ndtr((a * s[:, None] + mu) / b), axis=1)
        return float(w.dot(values) / np.sqrt(np.pi))

    if method != "quad":
        raise ValueError("unknown method: {!r}".format(method))

    def f(s):
        return np.exp(-0.5 * s * s) / np.sqrt(2 * np.pi) * np.prod(special.ndtr((a * s + mu) / b))

    value, _ = integrate.quad(
        f, -QUAD_RADIUS, QUAD_RADIUS, epsabs=QUAD_TOL, epsrel=QUAD_TOL, limit=200
    )
    return float(value)


def bivariate_reference(rho):
    r"""Zero-mean bivariate orthant law :math:`\frac{1}{4} + \frac{\arcsin\rho}{2\pi}`.

    >>> bivariate_reference(0.0)
    0.25

    """
    rho = float(rho)
    if not -1 < rho < 1:
        raise InvalidRho(rho)

    return 0.25 + np.arcsin(rho) / (2 * np.pi)


def univariate_reference(mu, var):
    r"""Compute :math:`\Phi(\mu / \sqrt{var})`.

    >>> univariate_reference(0.0, 1.0)
    0.5

    """
    var = float(var)
    if not var > 0:
        raise InvalidVariance(var)

    return float(0.5 * special.erfc(-float(mu) / np.sqrt(2 * var)))


def direct_g_quadrature(x, y, J, moment=()):
    r"""Evaluate :math:`g_J(x, y)` by adaptive quadrature of its defining integral.

    Each :math:`t_j` is integrated over :math:`[0, R_j]`,
    :math:`R_j = \max(\mu^J_j, 0) + \sqrt{2 \ln 10^{18}} \sqrt{\sigma^J_{jj}}`.

    >>> import numpy as np
    >>> round(direct_g_quadrature(-0.5 * np.eye(1), np.zeros(1), 1), 10)
    1.2533141373

    Parameters:
        x(numpy.ndarray): symmetric matrix
        y(numpy.ndarray): vector
        J(SubsetIndex or int): subset with at most 3 elements
        moment(tuple[int]): coordinates in J whose t multiplies the integrand,
            (i,) gives the y_i derivative and (i, j) the second derivative

    Raises:
        TooHighDimension, SingularSubmatrix

    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    J = SubsetIndex(as_mask(J), len(y))
    e = J.elements

    if len(e) > 3:
        raise TooHighDimension(len(e))

    for i in moment:
        if i not in J:
            raise ValueError("moment coordinate {} not in {!r}".format(i, J))

    if not e:
        return 1.0

    m = subset_moments(x, y, J)
    radius = np.maximum(m.mu, 0) + ENVELOPE * np.sqrt(np.diag(m.sigma))

    xJ = x[np.ix_(e, e)]
    yJ = y[list(e)]
    local = [e.index(i) for i in moment]

    def f(*t):
        t = np.array(t)
        v = np.exp(t.dot(xJ).dot(t) + yJ.dot(t))
        for k in local:
            v *= t[k]
        return v

    value, _ = integrate.nquad(
        f, [(0.0, r) for r in radius], opts={"epsabs": DIRECT_TOL, "epsrel": DIRECT_TOL}
    )
    return float(value)


def standardize(spec):
    r"""Scale to unit variances.

    Orthant probabilities are invariant under positive diagonal scaling.

    >>> standardize(ProblemSpec([2.0], [[4.0]])).mean.tolist()
    [1.0]

    Returns:
        ProblemSpec: correlation matrix and standardized mean

    """
    s = np.sqrt(np.diag(spec.cov))
    if not np.all(s > 0):
        raise InvalidVariance(float(np.min(np.diag(spec.cov))))

    return ProblemSpec(spec.mean / s, spec.cov / np.outer(s, s))
