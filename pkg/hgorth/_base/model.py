r"""Problem types and the transform to natural parameters.

A problem :math:`X \sim N(\mu, \Sigma)` is mapped to

.. math::

    y = \Sigma^{-1}\mu, \qquad x = -\frac{1}{2}\Sigma^{-1}

so that the orthant integrand becomes :math:`\exp(t^T x t + y^T t)`.
"""

import logging
from functools import reduce

import numpy as np
from scipy import linalg

from ..error import NotSymmetric, NonFiniteValue, DimensionTooLarge, NotPositiveDefinite

logger = logging.getLogger(__name__)

DEFAULT_MAX_DIM = 12
HARD_MAX_DIM = 20
SYMMETRY_RTOL = 1e-12


def _frozen(a, ndim):
    a = np.array(a, dtype=float)
    if a.ndim != ndim:
        raise ValueError("expected {}-dimensional array, got shape {}".format(ndim, a.shape))

    a.flags.writeable = False
    return a


class ProblemSpec(object):
    r"""Mean vector and covariance matrix of a multivariate normal.

    Parameters:
        mean(array_like): :math:`\mu`, length d
        cov(array_like): :math:`\Sigma`, d x d

    """

    __slots__ = ("mean", "cov")

    def __init__(self, mean, cov):
        mean = _frozen(mean, 1)
        cov = _frozen(cov, 2)

        if cov.shape != (len(mean), len(mean)):
            raise ValueError(
                "cov shape {} does not match mean length {}".format(cov.shape, len(mean))
            )

        self.mean = mean
        self.cov = cov

    def __reduce_ex__(self, version):
        return self.__class__, (self.mean, self.cov)

    @property
    def dim(self):
        return len(self.mean)

    def transformed(self, signs):
        r"""Problem of :math:`D X` with :math:`D = {\rm diag}(\varepsilon)`.

        Returns:
            ProblemSpec

        """
        s = np.asarray(signs, dtype=float)
        return self.__class__(s * self.mean, self.cov * np.outer(s, s))

    def __repr__(self):
        return "{}({!r}, {!r})".format(
            self.__class__.__name__, self.mean.tolist(), self.cov.tolist()
        )


def _first_failing_minor(cov):
    for k in range(1, len(cov) + 1):
        try:
            linalg.cholesky(cov[:k, :k], lower=True)
        except linalg.LinAlgError:
            return k

    return len(cov)


def validate_problem(spec, max_dim=DEFAULT_MAX_DIM):
    r"""Check ProblemSpec invariants.

    Parameters:
        spec(ProblemSpec): problem
        max_dim(int): dimension cap, at most 20

    Returns:
        ProblemSpec: spec itself, or a symmetrized copy when the asymmetry is within tolerance

    Raises:
        NotSymmetric, NotPositiveDefinite, DimensionTooLarge, NonFiniteValue

    """
    if max_dim > HARD_MAX_DIM:
        raise ValueError("dimension cap {} exceeds hard ceiling {}".format(max_dim, HARD_MAX_DIM))

    d = spec.dim
    if d < 1:
        raise ValueError("empty problem")

    if d > max_dim:
        raise DimensionTooLarge(d, max_dim)

    for name in ("mean", "cov"):
        if not np.all(np.isfinite(getattr(spec, name))):
            raise NonFiniteValue(name)

    cov = spec.cov
    asym = np.max(np.abs(cov - cov.T))
    tol = SYMMETRY_RTOL * np.max(np.abs(cov))
    if asym > tol:
        raise NotSymmetric(float(asym), float(tol))

    if asym > 0:
        logger.warning("symmetrizing covariance (asymmetry %.3e)", asym)
        spec = ProblemSpec(spec.mean, (cov + cov.T) / 2)

    try:
        linalg.cholesky(spec.cov, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(_first_failing_minor(spec.cov))

    return spec


def _symmetric(a):
    return (a + a.T) / 2


class NaturalParams(object):
    r"""Natural parameters :math:`(x, y)`.

    x is symmetrized on construction, so that x[i, j] == x[j, i] holds bitwise.
    """

    __slots__ = ("x", "y")

    def __init__(self, x, y):
        self.x = _frozen(_symmetric(np.asarray(x, dtype=float)), 2)
        self.y = _frozen(y, 1)

    def __reduce_ex__(self, version):
        return self.__class__, (self.x, self.y)

    @property
    def dim(self):
        return len(self.y)


def natural_params(spec):
    r"""Transform :math:`(\Sigma, \mu)` to :math:`(x, y)`.

    >>> p = natural_params(ProblemSpec([2.0], [[2.0]]))
    >>> float(p.x[0, 0]), float(p.y[0])
    (-0.25, 1.0)

    Raises:
        NotPositiveDefinite

    """
    try:
        L = linalg.cholesky(spec.cov, lower=True)
    except linalg.LinAlgError:
        raise NotPositiveDefinite(_first_failing_minor(spec.cov))

    Linv = linalg.solve_triangular(L, np.eye(spec.dim), lower=True)
    y = linalg.cho_solve((L, True), spec.mean)

    return NaturalParams(-0.5 * Linv.T.dot(Linv), y)


class SubsetIndex(object):
    r"""Subset :math:`J \subset [d]` as a bitmask.

    bit i stands for coordinate i (0-based).

    >>> J = SubsetIndex.from_elements([0, 2], 3)
    >>> J.mask, J.elements, 2 in J, len(J)
    (5, (0, 2), True, 2)
    >>> J.without(0).mask
    4

    """

    __slots__ = ("mask", "dim")

    def __init__(self, mask, dim):
        mask = int(mask)
        if not 0 <= mask < (1 << dim):
            raise ValueError("mask {} out of range for dimension {}".format(mask, dim))

        self.mask = mask
        self.dim = dim

    def __reduce_ex__(self, version):
        return self.__class__, (self.mask, self.dim)

    @classmethod
    def from_elements(cls, elements, dim):
        return cls(reduce(lambda m, i: m | (1 << i), elements, 0), dim)

    @classmethod
    def full(cls, dim):
        return cls((1 << dim) - 1, dim)

    @classmethod
    def empty(cls, dim):
        return cls(0, dim)

    @property
    def elements(self):
        return tuple(i for i in range(self.dim) if self.mask >> i & 1)

    def without(self, i):
        return self.__class__(self.mask & ~(1 << i), self.dim)

    def __contains__(self, i):
        return bool(self.mask >> i & 1)

    def __len__(self):
        return bin(self.mask).count("1")

    def __index__(self):
        return self.mask

    __int__ = __index__

    def __eq__(self, other):
        return (
            isinstance(other, SubsetIndex)
            and (self.mask, self.dim) == (other.mask, other.dim)
        )

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash((self.mask, self.dim))

    def __repr__(self):
        return "{}({:#b}, {})".format(self.__class__.__name__, self.mask, self.dim)


def as_mask(J):
    return J.mask if isinstance(J, SubsetIndex) else int(J)


class TangentCoefficients(object):
    r"""Velocity of the path.

    dxdt: full symmetric velocity matrix, zero diagonal on straight-line paths.
    dydt: velocity vector.
    """

    __slots__ = ("dxdt", "dydt")

    def __init__(self, dxdt, dydt):
        self.dxdt = dxdt
        self.dydt = dydt

    def off_diagonal(self):
        r"""Velocity coordinates :math:`\dot{x}_{ij}` for i < j.

        Returns:
            dict[(int, int), float]

        """
        i, j = np.triu_indices(len(self.dydt), 1)
        return {(a, b): float(self.dxdt[a, b]) for a, b in zip(i, j)}


class PathSpec(object):
    r"""Straight-line homotopy from the decoupled start point.

    .. math::

        x(t) = (1 - t) x_0 + t x_1, \qquad y(t) = t y_1

    where :math:`x_0` is the diagonal part of :math:`x_1`.
    """

    __slots__ = ("x0", "x1", "y1")

    def __init__(self, x0, x1, y1):
        x0 = _frozen(x0, 2)
        if np.any(x0 != np.diag(np.diag(x0))):
            raise ValueError("x0 must be diagonal")

        x1 = _frozen(x1, 2)
        if np.any(np.diag(x0) != np.diag(x1)):
            raise ValueError("diagonal of x0 must equal that of x1")

        self.x0 = x0
        self.x1 = x1
        self.y1 = _frozen(y1, 1)

    def __reduce_ex__(self, version):
        return self.__class__, (self.x0, self.x1, self.y1)

    @property
    def dim(self):
        return len(self.y1)

    def x_at(self, t):
        return (1 - t) * self.x0 + t * self.x1

    def y_at(self, t):
        return t * self.y1

    @property
    def dxdt(self):
        return self.x1 - self.x0

    @property
    def dydt(self):
        return self.y1

    def coefficients(self):
        return TangentCoefficients(self.dxdt, self.dydt)

    @property
    def is_stationary(self):
        return not (np.any(self.dxdt) or np.any(self.y1))

    def info(self):
        return {
            "dim": self.dim,
            "max_offdiag_velocity": float(np.max(np.abs(self.dxdt))) if self.dim > 0 else 0.0,
            "max_y": float(np.max(np.abs(self.y1))) if self.dim > 0 else 0.0,
        }


def build_path(params):
    r"""Build the path of the holonomic gradient method.

    Parameters:
        params(NaturalParams): target point

    Returns:
        PathSpec

    """
    x = params.x
    return PathSpec(np.diag(np.diag(x)), x, params.y)


class LatticeLevel(object):
    r"""All subsets of one cardinality s.

    masks: (n,) bitmasks
    elements: (n, s) sorted coordinates of each subset
    children: (n, s) masks of :math:`J \setminus \{j\}` for each element j
    """

    __slots__ = ("size", "masks", "elements", "children")

    def __init__(self, size, masks, elements, children):
        self.size = size
        self.masks = masks
        self.elements = elements
        self.children = children


class SubsetLattice(object):
    r"""Nonempty subsets of [d] grouped by cardinality.

    >>> lat = SubsetLattice.of(3)
    >>> [lv.masks.tolist() for lv in lat.levels]
    [[1, 2, 4], [3, 5, 6], [7]]
    >>> lat.levels[1].children.tolist()
    [[2, 1], [4, 1], [4, 2]]

    """

    __slots__ = ("dim", "levels", "bits")

    _cache = {}

    def __init__(self, dim):
        masks = np.arange(1 << dim)
        bits = (masks[:, np.newaxis] >> np.arange(dim)) & 1
        sizes = bits.sum(axis=1)

        levels = []
        for s in range(1, dim + 1):
            m = masks[sizes == s]
            E = np.nonzero(bits[m])[1].reshape(len(m), s)
            levels.append(LatticeLevel(s, m, E, m[:, np.newaxis] ^ (1 << E)))

        self.dim = dim
        self.levels = tuple(levels)
        self.bits = bits.astype(bool)

    @classmethod
    def of(cls, dim):
        lat = cls._cache.get(dim)
        if lat is None:
            lat = cls._cache[dim] = cls(dim)

        return lat

    @property
    def size(self):
        return 1 << self.dim
