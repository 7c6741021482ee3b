r"""Pfaffian system of the orthant integrals.

For :math:`J \subset [d]` let

.. math::

    g_J(x, y) = \int_0^\infty \cdots \int_0^\infty
        \exp\left(\sum_{i,j \in J} x_{ij} t_i t_j + \sum_{k \in J} y_k t_k\right) dt_J,
    \qquad g_\emptyset = 1.

With :math:`\Sigma_J = -\frac{1}{2} x_J^{-1}` and :math:`\mu^J = \Sigma_J y_J`,

.. math::

    \partial_{y_i} g_J = \mu^J_i g_J + \sum_{j \in J} \sigma^J_{ij} g_{J \setminus \{j\}}
    \quad (i \in J)

and differentiating once more (:math:`\partial_{y_j} \mu^J_i = \sigma^J_{ij}`)

.. math::

    \partial_{y_i} \partial_{y_j} g_J = \mu^J_i \partial_{y_j} g_J + \sigma^J_{ij} g_J
        + \sum_{k \in J} \sigma^J_{ik} \partial_{y_j} g_{J \setminus \{k\}}.

The x-derivatives are :math:`\partial_{x_{ij}} g_J = 2 \partial_{y_i} \partial_{y_j} g_J`
(:math:`i < j`) and :math:`\partial_{x_{ii}} g_J = \partial_{y_i}^2 g_J`.
The state vector :math:`G = (g_J)_J` is indexed by bitmask; nothing here ever
builds the :math:`2^d \times 2^d` connection matrices.
"""

from collections import namedtuple

import numpy as np
from scipy import linalg

from .error import SingularSubmatrix
from ._base.model import SubsetIndex, SubsetLattice, as_mask

__all__ = (
    "StateVector",
    "SubsetMoments",
    "MomentTable",
    "subset_moments",
    "grad_y",
    "hess_yy",
    "pfaffian_derivatives",
    "tangent",
    "annihilator_residual",
    "normalized_residual",
)

MOMENT_ATOL = 1e-10

SubsetMoments = namedtuple("SubsetMoments", "subset sigma mu")


def _values(G):
    return np.asarray(getattr(G, "values", G), dtype=float)


class StateVector(object):
    r"""Values :math:`(g_J)_{J \subset [d]}` indexed by bitmask.

    >>> G = StateVector([1.0, 2.0, 3.0, 4.0])
    >>> G.dim, G.full, G[SubsetIndex(2, 2)], G.is_valid()
    (2, 4.0, 3.0, True)

    """

    __slots__ = ("values",)

    def __init__(self, values):
        values = np.array(values, dtype=float)
        n = len(values)
        if values.ndim != 1 or n == 0 or n & (n - 1):
            raise ValueError("state length must be a power of two: {}".format(values.shape))

        values.flags.writeable = False
        self.values = values

    def __reduce_ex__(self, version):
        return self.__class__, (self.values,)

    @property
    def dim(self):
        return len(self.values).bit_length() - 1

    @property
    def full(self):
        return float(self.values[-1])

    def __getitem__(self, J):
        return float(self.values[as_mask(J)])

    def __len__(self):
        return len(self.values)

    def is_valid(self):
        return bool(self.values[0] == 1.0 and np.all(self.values > 0))


def subset_moments(x, y, J):
    r"""Compute :math:`\Sigma_J` and :math:`\mu^J`.

    Parameters:
        x(numpy.ndarray): symmetric matrix, -x positive definite
        y(numpy.ndarray): vector
        J(SubsetIndex or int): nonempty subset

    Returns:
        SubsetMoments

    Raises:
        SingularSubmatrix

    """
    d = len(y)
    mask = as_mask(J)
    e = np.array([i for i in range(d) if mask >> i & 1], dtype=int)
    if len(e) == 0:
        raise ValueError("empty subset has no moments")

    xJ = x[np.ix_(e, e)]
    try:
        c = linalg.cho_factor(-2 * xJ, lower=True)
    except linalg.LinAlgError:
        raise SingularSubmatrix(mask)

    sigma = linalg.cho_solve(c, np.eye(len(e)))
    sigma = (sigma + sigma.T) / 2

    if not np.allclose(-2 * sigma.dot(xJ), np.eye(len(e)), rtol=0, atol=MOMENT_ATOL):
        raise SingularSubmatrix(mask)

    return SubsetMoments(SubsetIndex(mask, d), sigma, sigma.dot(y[e]))


def _failing_mask(A, masks):
    for a, m in zip(A, masks):
        try:
            np.linalg.cholesky(a)
        except np.linalg.LinAlgError:
            return int(m)


class MomentTable(object):
    r"""Moments of every nonempty subset at one point (x, y).

    Subsets of equal size are factorized together with stacked Cholesky
    decompositions of :math:`-2 x_J`.
    """

    __slots__ = ("lattice", "sigmas", "mus")

    def __init__(self, x, y, lattice=None):
        if lattice is None:
            lattice = SubsetLattice.of(len(y))

        sigmas = []
        mus = []
        for lv in lattice.levels:
            E = lv.elements
            A = -2 * x[E[:, :, np.newaxis], E[:, np.newaxis, :]]

            try:
                L = np.linalg.cholesky(A)
            except np.linalg.LinAlgError:
                raise SingularSubmatrix(_failing_mask(A, lv.masks))

            Linv = np.linalg.solve(L, np.broadcast_to(np.eye(lv.size), A.shape))
            S = np.matmul(np.swapaxes(Linv, 1, 2), Linv)

            sigmas.append(S)
            mus.append(np.matmul(S, y[E][:, :, np.newaxis])[:, :, 0])

        self.lattice = lattice
        self.sigmas = sigmas
        self.mus = mus

    def moments(self, J):
        mask = as_mask(J)
        if mask == 0:
            raise ValueError("empty subset has no moments")

        s = bin(mask).count("1")
        lv = self.lattice.levels[s - 1]
        n = np.searchsorted(lv.masks, mask)

        return SubsetMoments(
            SubsetIndex(mask, self.lattice.dim), self.sigmas[s - 1][n], self.mus[s - 1][n]
        )


def _moments(x, y, mask, table):
    if table is None:
        return subset_moments(x, y, mask)

    return table.moments(mask)


def grad_y(G, x, y, i, J, table=None):
    r"""First derivative :math:`\partial_{y_i} g_J`.

    >>> import numpy as np
    >>> G = [1.0, np.sqrt(np.pi / 2)]
    >>> grad_y(G, np.array([[-0.5]]), np.zeros(1), 0, 1)
    1.0
    >>> grad_y(G, np.array([[-0.5]]), np.zeros(1), 0, 0)
    0.0

    Parameters:
        G(StateVector or array_like): state consistent with (x, y)
        i(int): coordinate (0-based)
        J(SubsetIndex or int): subset
        table(MomentTable): moments at (x, y), computed on demand when None

    Returns:
        float

    """
    mask = as_mask(J)
    if not mask >> i & 1:
        return 0.0

    G = _values(G)
    m = _moments(x, y, mask, table)
    e = m.subset.elements
    p = e.index(i)

    children = [mask ^ (1 << k) for k in e]
    return float(m.mu[p] * G[mask] + m.sigma[p].dot(G[children]))


def hess_yy(G, x, y, i, j, J, table=None):
    r"""Second derivative :math:`\partial_{y_i} \partial_{y_j} g_J`.

    >>> import numpy as np
    >>> G = [1.0, np.sqrt(np.pi / 2)]
    >>> round(hess_yy(G, np.array([[-0.5]]), np.zeros(1), 0, 0, 1), 10)
    1.2533141373

    Returns:
        float: 0 unless both i and j are in J

    """
    mask = as_mask(J)
    if not (mask >> i & 1 and mask >> j & 1):
        return 0.0

    G = _values(G)
    m = _moments(x, y, mask, table)
    e = m.subset.elements
    p = e.index(i)

    value = m.mu[p] * grad_y(G, x, y, j, mask, table) + m.sigma[p, e.index(j)] * G[mask]
    for q, k in enumerate(e):
        value += m.sigma[p, q] * grad_y(G, x, y, j, mask ^ (1 << k), table)

    return float(value)


PfaffianDerivatives = namedtuple("PfaffianDerivatives", "grad hess table")


def pfaffian_derivatives(G, x, y, table=None, with_hess=True):
    r"""All first and second y-derivatives of the state.

    Returns:
        PfaffianDerivatives:
            grad: (2^d, d) array, grad[J, i] = d g_J / d y_i (0 when i not in J)

            hess: list over subset sizes s of (n_s, s, s) arrays in element coordinates

            table: MomentTable used

    """
    G = _values(G)
    if table is None:
        table = MomentTable(x, y)

    lattice = table.lattice
    levels = zip(lattice.levels, table.sigmas, table.mus)

    grad = np.zeros((lattice.size, lattice.dim))
    for lv, S, mu in levels:
        local = mu * G[lv.masks][:, np.newaxis] + np.matmul(S, G[lv.children][:, :, np.newaxis])[
            :, :, 0
        ]
        grad[lv.masks[:, np.newaxis], lv.elements] = local

    hess = []
    if with_hess:
        for lv, S, mu in zip(lattice.levels, table.sigmas, table.mus):
            E = lv.elements
            local = grad[lv.masks[:, np.newaxis], E]
            C = grad[lv.children[:, :, np.newaxis], E[:, np.newaxis, :]]

            H = (
                mu[:, :, np.newaxis] * local[:, np.newaxis, :]
                + S * G[lv.masks][:, np.newaxis, np.newaxis]
                + np.matmul(S, C)
            )
            hess.append(H)

    return PfaffianDerivatives(grad, hess, table)


def tangent(t, G, path, table=None):
    r"""Derivative of the state along the path.

    .. math::

        \frac{d g_J}{dt} = \sum_{i \in J} \dot{y}_i \partial_{y_i} g_J
            + \sum_{i, j \in J} \dot{x}_{ij} \partial_{y_i} \partial_{y_j} g_J

    Off-diagonal pairs appear twice in the second sum, matching the factor 2
    of :math:`\partial_{x_{ij}}`.

    Parameters:
        t(float): path time
        G(StateVector or array_like): state at t
        path(PathSpec): path

    Returns:
        numpy.ndarray: derivative, exactly 0 at the empty subset

    Raises:
        SingularSubmatrix

    """
    G = _values(G)
    x = path.x_at(t)
    y = path.y_at(t)
    xv = path.dxdt
    yv = path.dydt

    moving = bool(np.any(xv))
    der = pfaffian_derivatives(G, x, y, table=table, with_hess=moving)

    dG = der.grad.dot(yv)
    dG[0] = 0.0

    if moving:
        for lv, H in zip(der.table.lattice.levels, der.hess):
            E = lv.elements
            V = xv[E[:, :, np.newaxis], E[:, np.newaxis, :]]
            dG[lv.masks] += (V * H).sum(axis=(1, 2))

    return dG


def _residual(G, x, y, der, lv, H, n):
    E = lv.elements[n]
    mask = lv.masks[n]
    xJ = x[np.ix_(E, E)]
    return 2 * (xJ * H[n]).sum(axis=1) + y[E] * der.grad[mask, E] + G[mask]


def annihilator_residual(G, x, y, subsets=False, derivatives=None):
    r"""Residual of the annihilating operators

    .. math::

        2 \sum_k x_{ik} \partial_{y_i} \partial_{y_k} + y_i \partial_{y_i} + 1

    applied to :math:`g_{[d]}` for i = 1, ..., d.

    The derivatives come from the Pfaffian recurrences, so the residual vanishes up to
    rounding for every state vector G. It checks the recurrence algebra, not how well G
    approximates the true integrals.

    Parameters:
        subsets(bool): debug mode; apply the same operator with
            :math:`(x_J, y_J)` to every :math:`g_J`

    Returns:
        numpy.ndarray or dict[int, numpy.ndarray]:
            residual vector, or residual vectors keyed by mask when subsets is True

    """
    G = _values(G)
    der = derivatives
    if der is None:
        der = pfaffian_derivatives(G, x, y)

    levels = der.table.lattice.levels

    if not subsets:
        return _residual(G, x, y, der, levels[-1], der.hess[-1], 0)

    return {
        int(lv.masks[n]): _residual(G, x, y, der, lv, H, n)
        for lv, H in zip(levels, der.hess)
        for n in range(len(lv.masks))
    }


def normalized_residual(G, x, y):
    r"""Scale-free residual :math:`\max_i |r_i| / g_{[d]}`.

    A consistency check of the recurrences, see annihilator_residual.
    """
    G = _values(G)
    return float(np.max(np.abs(annihilator_residual(G, x, y))) / G[-1])
