import numpy as np
import pytest
from numpy.testing import assert_allclose

from hgorth import ProblemSpec
from hgorth.error import SingularSubmatrix
from hgorth.oracles import direct_g_quadrature
from hgorth.pfaffian import (
    MomentTable,
    StateVector,
    grad_y,
    hess_yy,
    tangent,
    subset_moments,
    normalized_residual,
    annihilator_residual,
    pfaffian_derivatives,
)
from hgorth.integrator import initial_state
from hgorth._base.model import PathSpec, build_path, natural_params

from .problems import random_problem

points = [
    # diagonal
    (np.diag([-0.5, -0.5]), np.zeros(2)),
    (np.diag([-0.5, -1.0]), np.array([0.3, -0.2])),
    # coupled
    (np.array([[-0.6, 0.2], [0.2, -0.8]]), np.array([0.4, 0.1])),
    (np.array([[-1.0, -0.3], [-0.3, -0.7]]), np.array([-0.5, 0.6])),
]


def quadrature_state(x, y):
    d = len(y)
    return np.array([direct_g_quadrature(x, y, m) for m in range(1 << d)])


def test_hessian_one_dimension():
    G = [1.0, np.sqrt(np.pi / 2)]
    x = np.array([[-0.5]])
    y = np.zeros(1)

    assert hess_yy(G, x, y, 0, 0, 1) == pytest.approx(np.sqrt(np.pi / 2), abs=1e-12)
    assert direct_g_quadrature(x, y, 1, moment=(0, 0)) == pytest.approx(
        np.sqrt(np.pi / 2), abs=1e-8
    )


@pytest.mark.parametrize("x, y", points)
def test_hessian_against_quadrature(x, y):
    G = quadrature_state(x, y)

    for i in range(2):
        assert grad_y(G, x, y, i, 3) == pytest.approx(
            direct_g_quadrature(x, y, 3, moment=(i,)), abs=1e-6
        )

        for j in range(2):
            assert hess_yy(G, x, y, i, j, 3) == pytest.approx(
                direct_g_quadrature(x, y, 3, moment=(i, j)), abs=1e-6
            )


@pytest.mark.parametrize("x, y", points)
def test_finite_difference(x, y):
    eps = 1e-4
    G = quadrature_state(x, y)

    for i in range(2):
        e = np.zeros(2)
        e[i] = eps
        fd = (direct_g_quadrature(x, y + e, 3) - direct_g_quadrature(x, y - e, 3)) / (2 * eps)
        assert grad_y(G, x, y, i, 3) == pytest.approx(fd, abs=1e-5)


def test_vectorized_matches_scalar():
    spec = random_problem(4, 11, mean_scale=0.5)
    p = natural_params(spec)
    G = np.linspace(1.0, 2.0, 16)
    G[0] = 1.0

    der = pfaffian_derivatives(G, p.x, p.y)
    for lv, H in zip(der.table.lattice.levels, der.hess):
        for n, (m, E) in enumerate(zip(lv.masks, lv.elements)):
            for a, i in enumerate(E):
                assert der.grad[m, i] == pytest.approx(
                    grad_y(G, p.x, p.y, i, m), rel=1e-12, abs=1e-13
                )
                for b, j in enumerate(E):
                    assert H[n, a, b] == pytest.approx(
                        hess_yy(G, p.x, p.y, i, j, m), rel=1e-10, abs=1e-12
                    )


def test_moment_table():
    spec = random_problem(5, 3, mean_scale=1.0)
    p = natural_params(spec)
    table = MomentTable(p.x, p.y)

    for m in (1, 6, 21, 31):
        a = subset_moments(p.x, p.y, m)
        b = table.moments(m)
        assert_allclose(a.sigma, b.sigma, rtol=1e-12, atol=1e-14)
        assert_allclose(a.mu, b.mu, rtol=1e-12, atol=1e-14)


def test_singular_submatrix():
    x = np.array([[-1.0, 2.0], [2.0, -1.0]])

    with pytest.raises(SingularSubmatrix) as e:
        subset_moments(x, np.zeros(2), 3)
    assert e.value.mask == 3

    with pytest.raises(SingularSubmatrix):
        MomentTable(x, np.zeros(2))


def test_linearity():
    x, y = points[2]
    G = quadrature_state(x, y)

    a = pfaffian_derivatives(G, x, y).grad
    b = pfaffian_derivatives(2 * G, x, y).grad
    assert_allclose(b, 2 * a, rtol=1e-14)


def test_permutation_equivariance():
    x, y = points[3]
    G = quadrature_state(x, y)
    P = np.array([[0, 1], [1, 0]])
    Gp = G[[0, 2, 1, 3]]

    for i in range(2):
        assert grad_y(G, x, y, i, 3) == pytest.approx(
            grad_y(Gp, P.dot(x).dot(P), P.dot(y), 1 - i, 3), rel=1e-12
        )


def test_tangent_at_start():
    spec = ProblemSpec([0.0, 0.0], [[1.0, 0.5], [0.5, 1.0]])
    path = build_path(natural_params(spec))
    dG = tangent(0.0, initial_state(path), path)

    assert dG[0] == 0.0
    assert dG[3] == pytest.approx(0.375, abs=1e-12)
    assert dG[1] == 0.0 and dG[2] == 0.0


def test_tangent_finite_difference():
    x1, y1 = points[2]
    path = PathSpec(np.diag(np.diag(x1)), x1, y1)
    t = 0.5
    eps = 1e-3

    G = quadrature_state(path.x_at(t), path.y_at(t))
    forward = quadrature_state(path.x_at(t + eps), path.y_at(t + eps))
    backward = quadrature_state(path.x_at(t - eps), path.y_at(t - eps))

    assert_allclose(tangent(t, G, path), (forward - backward) / (2 * eps), atol=1e-5)


@pytest.mark.parametrize("x, y", points)
def test_annihilator_residual(x, y):
    G = quadrature_state(x, y)

    assert np.max(np.abs(annihilator_residual(G, x, y))) < 1e-6
    assert normalized_residual(G, x, y) < 1e-6

    for r in annihilator_residual(G, x, y, subsets=True).values():
        assert np.max(np.abs(r)) < 1e-6


def test_state_vector():
    with pytest.raises(ValueError):
        StateVector([1.0, 2.0, 3.0])

    G = StateVector([1.0, 0.5])
    assert G.dim == 1
    assert G.is_valid()
    assert not StateVector([1.0, -0.5]).is_valid()

    with pytest.raises(ValueError):
        G.values[0] = 2.0


def random_state(d, rng):
    G = rng.uniform(0.5, 2.0, 1 << d)
    G[0] = 1.0
    return G


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_tangent_linearity(seed):
    rng = np.random.default_rng(seed)
    path = build_path(natural_params(random_problem(4, 40 + seed, mean_scale=0.5)))
    G1 = random_state(4, rng)
    G2 = random_state(4, rng)
    a, b = rng.uniform(-2.0, 2.0, 2)
    t = rng.uniform()

    assert_allclose(
        tangent(t, a * G1 + b * G2, path),
        a * tangent(t, G1, path) + b * tangent(t, G2, path),
        rtol=1e-10,
        atol=1e-12,
    )


def permuted_masks(perm):
    # new coordinate i is old coordinate perm[i]
    d = len(perm)
    return np.array(
        [sum(1 << perm[i] for i in range(d) if m >> i & 1) for m in range(1 << d)]
    )


@pytest.mark.parametrize("perm", [[2, 0, 3, 1], [3, 2, 1, 0]])
def test_tangent_permutation(perm):
    spec = random_problem(4, 50, mean_scale=0.5)
    permuted = ProblemSpec(spec.mean[perm], spec.cov[np.ix_(perm, perm)])
    path = build_path(natural_params(spec))
    path_p = build_path(natural_params(permuted))
    order = permuted_masks(perm)
    G = random_state(4, np.random.default_rng(51))

    for t in (0.0, 0.3, 1.0):
        assert_allclose(
            tangent(t, G[order], path_p), tangent(t, G, path)[order], rtol=1e-10, atol=1e-12
        )


@pytest.mark.parametrize("d", [2, 3])
def test_residual_vanishes_for_any_state(d):
    p = natural_params(random_problem(d, 60 + d, mean_scale=0.5))
    G = random_state(d, np.random.default_rng(d))

    assert normalized_residual(G, p.x, p.y) < 1e-12
