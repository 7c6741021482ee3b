import numpy as np
import pytest
from numpy.testing import assert_allclose

from hgorth import ProblemSpec, IntegratorConfig
from hgorth import integrator
from hgorth.error import (
    StepUnderflow,
    NonFiniteState,
    MaxStepsExceeded,
    RefinementMismatch,
    NonNegativeDiagonal,
)
from hgorth.pfaffian import StateVector, normalized_residual
from hgorth.oracles import direct_g_quadrature
from hgorth.integrator import (
    Trajectory,
    integrate,
    initial_state,
    refinement_change,
    integrate_verified,
)
from hgorth._base.model import PathSpec, build_path, natural_params

from .problems import random_problem

tight = IntegratorConfig(rtol=1e-12, atol=1e-14)


def path_of(spec):
    return build_path(natural_params(spec))


def test_initial_state():
    path = path_of(ProblemSpec([0.0, 0.0, 0.0], np.eye(3)))
    G = initial_state(path)
    g1 = np.sqrt(np.pi / 2)

    assert G[0] == 1.0
    assert G[0b101] == pytest.approx(g1 ** 2, rel=1e-15)
    assert G.full == pytest.approx(g1 ** 3, rel=1e-15)


def test_initial_state_nonnegative_diagonal():
    path = PathSpec(np.diag([-1.0, 0.0]), np.diag([-1.0, 0.0]), np.zeros(2))

    with pytest.raises(NonNegativeDiagonal) as e:
        initial_state(path)

    assert e.value.index == 1


def test_stationary_path():
    path = path_of(ProblemSpec([0.0, 0.0], np.diag([1.0, 3.0])))
    trajectory = integrate(path)

    assert trajectory.steps_taken == 1
    assert trajectory.final_state.full == pytest.approx(np.pi / 2 * np.sqrt(3), rel=1e-14)


def test_against_quadrature():
    spec = ProblemSpec([0.4, -0.3], [[1.0, -0.4], [-0.4, 2.0]])
    params = natural_params(spec)
    G = integrate(build_path(params), tight).final_state

    for m in range(4):
        assert G[m] == pytest.approx(direct_g_quadrature(params.x, params.y, m), rel=1e-8)


@pytest.mark.parametrize("method", ["rk4", "rkf45"])
def test_state_positive(method):
    spec = random_problem(4, 1, mean_scale=1.0)
    G = integrate(path_of(spec), IntegratorConfig(method=method, initial_step=0.01)).final_state

    assert G.is_valid()


def test_methods_agree():
    path = path_of(random_problem(3, 5, mean_scale=0.5))
    a = integrate(path, IntegratorConfig(method="rk4", initial_step=1e-3)).final_state
    b = integrate(path, tight).final_state

    assert_allclose(a.values, b.values, rtol=1e-9)


def test_rk4_convergence_order():
    spec = ProblemSpec([0.3, -0.2, 0.1], [[1.0, 0.6, 0.3], [0.6, 1.0, 0.5], [0.3, 0.5, 1.0]])
    path = path_of(spec)
    exact = integrate(path, tight).final_state.values

    def error(h):
        G = integrate(path, IntegratorConfig(method="rk4", initial_step=h)).final_state
        return np.max(np.abs(G.values - exact))

    ratio = error(0.1) / error(0.05)
    assert 10 <= ratio <= 22


def test_rk4_step_count():
    path = path_of(random_problem(2, 0))
    trajectory = integrate(path, IntegratorConfig(method="rk4", initial_step=0.05))

    assert trajectory.steps_taken == 20
    assert trajectory.rejected_steps == 0


def test_tolerance_refinement():
    path = path_of(random_problem(3, 8, mean_scale=0.5))
    exact = integrate(path, tight).final_state.full

    coarse = integrate(path, IntegratorConfig(rtol=1e-6, atol=1e-8))
    fine = integrate(path, IntegratorConfig(rtol=1e-9, atol=1e-11))

    assert fine.steps_taken > coarse.steps_taken
    assert abs(fine.final_state.full - exact) <= abs(coarse.final_state.full - exact) + 1e-12


def test_max_steps():
    path = path_of(random_problem(3, 2, mean_scale=0.5))

    with pytest.raises(MaxStepsExceeded) as e:
        integrate(path, IntegratorConfig(max_steps=3))

    assert e.value.steps == 3
    assert 0 < e.value.t < 1


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_residual_along_path(d):
    spec = random_problem(d, 100 + d, mean_scale=0.5)
    path = path_of(spec)
    trajectory = integrate(path, checkpoints=[0.5])

    times = [t for t, _ in trajectory.sample_points]
    assert times == [0.0, 0.5, 1.0]

    for t in (0.0, 0.5, 1.0):
        G = trajectory.sample(t)
        assert normalized_residual(G.values, path.x_at(t), path.y_at(t)) < 1e-6


def test_record():
    path = path_of(random_problem(2, 4))
    trajectory = integrate(path, record=True)

    times = [t for t, _ in trajectory.sample_points]
    assert len(times) == trajectory.steps_taken + 1
    assert times == sorted(times)
    assert times[-1] == 1.0

    with pytest.raises(KeyError):
        trajectory.sample(0.123)


def test_config_validation():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0)

    with pytest.raises(ValueError):
        IntegratorConfig(atol=-1)

    with pytest.raises(ValueError):
        IntegratorConfig(method="euler")

    c = IntegratorConfig().replace(method="rk4")
    assert c.to_json()["method"] == "rk4-fixed"
    assert c == IntegratorConfig(method="rk4-fixed")


@pytest.mark.parametrize("seed", [1, 2, 3, 4, 5])
def test_refinement_invariant(seed):
    config = IntegratorConfig()
    path = path_of(random_problem(4, seed, mean_scale=0.5))

    coarse = integrate(path, config)
    fine = integrate(path, config.refined())

    assert refinement_change(coarse, fine) < 10 * config.rtol


def test_integrate_verified():
    path = path_of(random_problem(3, 6, mean_scale=0.5))
    trajectory, change = integrate_verified(path)

    assert change < 1e-9

    fine = integrate(path, IntegratorConfig().refined())
    assert trajectory.final_state.full == fine.final_state.full


@pytest.mark.parametrize(
    "spec, config",
    [
        (ProblemSpec([0.0, 0.0], np.diag([1.0, 2.0])), IntegratorConfig()),
        (random_problem(2, 7), IntegratorConfig(method="rk4")),
        (random_problem(2, 7), IntegratorConfig(verify=False)),
    ],
)
def test_integrate_verified_skipped(spec, config):
    path = path_of(spec)
    trajectory, change = integrate_verified(path, config)

    assert change is None
    assert trajectory.final_state.full == integrate(path, config).final_state.full


def test_refinement_mismatch(monkeypatch):
    real = integrator.integrate

    def perturbed(path, config=None, **kwargs):
        trajectory = real(path, config, **kwargs)
        if config.rtol < IntegratorConfig().rtol:
            values = trajectory.final_state.values * 1.001
            values[0] = 1.0
            return Trajectory(StateVector(values), trajectory.steps_taken, 0)

        return trajectory

    monkeypatch.setattr(integrator, "integrate", perturbed)

    with pytest.raises(RefinementMismatch) as e:
        integrate_verified(path_of(random_problem(2, 8)))

    assert e.value.change == pytest.approx(0.001 / 1.001, rel=1e-6)
    assert e.value.bound == pytest.approx(1e-9, rel=1e-12)
    assert e.value.to_json()["exit_code"] == 3


def test_positivity_split():
    spec = ProblemSpec([-6.0, -6.0], [[1.0, 0.9], [0.9, 1.0]])
    trajectory = integrate(path_of(spec), IntegratorConfig(method="rk4", initial_step=1.0))

    assert trajectory.rejected_steps >= 1
    assert trajectory.steps_taken == trajectory.rejected_steps + 1
    assert trajectory.final_state.is_valid()


@pytest.mark.parametrize("method", ["rk4", "rkf45"])
def test_non_finite_state(monkeypatch, method):
    monkeypatch.setattr(integrator, "tangent", lambda t, G, path: np.full(len(G), np.nan))

    with pytest.raises(NonFiniteState) as e:
        integrate(path_of(random_problem(2, 9)), IntegratorConfig(method=method))

    assert e.value.t == 0.0


@pytest.mark.parametrize("method", ["rk4", "rkf45"])
def test_step_underflow(monkeypatch, method):
    monkeypatch.setattr(integrator, "tangent", lambda t, G, path: np.full(len(G), -1e20))

    with pytest.raises(StepUnderflow) as e:
        integrate(path_of(random_problem(2, 10)), IntegratorConfig(method=method))

    assert e.value.h < 1e-14
    assert e.value.t == 0.0


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_path_negative_definite(d):
    path = path_of(random_problem(d, 200 + d, mean_scale=1.0))
    floor = min(np.linalg.eigvalsh(-path.x0).min(), np.linalg.eigvalsh(-path.x1).min())

    for t in (0.0, 0.25, 0.5, 0.75, 1.0):
        assert np.linalg.eigvalsh(-path.x_at(t)).min() >= floor - 1e-12
