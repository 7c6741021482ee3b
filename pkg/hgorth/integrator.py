r"""Runge-Kutta integration of the Pfaffian system along the path.

Start values at the decoupled point :math:`x(0) = {\rm diag}(x_1)`, :math:`y(0) = 0`:

.. math::

    g_J(x(0), y(0)) = \prod_{j \in J} \left(-\frac{\pi}{4 x_{jj}}\right)^{1/2}

rkf45 propagates the fifth order solution and keeps the local error estimate below
the mixed tolerance times the step length, so that the local errors over [0, 1] add
up to at most the tolerance.
"""

import logging
from math import ceil
from collections import namedtuple

import numpy as np

from .error import (
    StepUnderflow,
    NonFiniteState,
    MaxStepsExceeded,
    RefinementMismatch,
    NonNegativeDiagonal,
)
from .pfaffian import StateVector, tangent
from ._base.config import Method, IntegratorConfig
from ._base.model import SubsetLattice

__all__ = ("Trajectory", "initial_state", "integrate", "integrate_verified")

logger = logging.getLogger(__name__)

MIN_STEP = 1e-14
SAFETY = 0.9
MIN_FACTOR = 0.2
MAX_FACTOR = 5.0
REFINEMENT_FACTOR = 10.0

Tableau = namedtuple("Tableau", "nodes a b error order")

tableaus = {}


def tableau(method):
    def proc(f):
        tableaus[method] = f()
        return f

    return proc


@tableau(Method.rkf45)
def fehlberg():
    # 5th order propagated, error row is b5 - b4
    return Tableau(
        nodes=(0.0, 1 / 4, 3 / 8, 12 / 13, 1.0, 1 / 2),
        a=(
            (),
            (1 / 4,),
            (3 / 32, 9 / 32),
            (1932 / 2197, -7200 / 2197, 7296 / 2197),
            (439 / 216, -8.0, 3680 / 513, -845 / 4104),
            (-8 / 27, 2.0, -3544 / 2565, 1859 / 4104, -11 / 40),
        ),
        b=(16 / 135, 0.0, 6656 / 12825, 28561 / 56430, -9 / 50, 2 / 55),
        error=(1 / 360, 0.0, -128 / 4275, -2197 / 75240, 1 / 50, 2 / 55),
        order=5,
    )


@tableau(Method.rk4)
def classical():
    return Tableau(
        nodes=(0.0, 1 / 2, 1 / 2, 1.0),
        a=((), (1 / 2,), (0.0, 1 / 2), (0.0, 0.0, 1.0)),
        b=(1 / 6, 1 / 3, 1 / 3, 1 / 6),
        error=None,
        order=4,
    )


class Trajectory(object):
    r"""Result of an integration.

    Attributes:
        final_state(StateVector): state at t=1
        steps_taken(int): accepted steps
        rejected_steps(int): rejected or split steps
        sample_points(list[(float, StateVector)]): recorded states

    """

    __slots__ = ("final_state", "steps_taken", "rejected_steps", "sample_points")

    def __init__(self, final_state, steps_taken, rejected_steps, sample_points=None):
        self.final_state = final_state
        self.steps_taken = steps_taken
        self.rejected_steps = rejected_steps
        self.sample_points = sample_points or []

    def sample(self, t):
        for s, G in self.sample_points:
            if s == t:
                return G

        raise KeyError(t)


def initial_state(path):
    r"""State at t=0.

    >>> import numpy as np
    >>> from hgorth._base.model import PathSpec
    >>> G = initial_state(PathSpec(-np.pi / 4 * np.eye(2), -np.pi / 4 * np.eye(2), np.zeros(2)))
    >>> G.values.tolist()
    [1.0, 1.0, 1.0, 1.0]

    Raises:
        NonNegativeDiagonal

    """
    diag = np.diag(path.x0)
    for i, v in enumerate(diag):
        if not v < 0:
            raise NonNegativeDiagonal(i, float(v))

    single = np.sqrt(-np.pi / (4 * diag))
    bits = SubsetLattice.of(path.dim).bits

    return StateVector(np.prod(np.where(bits, single, 1.0), axis=1))


def _stage(scheme, t, G, h, path):
    k = []
    for c, row in zip(scheme.nodes, scheme.a):
        Y = G
        for a, kk in zip(row, k):
            if a != 0.0:
                Y = Y + (h * a) * kk

        k.append(tangent(t + c * h, Y, path))

    new = G + h * sum(b * kk for b, kk in zip(scheme.b, k) if b != 0.0)
    if scheme.error is None:
        return new, None

    return new, h * sum(e * kk for e, kk in zip(scheme.error, k) if e != 0.0)


def _check_finite(t, G):
    if not np.all(np.isfinite(G)):
        raise NonFiniteState(float(t))


class _Integration(object):
    __slots__ = (
        "path", "config", "scheme", "targets", "record",
        "t", "G", "steps", "rejected", "samples",
    )

    def __init__(self, path, config, checkpoints, record):
        checkpoints = tuple(checkpoints)
        self.path = path
        self.config = config
        self.scheme = tableaus[config.method]
        self.targets = sorted(set(float(c) for c in checkpoints if 0 < c < 1)) + [1.0]
        self.record = record

        self.t = 0.0
        self.G = np.array(initial_state(path).values)
        self.steps = 0
        self.rejected = 0
        self.samples = [(0.0, StateVector(self.G))] if record or checkpoints else []

    def attempt(self):
        if self.steps + self.rejected >= self.config.max_steps:
            raise MaxStepsExceeded(self.t, self.config.max_steps)

    def accept(self, t, G, target):
        G[0] = 1.0
        self.t = t
        self.G = G
        self.steps += 1

        if self.record or t == target:
            self.samples.append((t, StateVector(G)))

    def rkf45(self):
        rtol = self.config.rtol
        atol = self.config.atol
        h = 1.0 if self.path.is_stationary else self.config.initial_step
        # error per unit step, the estimate is O(h^order)
        exponent = -1.0 / (self.scheme.order - 1)

        for target in self.targets:
            while self.t < target:
                self.attempt()

                last = self.t + h >= target
                step = target - self.t if last else h
                new, err = _stage(self.scheme, self.t, self.G, step, self.path)
                _check_finite(self.t, new)

                scale = atol + rtol * np.maximum(np.abs(self.G), np.abs(new))
                norm = float(np.max(np.abs(err) / scale)) / step

                if norm <= 1.0 and np.all(new > 0):
                    self.accept(target if last else self.t + step, new, target)
                    factor = MAX_FACTOR if norm == 0 else SAFETY * norm ** exponent
                    h = step * min(MAX_FACTOR, max(MIN_FACTOR, factor))
                    continue

                self.rejected += 1
                if norm <= 1.0:
                    h = step / 2
                    logger.debug("nonpositive component at t=%r, halving to %g", self.t, h)
                else:
                    h = step * max(MIN_FACTOR, SAFETY * norm ** exponent)

                if h < MIN_STEP:
                    raise StepUnderflow(self.t, h)

    def rk4_step(self, end, target):
        self.attempt()

        h = end - self.t
        new, _ = _stage(self.scheme, self.t, self.G, h, self.path)
        _check_finite(self.t, new)

        if np.all(new > 0):
            self.accept(end, new, target)
            return

        self.rejected += 1
        if h / 2 < MIN_STEP:
            raise StepUnderflow(self.t, h / 2)

        self.rk4_step(self.t + h / 2, target)
        self.rk4_step(end, target)

    def rk4(self):
        n = int(ceil(1 / self.config.initial_step - 1e-9))
        h = 1.0 / n

        for target in self.targets:
            while self.t < target:
                end = self.t + h
                self.rk4_step(target if end >= target - 1e-12 else end, target)

    def run(self):
        if self.config.method is Method.rk4:
            self.rk4()
        else:
            self.rkf45()

        logger.debug(
            "integrated d=%d in %d steps (%d rejected)", self.path.dim, self.steps, self.rejected
        )

        return Trajectory(StateVector(self.G), self.steps, self.rejected, self.samples)


def integrate(path, config=None, checkpoints=(), record=False):
    r"""Integrate the Pfaffian system from t=0 to t=1.

    Parameters:
        path(PathSpec): path
        config(IntegratorConfig): settings, defaults when None
        checkpoints(Iterable[float]): times in (0, 1) to land on and record
        record(bool): record every accepted step

    Returns:
        Trajectory

    Raises:
        MaxStepsExceeded, StepUnderflow, NonFiniteState, SingularSubmatrix, NonNegativeDiagonal

    """
    if config is None:
        config = IntegratorConfig()

    return _Integration(path, config, checkpoints, record).run()


def refinement_change(coarse, fine):
    r"""Relative change of :math:`g_{[d]}` between two trajectories."""
    a = coarse.final_state.full
    b = fine.final_state.full
    return abs(a - b) / abs(b)


def integrate_verified(path, config=None):
    r"""Integrate, then check the result under halved tolerances.

    The run at halved tolerances is returned. Its :math:`g_{[d]}` must agree with the
    first run within 10 rtol, relative.

    Returns:
        (Trajectory, float or None): trajectory and the relative change,
        None when the check does not apply (rk4, verify off, stationary path)

    Raises:
        RefinementMismatch, and everything integrate raises

    """
    if config is None:
        config = IntegratorConfig()

    coarse = integrate(path, config)
    if not config.verified or path.is_stationary:
        return coarse, None

    fine = integrate(path, config.refined())
    change = refinement_change(coarse, fine)
    bound = REFINEMENT_FACTOR * config.rtol

    logger.debug("refinement changed g by %.3e (bound %.3e)", change, bound)
    if not change < bound:
        raise RefinementMismatch(coarse.final_state.full, fine.final_state.full, bound)

    return fine, change
