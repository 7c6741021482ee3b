from enum import Enum

from .._util import parse_enum


class Method(Enum):
    rk4 = "rk4-fixed"
    rkf45 = "rkf45-adaptive"


class IntegratorConfig(object):
    r"""Integrator settings.

    Parameters:
        method(Method or str): "rkf45" (default) or "rk4", names or values of Method
        rtol(float): relative tolerance, 0 < rtol < 1
        atol(float): absolute tolerance, atol > 0
        initial_step(float): first step of rkf45; rk4 takes ceil(1 / initial_step) steps
        max_steps(int): limit on attempted steps
        verify(bool): repeat rkf45 at halved tolerances and reject results
            which move by more than 10 rtol

    >>> IntegratorConfig(method="rk4-fixed").method
    <Method.rk4: 'rk4-fixed'>

    """

    __slots__ = ("method", "rtol", "atol", "initial_step", "max_steps", "verify")

    def __init__(
        self,
        method=Method.rkf45,
        rtol=1e-10,
        atol=1e-12,
        initial_step=1e-3,
        max_steps=10 ** 6,
        verify=True,
    ):
        method = parse_enum(Method, method)
        rtol = float(rtol)
        atol = float(atol)
        initial_step = float(initial_step)
        max_steps = int(max_steps)

        if not 0 < rtol < 1:
            raise ValueError("rtol must be in (0, 1): {!r}".format(rtol))

        if not atol > 0:
            raise ValueError("atol must be positive: {!r}".format(atol))

        if not 0 < initial_step <= 1:
            raise ValueError("initial_step must be in (0, 1]: {!r}".format(initial_step))

        if max_steps < 1:
            raise ValueError("max_steps must be >= 1: {!r}".format(max_steps))

        self.method = method
        self.rtol = rtol
        self.atol = atol
        self.initial_step = initial_step
        self.max_steps = max_steps
        self.verify = bool(verify)

    def parameters(self):
        return self.method, self.rtol, self.atol, self.initial_step, self.max_steps, self.verify

    def __reduce_ex__(self, version):
        return self.__class__, self.parameters()

    def replace(self, **kwargs):
        args = self.asdict()
        args.update(kwargs)
        return self.__class__(**args)

    def refined(self):
        r"""Copy with both tolerances halved.

        >>> IntegratorConfig(rtol=1e-8, atol=1e-10).refined().rtol
        5e-09

        """
        return self.replace(rtol=self.rtol / 2, atol=self.atol / 2)

    @property
    def verified(self):
        return self.verify and self.method is Method.rkf45

    def asdict(self):
        return dict(zip(self.__slots__, self.parameters()))

    def to_json(self):
        d = self.asdict()
        d["method"] = self.method.value
        return d

    def __eq__(self, other):
        return isinstance(other, IntegratorConfig) and self.parameters() == other.parameters()

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.parameters())

    def __repr__(self):
        return "{}({})".format(
            self.__class__.__name__,
            ", ".join("{}={!r}".format(k, v) for k, v in sorted(self.asdict().items())),
        )
