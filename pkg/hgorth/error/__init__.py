"""Error objects."""

from abc import ABCMeta, abstractproperty

import six
import numpy as np


class MissingValueBase(six.with_metaclass(ABCMeta, object)):
    """Base class of failed batch results.

    Args:
        error (Exception): error object
        spec (ProblemSpec): problem which failed

    """

    __slots__ = "error", "spec"

    def __reduce_ex__(self, version):
        return self.__class__, (self.error, self.spec)

    def __init__(self, error, spec):
        self.error = error
        self.spec = spec

    def __float__(self):
        return np.nan

    def __str__(self):
        return "{} (d={})".format(self.error, getattr(self.spec, "dim", "?"))

    @abstractproperty
    def header(self):
        """Header of warning message.

        Returns:
            str

        """
        raise NotImplementedError("require header")


class Missing(MissingValueBase):
    """known errored value."""

    __slots__ = ()
    header = "Missing"


class Error(MissingValueBase):
    """unknown errored value."""

    __slots__ = ()
    header = "ERROR"


class HGMException(Exception):
    """Base class of all known failures."""

    exit_code = 1

    def fields(self):
        return {}

    def to_json(self):
        """Convert to json serializable error object.

        Returns:
            dict

        """
        d = {
            "error": self.__class__.__name__,
            "message": str(self),
            "exit_code": self.exit_code,
        }
        d.update(self.fields())
        return d


class ValidationError(HGMException):
    exit_code = 2


class NumericalError(HGMException):
    exit_code = 3


class OracleError(HGMException):
    exit_code = 2


class ParseError(ValidationError):
    """malformed problem file."""

    def __init__(self, message, row=None, col=None):
        super(ParseError, self).__init__(message, row, col)
        self.message = message
        self.row = row
        self.col = col

    def fields(self):
        return {"row": self.row, "col": self.col}

    def __str__(self):
        if self.row is None:
            return self.message

        if self.col is None:
            return "{} (row {})".format(self.message, self.row)

        return "{} (row {}, col {})".format(self.message, self.row, self.col)


class NotSymmetric(ValidationError):
    """covariance matrix is not symmetric."""

    def __init__(self, asymmetry, tolerance):
        super(NotSymmetric, self).__init__(asymmetry, tolerance)
        self.asymmetry = asymmetry
        self.tolerance = tolerance

    def fields(self):
        return {"asymmetry": self.asymmetry, "tolerance": self.tolerance}

    def __str__(self):
        return "covariance is not symmetric: asymmetry {:.3e} > {:.3e}".format(
            self.asymmetry, self.tolerance
        )


class NotPositiveDefinite(ValidationError):
    """Cholesky factorization failed."""

    def __init__(self, minor):
        super(NotPositiveDefinite, self).__init__(minor)
        self.minor = minor

    def fields(self):
        return {"minor": self.minor}

    def __str__(self):
        return "covariance is not positive definite: leading minor {} fails".format(
            self.minor
        )


class DimensionTooLarge(ValidationError):
    """dimension exceeds the configured cap."""

    def __init__(self, dim, cap):
        super(DimensionTooLarge, self).__init__(dim, cap)
        self.dim = dim
        self.cap = cap

    def fields(self):
        return {"dim": self.dim, "cap": self.cap}

    def __str__(self):
        return "dimension {} exceeds cap {}".format(self.dim, self.cap)


class NonFiniteValue(ValidationError):
    """mean or covariance holds NaN or infinity."""

    def __init__(self, name):
        super(NonFiniteValue, self).__init__(name)
        self.name = name

    def fields(self):
        return {"name": self.name}

    def __str__(self):
        return "{} has non-finite entries".format(self.name)


class SingularSubmatrix(NumericalError):
    """factorization of a principal submatrix of -x failed."""

    def __init__(self, mask):
        super(SingularSubmatrix, self).__init__(mask)
        self.mask = mask

    def fields(self):
        return {"mask": self.mask}

    def __str__(self):
        if self.mask is None:
            return "principal submatrix of -x is not positive definite"

        return "principal submatrix of -x is not positive definite (mask {:#b})".format(
            self.mask
        )


class NonNegativeDiagonal(NumericalError):
    """initial point has a nonnegative diagonal entry."""

    def __init__(self, index, value):
        super(NonNegativeDiagonal, self).__init__(index, value)
        self.index = index
        self.value = value

    def fields(self):
        return {"index": self.index, "value": self.value}

    def __str__(self):
        return "x[{0},{0}] = {1!r} is not negative".format(self.index, self.value)


class MaxStepsExceeded(NumericalError):
    """integrator ran out of steps."""

    def __init__(self, t, steps):
        super(MaxStepsExceeded, self).__init__(t, steps)
        self.t = t
        self.steps = steps

    def fields(self):
        return {"t": self.t, "steps": self.steps}

    def __str__(self):
        return "maximum number of steps ({}) exceeded at t={!r}".format(
            self.steps, self.t
        )


class StepUnderflow(NumericalError):
    """step size fell below the minimum."""

    def __init__(self, t, h):
        super(StepUnderflow, self).__init__(t, h)
        self.t = t
        self.h = h

    def fields(self):
        return {"t": self.t, "h": self.h}

    def __str__(self):
        return "step size {:.3e} underflow at t={!r}".format(self.h, self.t)


class NonFiniteState(NumericalError):
    """overflow or NaN in the state vector."""

    def __init__(self, t):
        super(NonFiniteState, self).__init__(t)
        self.t = t

    def fields(self):
        return {"t": self.t}

    def __str__(self):
        return "non-finite state at t={!r} (mean vector too far from 0?)".format(self.t)


class RefinementMismatch(NumericalError):
    """result moved under halved tolerances."""

    def __init__(self, coarse, fine, bound):
        super(RefinementMismatch, self).__init__(coarse, fine, bound)
        self.coarse = coarse
        self.fine = fine
        self.bound = bound

    @property
    def change(self):
        return abs(self.coarse - self.fine) / abs(self.fine)

    def fields(self):
        return {
            "coarse": self.coarse,
            "fine": self.fine,
            "change": self.change,
            "bound": self.bound,
        }

    def __str__(self):
        return "halving tolerances changed g by {:.3e} relative (> {:.3e})".format(
            self.change, self.bound
        )


class ProbabilityOutOfRange(NumericalError):
    """probability exceeds the smallest half-space probability."""

    def __init__(self, probability, bound):
        super(ProbabilityOutOfRange, self).__init__(probability, bound)
        self.probability = probability
        self.bound = bound

    def fields(self):
        return {"probability": self.probability, "bound": self.bound}

    def __str__(self):
        return "probability {!r} exceeds half-space bound {!r}".format(
            self.probability, self.bound
        )


class InvalidRho(OracleError):
    """correlation out of range."""

    def __init__(self, rho):
        super(InvalidRho, self).__init__(rho)
        self.rho = rho

    def fields(self):
        return {"rho": self.rho}

    def __str__(self):
        return "invalid correlation: {!r}".format(self.rho)


class InvalidVariance(OracleError):
    """variance is not positive."""

    def __init__(self, var):
        super(InvalidVariance, self).__init__(var)
        self.var = var

    def fields(self):
        return {"var": self.var}

    def __str__(self):
        return "invalid variance: {!r}".format(self.var)


class TooHighDimension(OracleError):
    """direct quadrature supports at most 3 coordinates."""

    def __init__(self, size):
        super(TooHighDimension, self).__init__(size)
        self.size = size

    def fields(self):
        return {"size": self.size}

    def __str__(self):
        return "direct quadrature needs |J| <= 3, got {}".format(self.size)


class OracleInapplicable(OracleError):
    """oracle does not cover the problem shape."""

    exit_code = 5

    def __init__(self, oracle, reason):
        super(OracleInapplicable, self).__init__(oracle, reason)
        self.oracle = oracle
        self.reason = reason

    def fields(self):
        return {"oracle": self.oracle}

    def __str__(self):
        return "oracle {} is not applicable: {}".format(self.oracle, self.reason)


class OracleMismatch(OracleError):
    """HGM and oracle disagree beyond tolerance."""

    exit_code = 4

    def __init__(self, oracle, difference, tolerance):
        super(OracleMismatch, self).__init__(oracle, difference, tolerance)
        self.oracle = oracle
        self.difference = difference
        self.tolerance = tolerance

    def fields(self):
        return {
            "oracle": self.oracle,
            "difference": self.difference,
            "tolerance": self.tolerance,
        }

    def __str__(self):
        return "{} oracle differs by {:.3e} > {:.3e}".format(
            self.oracle, self.difference, self.tolerance
        )
