r"""multivariate normal orthant probabilities by the holonomic gradient method."""

from ._base import (
    Method,
    ProblemSpec,
    OrthantResult,
    IntegratorConfig,
    OrthantCalculator,
    is_missing,
)
from ._version import __version__
from .probability import (
    log_prefactor,
    log_halfspace_bound,
    orthant_sum_check,
    orthant_probability,
    signed_orthant_table,
    orthant_probability_signed,
)

__all__ = (
    "__version__",
    "ProblemSpec",
    "Method",
    "IntegratorConfig",
    "OrthantResult",
    "OrthantCalculator",
    "is_missing",
    "log_prefactor",
    "log_halfspace_bound",
    "orthant_probability",
    "orthant_probability_signed",
    "signed_orthant_table",
    "orthant_sum_check",
)
