"""hgorth base package."""

from ..error import MissingValueBase
from .model import (
    PathSpec,
    SubsetIndex,
    ProblemSpec,
    NaturalParams,
    SubsetLattice,
    build_path,
    natural_params,
    validate_problem,
)
from .config import Method, IntegratorConfig
from .result import OrthantResult
from .parallel import parallel
from .calculator import OrthantCalculator

__all__ = (
    "ProblemSpec",
    "NaturalParams",
    "PathSpec",
    "SubsetIndex",
    "SubsetLattice",
    "validate_problem",
    "natural_params",
    "build_path",
    "Method",
    "IntegratorConfig",
    "OrthantResult",
    "OrthantCalculator",
    "is_missing",
)


def is_missing(v):
    """Check argument is either MissingValue or not.

    Parameters:
        v(any): value

    Returns:
        bool

    """
    return isinstance(v, MissingValueBase)


OrthantCalculator._parallel = parallel
