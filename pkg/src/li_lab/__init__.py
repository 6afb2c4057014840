"""Li coefficients, the secondary zeta function over Riemann zeros, and related asymptotics."""

from .errors import (ConvergenceError, DomainError, LiLabError, NearZeroError, PoleError,
                     PrecisionError, ZeroTableError)
from .numerics import ErrorKind, PrecisionContext, ReductionOrder, ValueWithError
from .zeros import ZeroPair, ZeroTable, bundled_zeros, inject_off_axis, load_zeros

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError", "DomainError", "LiLabError", "NearZeroError", "PoleError",
    "PrecisionError", "ZeroTableError", "ErrorKind", "PrecisionContext", "ReductionOrder",
    "ValueWithError", "ZeroPair", "ZeroTable", "bundled_zeros", "inject_off_axis", "load_zeros",
]
