"""Factor colorings of infinite words and monochromatic factorization search."""

from factorcolor.errors import (
    DesubstitutionError,
    FactorColorError,
    InvalidArgument,
    InvalidRule,
    NotAFactor,
    NotApplicable,
    NotSturmianWindow,
    PrecisionError,
    ProbeError,
    SpecParseError,
    WindowTooSmall,
)

__version__ = "0.1.0"

__all__ = [
    "DesubstitutionError",
    "FactorColorError",
    "InvalidArgument",
    "InvalidRule",
    "NotAFactor",
    "NotApplicable",
    "NotSturmianWindow",
    "PrecisionError",
    "ProbeError",
    "SpecParseError",
    "WindowTooSmall",
    "__version__",
]
