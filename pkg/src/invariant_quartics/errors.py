"""Exception hierarchy shared by every module of the toolkit."""

from __future__ import annotations

__all__ = [
    "ToolkitError",
    "ConductorMismatch",
    "DivisionByZero",
    "NotInField",
    "BadPrime",
    "NotSquare",
    "ShapeMismatch",
    "OrderCapExceeded",
    "NotFiniteOrder",
    "ClosureCapExceeded",
    "ParseError",
    "NonInvertibleGenerator",
    "InfiniteOrderGenerator",
    "ConductorExtensionFailed",
    "ZeroForm",
    "ZeroPoint",
    "NotAPencil",
    "NonInvertible",
    "InterpolationDegenerate",
]


class ToolkitError(Exception):
    """Base class for all errors raised by this package."""


class ConductorMismatch(ToolkitError):
    """Two scalars (or matrices, forms) from different cyclotomic fields were mixed."""


class DivisionByZero(ToolkitError, ZeroDivisionError):
    pass


class NotInField(ToolkitError):
    """A requested constant (e.g. sqrt(m)) does not lie in the working field."""


class BadPrime(ToolkitError):
    """A prime embedding cannot reduce this scalar (denominator divisible by p)."""


class NotSquare(ToolkitError):
    pass


class ShapeMismatch(ToolkitError):
    pass


class OrderCapExceeded(ToolkitError):
    """Projective order search exceeded the configured cap."""


class NotFiniteOrder(ToolkitError):
    """The scalar obtained from a power of a matrix is not a root of unity."""


class ClosureCapExceeded(ToolkitError):
    """Group closure grew beyond the configured element cap."""

    def __init__(self, cap: int) -> None:
        super().__init__(f"closure exceeded cap of {cap} elements")
        self.cap = cap


class ParseError(ToolkitError):
    """Syntax or elaboration error in group files / expression text.

    Carries 1-based line and column of the offending token.
    """

    def __init__(self, message: str, line: int, col: int) -> None:
        super().__init__(f"line {line}, col {col}: {message}")
        self.line = line
        self.col = col


class NonInvertibleGenerator(ToolkitError):
    pass


class InfiniteOrderGenerator(ToolkitError):
    pass


class ConductorExtensionFailed(ToolkitError):
    """The working conductor cannot be extended to hold required roots of unity."""


class ZeroForm(ToolkitError):
    pass


class ZeroPoint(ToolkitError):
    pass


class NotAPencil(ToolkitError):
    """A pencil operation was requested on a subspace that is not 2-dimensional."""


class NonInvertible(ToolkitError):
    pass


class InterpolationDegenerate(ToolkitError):
    """Too few usable sample points for interpolation; choose a larger prime."""
