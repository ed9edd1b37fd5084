"""
Exception hierarchy of the package.

Input problems derive from :class:`InvalidInputError` (and therefore from ``ValueError``),
numerical failures from the plain :class:`FoelError` branches. The CLI maps the families to
exit codes.
"""

from typing import Any


class FoelError(Exception):
    """Base class. Carries a ``context`` mapping such as ``{"L": 6, "n": 2}``."""

    def __init__(self, message: str = "", **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context: dict[str, Any] = dict(context)

    def with_context(self, **context: Any) -> "FoelError":
        """Annotate an error in flight; existing keys win."""
        for key, value in context.items():
            self.context.setdefault(key, value)
        return self

    def __str__(self) -> str:
        if not self.context:
            return self.message
        ctx = ", ".join(f"{k}={v}" for k, v in self.context.items())
        return f"{self.message} [{ctx}]"


# ─────────────────────────── input ───────────────────────────
class InvalidInputError(FoelError, ValueError):
    pass


class InvalidSizeError(InvalidInputError):
    pass


class SizeLimitError(InvalidInputError):
    pass


class ParameterError(InvalidInputError):
    pass


class SectorError(InvalidInputError):
    pass


class BondIndexError(InvalidInputError):
    pass


class PreconditionError(InvalidInputError):
    pass


class ModelError(InvalidInputError):
    pass


class TreeError(InvalidInputError):
    pass


class CycleError(TreeError):
    pass


class DisconnectedError(TreeError):
    pass


class DuplicateEdgeError(TreeError):
    pass


class RootOutOfRangeError(TreeError):
    pass


class VertexOutOfRangeError(TreeError):
    pass


class NotNestedError(TreeError):
    pass


# ─────────────────────────── numerics ───────────────────────────
class SymmetryViolationError(FoelError):
    pass


class ComplexSpectrumError(FoelError, ArithmeticError):
    pass


class ConvergenceError(FoelError):
    def __init__(
        self,
        message: str = "",
        residual: float = float("nan"),
        iterations: int = 0,
        **context: Any,
    ) -> None:
        super().__init__(message, **context)
        self.residual = residual
        self.iterations = iterations


class InternalConsistencyError(FoelError):
    pass


class IndependenceViolationError(InternalConsistencyError):
    pass


class PipelineMismatchError(InternalConsistencyError):
    pass
