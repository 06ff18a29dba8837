"""Exception hierarchy shared by every module of the engine."""

from __future__ import annotations


class ChowError(Exception):
    """Base class for all errors raised by the engine."""


class StructuralError(ChowError):
    """Operands live over incompatible variable tables or have the wrong shape."""


class GradingError(ChowError):
    """A homogeneity requirement of the weighted grading is violated."""


class ContextError(ChowError):
    """A symmetric expression could not be reduced in a root-system context."""


class ComputationError(ChowError):
    """A computation failed (singular system, inconsistent residue, budget hit)."""

    def __init__(self, message: str, *, step: object = None, residue: object = None) -> None:
        super().__init__(message)
        self.step = step
        self.residue = residue


class UnsupportedCase(ChowError, NotImplementedError):
    """An input falls outside the cases the algorithm implements."""


class SceneError(ChowError):
    """A scene file is malformed; carries the file name and line number."""

    def __init__(self, message: str, *, source: str = "<scene>", line: int = 0) -> None:
        super().__init__(f"{source}:{line}: {message}")
        self.message = message
        self.source = source
        self.line = line


class ConfigurationError(ChowError):
    """The set of scenes is inconsistent (unknown target, missing or cyclic dependency)."""
