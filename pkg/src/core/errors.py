"""Exception hierarchy shared by every package."""

from dataclasses import dataclass
from typing import Optional, Sequence


@dataclass(frozen=True)
class Diagnostic:
    """A single problem report, positioned in source text or in a method body."""
    message: str
    line: Optional[int] = None
    column: Optional[int] = None
    location: Optional[object] = None
    expected: tuple = ()

    def __str__(self) -> str:
        where = ""
        if self.location is not None:
            where = f"{self.location}: "
        elif self.line is not None:
            where = f"line {self.line}" + (f":{self.column}" if self.column is not None else "") + ": "
        text = f"{where}{self.message}"
        if self.expected:
            text += f" (expected one of: {', '.join(self.expected)})"
        return text


class MvmError(Exception):
    """Base class for every error raised by the engine."""


class ResolutionError(MvmError):
    """A class, field, method or label name does not resolve."""


class ContractViolation(MvmError):
    """An operation was called with arguments outside its precondition."""


class ConfigurationError(MvmError):
    """Bad run configuration: unknown mask, unresolved test entry, unreadable config."""


class NothingToRepair(MvmError):
    """The subject has no failing test."""


class VerificationError(MvmError):
    def __init__(self, diagnostic: Diagnostic):
        super().__init__(str(diagnostic))
        self.diagnostic = diagnostic


class AsmSyntaxError(MvmError):
    def __init__(self, diagnostics: Sequence[Diagnostic]):
        self.diagnostics = tuple(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics))
