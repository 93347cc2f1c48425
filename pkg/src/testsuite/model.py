"""Test cases with declared expectations; the oracle lives outside the mutable code."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple

from core.program import MethodRef
from vm.interpreter import ExecOutcome, Status


class ExpectKind(Enum):
    INT = "int"
    BOOL = "bool"
    FAIL = "fail"


@dataclass(frozen=True)
class Expectation:
    kind: ExpectKind
    value: object = None

    @classmethod
    def int_(cls, n: int) -> "Expectation":
        return cls(ExpectKind.INT, n)

    @classmethod
    def bool_(cls, b: bool) -> "Expectation":
        return cls(ExpectKind.BOOL, b)

    @classmethod
    def fail(cls) -> "Expectation":
        return cls(ExpectKind.FAIL)

    def matches(self, outcome: ExecOutcome) -> bool:
        """Exact match; running out of fuel never matches."""
        if self.kind is ExpectKind.FAIL:
            return outcome.status is Status.FAILED
        if outcome.status is not Status.RETURNED:
            return False
        value = outcome.value
        if self.kind is ExpectKind.BOOL:
            return isinstance(value, bool) and value == self.value
        return isinstance(value, int) and not isinstance(value, bool) and value == self.value

    def __str__(self) -> str:
        if self.kind is ExpectKind.FAIL:
            return "fail"
        if self.kind is ExpectKind.BOOL:
            return f"bool {'true' if self.value else 'false'}"
        return f"int {self.value}"


@dataclass(frozen=True)
class TestCase:
    __test__ = False

    name: str
    entry: MethodRef
    expectation: Expectation
    source_line: Optional[int] = field(default=None, compare=False)

    def passes(self, outcome: ExecOutcome) -> bool:
        return self.expectation.matches(outcome)


@dataclass(frozen=True)
class TestSuite:
    __test__ = False

    tests: Tuple[TestCase, ...] = ()

    def __iter__(self):
        return iter(self.tests)

    def __len__(self) -> int:
        return len(self.tests)

    def named(self, name: str) -> TestCase:
        for t in self.tests:
            if t.name == name:
                return t
        raise KeyError(name)
