from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence


class LqmlError(Exception):
    """Base class for every error raised by this package."""


class LexError(LqmlError):
    def __init__(self, line: int, column: int, message: str) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.message = message


class ParseError(LqmlError):
    def __init__(self, line: int, column: int, expected: str, found: str) -> None:
        super().__init__(f"{line}:{column}: expected {expected}, found {found}")
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found


class MixedOperatorError(ParseError):
    """``&`` and ``|`` were combined at one bracket depth without grouping."""


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    line: Optional[int] = None
    column: Optional[int] = None

    def __str__(self) -> str:
        if self.line is None:
            return f"{self.kind}: {self.message}"
        return f"{self.line}:{self.column}: {self.kind}: {self.message}"


class ValidationError(LqmlError):
    def __init__(self, violations: Sequence[Violation], name: str = "") -> None:
        self.violations = tuple(violations)
        self.name = name
        head = f"blueprint {name!r} is invalid" if name else "invalid blueprint"
        super().__init__(head + ": " + "; ".join(str(v) for v in self.violations))

    @property
    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}


class DuplicateFunctionError(LqmlError):
    pass


class NTriplesSyntaxError(LqmlError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class TurtleSyntaxError(LqmlError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class DivisionByZeroError(LqmlError, ZeroDivisionError):
    pass


class LboShapeError(LqmlError):
    def __init__(self, problems: Sequence[str]) -> None:
        self.problems = tuple(problems)
        super().__init__("; ".join(self.problems))


class UntranslatableError(LqmlError):
    pass
