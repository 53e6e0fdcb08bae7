"""Source positions and diagnostics shared by the parser and the validator."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Position:
    """1-based line and column of a token in a source file."""

    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    """One problem found while parsing or validating a policy or domain."""

    severity: Severity
    message: str
    position: Position | None = None
    rule_label: str | None = None

    def __str__(self) -> str:
        parts = [self.severity.value]
        if self.position is not None:
            parts.append(str(self.position))
        if self.rule_label is not None:
            parts.append(f"rule {self.rule_label}")
        parts.append(self.message)
        return ": ".join(parts)


def sort_diagnostics(diagnostics: list[Diagnostic]) -> list[Diagnostic]:
    """Stable report order: by rule label, then message, then position."""
    return sorted(
        diagnostics,
        key=lambda d: (
            d.rule_label or "",
            d.message,
            (d.position.line, d.position.column) if d.position else (0, 0),
        ),
    )


def has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


@dataclass(frozen=True)
class SourceFile:
    """A named input text, kept around so diagnostics can cite their origin."""

    path: str
    text: str

    @classmethod
    def load(cls, path: str) -> "SourceFile":
        with open(path, encoding="utf-8") as handle:
            return cls(path=path, text=handle.read())
