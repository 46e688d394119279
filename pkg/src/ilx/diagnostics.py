"""Diagnostic records shared by the parser, validators and reasoner.

Every finding anywhere in the toolchain is a :class:`Diagnostic` carrying a
code from the closed catalog below.  Errors block export and inference,
warnings never do.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(Enum):
    ERROR = "error"
    WARNING = "warning"


#: Closed catalog of diagnostic codes.  Nothing outside this table is ever
#: emitted; tests assert that.
CATALOG = {
    "E001": "syntax error",
    "E010": "unknown class reference",
    "E011": "unknown relation reference",
    "E020": "subclass cycle",
    "E021": "subrelation or chain cycle",
    "E030": "slot range widened on restatement",
    "E031": "slot cardinality relaxed on restatement",
    "E032": "unreconciled multi-inheritance slot conflict",
    "E033": "conflicting domain/range declaration",
    "E040": "relation chain on right side of '<'",
    "E041": "incomplete relation chain",
    "E050": "duplicate definition",
    "E100": "unknown class in node declaration",
    "E101": "unknown relation in edge",
    "E110": "missing obligatory slot filler",
    "E111": "filler lacks an asserted compatible type",
    "E199": "internal error: duplicate fillers survived saturation",
    "W060": "semantically void class",
    "W061": "relation never used",
    "W062": "redundant slot restatement",
}


@dataclass(frozen=True)
class SourceSpan:
    """1-based location of a construct in an input file."""

    file: str
    line: int
    column: int
    length: int = 1

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str
    span: SourceSpan | None = None
    subject: str = ""

    def __post_init__(self) -> None:
        if self.code not in CATALOG:
            raise ValueError(f"diagnostic code {self.code} is not in the catalog")

    @property
    def severity(self) -> Severity:
        return Severity.WARNING if self.code.startswith("W") else Severity.ERROR

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self) -> str:
        loc = str(self.span) if self.span is not None else "-:0:0"
        subject = self.subject or "-"
        return f"{self.severity.value} {self.code} {loc} {subject} — {self.message}"


def sort_key(diag: Diagnostic) -> tuple:
    span = diag.span or SourceSpan("", 0, 0)
    return (span.file, span.line, span.column, diag.code, diag.subject, diag.message)


def sorted_diagnostics(diags: list[Diagnostic]) -> list[Diagnostic]:
    """Stable order demanded by the rendering contract: file, line, column, code."""
    return sorted(diags, key=sort_key)


def has_errors(diags: list[Diagnostic]) -> bool:
    return any(d.is_error for d in diags)


def render_all(diags: list[Diagnostic]) -> str:
    return "\n".join(d.render() for d in sorted_diagnostics(diags))
