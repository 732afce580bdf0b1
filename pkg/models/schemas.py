"""
Pydantic schemas for diagnostics, run reports, the corpus manifest and the
HTTP API.
"""

from datetime import datetime
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from .span import Span


# === Enums ===

class Severity(str, Enum):
    """Diagnostic severity."""
    ERROR = "error"
    WARNING = "warning"


class ErrorCode(str, Enum):
    """Stable diagnostic codes. The set is closed; see README for meanings."""
    LEX = "E-LEX"
    PARSE = "E-PARSE"
    TYPE_MISMATCH = "E-TYPE-MISMATCH"
    BOUNDARY = "E-BOUNDARY"
    TOPE = "E-TOPE"
    CANNOT_INFER = "E-CANNOT-INFER"
    UNBOUND = "E-UNBOUND"
    NOT_FUNCTION = "E-NOT-FUNCTION"
    NOT_PAIR = "E-NOT-PAIR"
    NOT_TYPE = "E-NOT-TYPE"
    HOLE = "E-HOLE"
    DUPLICATE = "E-DUP"
    SECTION = "E-SECTION"
    USES = "E-USES"
    TOPE_BOUND = "E-TOPE-BOUND"
    ILL_FORMED_POINT = "E-ILL-POINT"
    MISSING_EXPORT = "E-MISSING-EXPORT"
    IO = "E-IO"
    USAGE = "E-USAGE"
    UNUSED_USES = "W-UNUSED-USES"


class DeclarationStatus(str, Enum):
    """Outcome of checking one declaration."""
    CHECKED = "checked"
    FAILED = "failed"


class Tier(str, Enum):
    """Corpus tiers."""
    REQUIRED = "REQUIRED"
    STRETCH = "STRETCH"


# === Diagnostics ===

class SourceLocation(BaseModel):
    """Serializable form of a source span."""
    file: str
    line: int = Field(ge=0)
    column: int = Field(ge=0)
    end_line: int = Field(ge=0)
    end_column: int = Field(ge=0)

    @classmethod
    def from_span(cls, span: Span) -> "SourceLocation":
        return cls(
            file=span.file,
            line=span.start_line,
            column=span.start_col,
            end_line=span.end_line,
            end_column=span.end_col,
        )


class Diagnostic(BaseModel):
    """A typed error or warning with a stable code."""
    severity: Severity = Severity.ERROR
    code: ErrorCode
    message: str
    location: Optional[SourceLocation] = None
    expected: Optional[str] = Field(
        default=None,
        description="Pretty-printed expected form (type or value), if any"
    )
    actual: Optional[str] = Field(
        default=None,
        description="Pretty-printed actual form (type or value), if any"
    )

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR


# === Run Reports ===

class DeclarationResult(BaseModel):
    """Status line for one declaration."""
    name: str
    kind: str
    status: DeclarationStatus
    line: int = 0


class FileReport(BaseModel):
    """Per-file declaration results, in source order."""
    path: str
    declarations: List[DeclarationResult] = Field(default_factory=list)


class RunReport(BaseModel):
    """Result of a typecheck run over one or more files."""
    files: List[FileReport] = Field(default_factory=list)
    diagnostics: List[Diagnostic] = Field(default_factory=list)
    checked: int = 0
    failed: int = 0
    wall_time_seconds: Optional[float] = None

    @property
    def errors(self) -> int:
        return sum(1 for d in self.diagnostics if d.is_error)

    @property
    def warnings(self) -> int:
        return sum(1 for d in self.diagnostics if not d.is_error)

    @property
    def ok(self) -> bool:
        return self.errors == 0


# === Corpus ===

class CorpusEntry(BaseModel):
    """One manifest line: a file, its expected outcome and its tier."""
    path: str
    expect_pass: bool = True
    expected_code: Optional[ErrorCode] = None
    tier: Tier = Tier.REQUIRED


class CorpusFileResult(BaseModel):
    """Outcome of running one corpus entry against its expectation."""
    entry: CorpusEntry
    expectation_met: bool
    codes: List[str] = Field(default_factory=list)
    declarations: List[DeclarationResult] = Field(default_factory=list)
    diagnostics: List[Diagnostic] = Field(default_factory=list)


class CorpusReport(BaseModel):
    """Outcome of a corpus run."""
    results: List[CorpusFileResult] = Field(default_factory=list)

    @property
    def all_met(self) -> bool:
        return all(r.expectation_met for r in self.results)


class InventoryItem(BaseModel):
    """A named corpus object with its file and pretty-printed type."""
    name: str
    file: str
    type: str


# === API Request/Response Models ===

class SourceFile(BaseModel):
    """A source text submitted over the API."""
    path: str = Field(
        default="<input>.rzk",
        description="Display path; `.rzk.md` paths are treated as literate Markdown"
    )
    text: str


class TypecheckRequest(BaseModel):
    """Request body for POST /typecheck and POST /sessions."""
    sources: List[SourceFile] = Field(..., min_length=1)


class NormalizeRequest(BaseModel):
    """Request body for POST /normalize."""
    expression: str = Field(..., min_length=1)
    sources: List[SourceFile] = Field(default_factory=list)


class NormalizeResponse(BaseModel):
    """Normal form of an expression and its type."""
    normal_form: str
    type: str


class TopeRequest(BaseModel):
    """Request body for POST /tope."""
    query: str = Field(
        ...,
        min_length=1,
        description="`<cube-vars> | <hyps> |- <goal>`"
    )


class TopeResponse(BaseModel):
    """Answer to a tope entailment query."""
    entailed: bool
    countermodel: Optional[str] = None


class SessionState(BaseModel):
    """Metadata for a stored elaboration session."""
    session_id: str
    created_at: datetime = Field(default_factory=datetime.utcnow)
    declarations: List[str] = Field(default_factory=list)
    errors: int = 0
    warnings: int = 0
