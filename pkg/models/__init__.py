"""Models package for stt-kernel."""

from .span import NO_SPAN, Span
from .schemas import (
    CorpusEntry,
    CorpusFileResult,
    CorpusReport,
    DeclarationResult,
    DeclarationStatus,
    Diagnostic,
    ErrorCode,
    FileReport,
    InventoryItem,
    NormalizeRequest,
    NormalizeResponse,
    RunReport,
    SessionState,
    Severity,
    SourceFile,
    SourceLocation,
    Tier,
    TopeRequest,
    TopeResponse,
    TypecheckRequest,
)

__all__ = [
    "NO_SPAN",
    "Span",
    "CorpusEntry",
    "CorpusFileResult",
    "CorpusReport",
    "DeclarationResult",
    "DeclarationStatus",
    "Diagnostic",
    "ErrorCode",
    "FileReport",
    "InventoryItem",
    "NormalizeRequest",
    "NormalizeResponse",
    "RunReport",
    "SessionState",
    "Severity",
    "SourceFile",
    "SourceLocation",
    "Tier",
    "TopeRequest",
    "TopeResponse",
    "TypecheckRequest",
]
