"""
Exceptions raised by the parser, the tope solver, the checker and the
elaborator. Every `KernelError` carries a stable code and converts to a
`Diagnostic`.
"""

from typing import Iterable, Optional

from models.schemas import Diagnostic, ErrorCode, Severity, SourceLocation
from models.span import Span


class InternalError(Exception):
    """An invariant of the kernel was violated. Never expected on any input."""


class KernelError(Exception):
    """Base class for reportable errors."""

    code: ErrorCode = ErrorCode.TYPE_MISMATCH
    severity: Severity = Severity.ERROR

    def __init__(
        self,
        message: str,
        span: Optional[Span] = None,
        expected: Optional[str] = None,
        actual: Optional[str] = None,
    ):
        super().__init__(message)
        self.message = message
        self.span = span
        self.expected = expected
        self.actual = actual

    def with_span(self, span: Optional[Span]) -> "KernelError":
        """Attach a span if none is set yet; returns self."""
        if self.span is None and span is not None:
            self.span = span
        return self

    def to_diagnostic(self) -> Diagnostic:
        return Diagnostic(
            severity=self.severity,
            code=self.code,
            message=self.message,
            location=SourceLocation.from_span(self.span) if self.span else None,
            expected=self.expected,
            actual=self.actual,
        )

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.code.value}: {self.message}"


# === Syntax ===

class LexError(KernelError):
    code = ErrorCode.LEX


class ParseError(KernelError):
    code = ErrorCode.PARSE

    def __init__(self, message: str, span: Optional[Span] = None, expected_tokens: Iterable[str] = ()):
        self.expected_tokens = sorted(set(expected_tokens))
        if self.expected_tokens:
            message = f"{message} (expected one of: {', '.join(self.expected_tokens)})"
        super().__init__(message, span)


# === Tope logic ===

class BoundExceeded(KernelError):
    code = ErrorCode.TOPE_BOUND


class IllFormedPoint(KernelError):
    code = ErrorCode.ILL_FORMED_POINT


# === Checking ===

class TypeMismatch(KernelError):
    code = ErrorCode.TYPE_MISMATCH


class BoundaryMismatch(KernelError):
    code = ErrorCode.BOUNDARY


class TopeNotEntailed(KernelError):
    code = ErrorCode.TOPE


class CannotInfer(KernelError):
    code = ErrorCode.CANNOT_INFER


class UnboundVariable(KernelError):
    code = ErrorCode.UNBOUND


class NotAFunction(KernelError):
    code = ErrorCode.NOT_FUNCTION


class NotAPair(KernelError):
    code = ErrorCode.NOT_PAIR


class NotAType(KernelError):
    code = ErrorCode.NOT_TYPE


class HoleError(KernelError):
    code = ErrorCode.HOLE


# === Modules ===

class DuplicateName(KernelError):
    code = ErrorCode.DUPLICATE


class SectionNameMismatch(KernelError):
    code = ErrorCode.SECTION


class ImplicitAssumption(KernelError):
    code = ErrorCode.USES


class UnusedUses(KernelError):
    code = ErrorCode.UNUSED_USES
    severity = Severity.WARNING


class MissingExport(KernelError):
    code = ErrorCode.MISSING_EXPORT


# === Files and usage ===

class SourceUnavailable(KernelError):
    code = ErrorCode.IO


class UsageError(KernelError):
    code = ErrorCode.USAGE
