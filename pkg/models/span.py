"""
Source spans shared by the syntax, the kernel and the diagnostics layer.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Span:
    """A 1-based region of a source file (line numbers refer to the original file)."""
    file: str = "<input>"
    start_line: int = 1
    start_col: int = 1
    end_line: int = 1
    end_col: int = 1

    def to(self, other: "Span") -> "Span":
        """Span covering from the start of this span to the end of `other`."""
        return Span(self.file, self.start_line, self.start_col, other.end_line, other.end_col)

    def __str__(self) -> str:
        return f"{self.file}:{self.start_line}:{self.start_col}"


NO_SPAN = Span("<generated>", 1, 1, 1, 1)
