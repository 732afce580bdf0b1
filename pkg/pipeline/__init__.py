"""Pipeline package for the stt-kernel typechecker."""

from .orchestrator import SOURCE_SUFFIXES, ParsedSource, TypecheckOrchestrator, orchestrator

__all__ = [
    "SOURCE_SUFFIXES",
    "ParsedSource",
    "TypecheckOrchestrator",
    "orchestrator",
]
