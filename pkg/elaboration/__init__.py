"""Module system: the global environment, sections and the declaration elaborator."""

from .elaborator import Elaborator, elaborate_module, register_postulate
from .environment import EntryKind, GlobalEntry, GlobalEnv
from .sections import SectionFrame, SectionScope, UsesReport, check_uses, compute_used_variables, end_section

__all__ = [
    "Elaborator",
    "EntryKind",
    "GlobalEntry",
    "GlobalEnv",
    "SectionFrame",
    "SectionScope",
    "UsesReport",
    "check_uses",
    "compute_used_variables",
    "elaborate_module",
    "end_section",
    "register_postulate",
]
