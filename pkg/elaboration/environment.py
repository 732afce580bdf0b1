"""
The global environment: checked definitions, postulates and (while their
section is open) section variables, in insertion order.
"""

from dataclasses import dataclass
from enum import Enum
from typing import AbstractSet, Dict, Iterator, Mapping, Optional

from kernel.errors import DuplicateName
from kernel.values import Value
from models.span import NO_SPAN, Span
from syntax.ast import Expr


class EntryKind(str, Enum):
    DEFINED = "define"
    POSTULATED = "postulate"
    VARIABLE = "variable"


@dataclass(frozen=True)
class GlobalEntry:
    """A checked global.

    Defined entries carry their elaborated body and its value, which is
    unfolded on every reference. Postulates have no value and evaluate to
    neutral heads. Section variables carry a neutral as their value.
    """
    name: str
    kind: EntryKind
    type_: Value
    type_expr: Expr
    term: Optional[Expr] = None
    value: Optional[Value] = None
    span: Span = NO_SPAN


class GlobalEnv:
    """Name → entry map; every update returns a new environment."""

    def __init__(self, entries: Optional[Mapping[str, GlobalEntry]] = None):
        self._entries: Dict[str, GlobalEntry] = dict(entries or {})

    def lookup(self, name: str) -> Optional[GlobalEntry]:
        return self._entries.get(name)

    def names(self) -> AbstractSet[str]:
        return self._entries.keys()

    def __contains__(self, name: str) -> bool:
        return name in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def __iter__(self) -> Iterator[GlobalEntry]:
        return iter(self._entries.values())

    def extend(self, entry: GlobalEntry) -> "GlobalEnv":
        if entry.name in self._entries:
            previous = self._entries[entry.name].span
            raise DuplicateName(f"{entry.name} is already defined at {previous}", entry.span)
        return GlobalEnv({**self._entries, entry.name: entry})

    def replace(self, entry: GlobalEntry) -> "GlobalEnv":
        """Swap in a new entry for an existing name, keeping its position."""
        return GlobalEnv({**self._entries, entry.name: entry})
