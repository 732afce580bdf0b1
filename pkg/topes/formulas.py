"""
Flattened tope formulas over interval variables and the constants 0₂, 1₂.

These are the inputs of the decision procedure and of the model oracle;
pairs and projections have already been eliminated (see `flatten`).
"""

from dataclasses import dataclass
from typing import FrozenSet, Iterable, Mapping, Tuple, Union

CubeContext = Tuple[str, ...]


# === Points ===

@dataclass(frozen=True)
class PointVar:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class PointConst:
    value: int

    def __str__(self) -> str:
        return "0₂" if self.value == 0 else "1₂"


ZERO = PointConst(0)
ONE = PointConst(1)

AtomicPoint = Union[PointVar, PointConst]


# === Formulas ===

@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bottom:
    pass


@dataclass(frozen=True)
class And:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True)
class Or:
    left: "Tope"
    right: "Tope"


@dataclass(frozen=True)
class Eq:
    left: AtomicPoint
    right: AtomicPoint


@dataclass(frozen=True)
class Leq:
    left: AtomicPoint
    right: AtomicPoint


Tope = Union[Top, Bottom, And, Or, Eq, Leq]

TOP = Top()
BOTTOM = Bottom()


def conj(topes: Iterable[Tope]) -> Tope:
    """Right-nested conjunction; ⊤ for no topes, ⊤ units dropped."""
    items = [t for t in topes if not isinstance(t, Top)]
    if any(isinstance(t, Bottom) for t in items):
        return BOTTOM
    if not items:
        return TOP
    result = items[-1]
    for tope in reversed(items[:-1]):
        result = And(tope, result)
    return result


def disj(topes: Iterable[Tope]) -> Tope:
    """Right-nested disjunction; ⊥ for no topes, ⊥ units dropped."""
    items = [t for t in topes if not isinstance(t, Bottom)]
    if any(isinstance(t, Top) for t in items):
        return TOP
    if not items:
        return BOTTOM
    result = items[-1]
    for tope in reversed(items[:-1]):
        result = Or(tope, result)
    return result


def tope_vars(tope: Tope) -> FrozenSet[str]:
    if isinstance(tope, (And, Or)):
        return tope_vars(tope.left) | tope_vars(tope.right)
    if isinstance(tope, (Eq, Leq)):
        return frozenset(p.name for p in (tope.left, tope.right) if isinstance(p, PointVar))
    return frozenset()


def rename_vars(tope: Tope, renaming: Mapping[str, str]) -> Tope:
    def point(p: AtomicPoint) -> AtomicPoint:
        if isinstance(p, PointVar) and p.name in renaming:
            return PointVar(renaming[p.name])
        return p

    if isinstance(tope, (And, Or)):
        return type(tope)(rename_vars(tope.left, renaming), rename_vars(tope.right, renaming))
    if isinstance(tope, (Eq, Leq)):
        return type(tope)(point(tope.left), point(tope.right))
    return tope


def render_tope(tope: Tope) -> str:
    """Unicode rendering with the parser's precedence (∨ below ∧)."""
    if isinstance(tope, Top):
        return "⊤"
    if isinstance(tope, Bottom):
        return "⊥"
    if isinstance(tope, Eq):
        return f"{tope.left} ≡ {tope.right}"
    if isinstance(tope, Leq):
        return f"{tope.left} ≤ {tope.right}"
    if isinstance(tope, And):
        right = render_tope(tope.right)
        if isinstance(tope.right, (And, Or)):
            right = f"({right})"
        left = render_tope(tope.left)
        if isinstance(tope.left, Or):
            left = f"({left})"
        return f"{left} ∧ {right}"
    right = render_tope(tope.right)
    if isinstance(tope.right, Or):
        right = f"({right})"
    return f"{render_tope(tope.left)} ∨ {right}"
