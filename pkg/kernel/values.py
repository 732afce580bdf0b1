"""
Semantic domain for normalization by evaluation.

Closures capture a local environment (name → value) and a syntactic body.
Neutral values are a head (a local variable or a postulated global), a
spine of eliminations and, through the head, enough type information to
recompute the type of any prefix of the spine.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional, Tuple

from syntax.ast import Expr, Pattern


class Value:
    """Base class of semantic values."""

    __slots__ = ()


Env = Mapping[str, "Value"]


@dataclass(frozen=True)
class Closure:
    env: Env = field(compare=False)
    binder: Pattern
    body: Expr


# === Universes and cubes ===

@dataclass(frozen=True)
class VUniverse(Value):
    pass


@dataclass(frozen=True)
class VCubeUniverse(Value):
    pass


@dataclass(frozen=True)
class VTopeUniverse(Value):
    pass


@dataclass(frozen=True)
class VCubeUnit(Value):
    pass


@dataclass(frozen=True)
class VCube2(Value):
    pass


@dataclass(frozen=True)
class VCubeProduct(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VPointStar(Value):
    pass


@dataclass(frozen=True)
class VPoint0(Value):
    pass


@dataclass(frozen=True)
class VPoint1(Value):
    pass


CUBE_VALUES = (VCubeUnit, VCube2, VCubeProduct)


# === Topes ===

@dataclass(frozen=True)
class VTopeTop(Value):
    pass


@dataclass(frozen=True)
class VTopeBottom(Value):
    pass


@dataclass(frozen=True)
class VTopeAnd(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VTopeOr(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VTopeEq(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VTopeLeq(Value):
    left: Value
    right: Value


TOPE_VALUES = (VTopeTop, VTopeBottom, VTopeAnd, VTopeOr, VTopeEq, VTopeLeq)


# === Types ===

@dataclass(frozen=True)
class VShape(Value):
    """A cube restricted by a tope family; only ever a Π-domain."""
    cube: Value
    tope: Closure


@dataclass(frozen=True)
class VPi(Value):
    binder: Pattern
    domain: Value
    body: Closure


@dataclass(frozen=True)
class VSigma(Value):
    binder: Pattern
    domain: Value
    body: Closure


@dataclass(frozen=True)
class VId(Value):
    type_: Value
    left: Value
    right: Value


@dataclass(frozen=True)
class VRefinement(Value):
    carrier: Value
    constraints: Tuple[Tuple[Value, Value], ...]


# === Terms ===

@dataclass(frozen=True)
class VLambda(Value):
    binder: Pattern
    body: Closure


@dataclass(frozen=True)
class VPair(Value):
    left: Value
    right: Value


@dataclass(frozen=True)
class VRefl(Value):
    pass


@dataclass(frozen=True)
class VStuckRecOr(Value):
    """A case split none of whose topes is entailed yet; no branches means recBOT."""
    branches: Tuple[Tuple[Value, Value], ...]


# === Neutrals ===

@dataclass(frozen=True)
class HVar:
    name: str
    uid: int
    type_: Value = field(compare=False)


@dataclass(frozen=True)
class HGlobal:
    name: str
    type_: Value = field(compare=False)


Head = HVar | HGlobal


@dataclass(frozen=True)
class EApp:
    arg: Value


@dataclass(frozen=True)
class EFirst:
    pass


@dataclass(frozen=True)
class ESecond:
    pass


@dataclass(frozen=True)
class EIndPath:
    """Path induction waiting on its path argument."""
    type_: Value
    base: Value
    family: Value
    refl_case: Value
    endpoint: Value


Elim = EApp | EFirst | ESecond | EIndPath


@dataclass(frozen=True)
class VNeutral(Value):
    head: Head
    spine: Tuple[Elim, ...] = ()

    def extend(self, elim: Elim) -> "VNeutral":
        return VNeutral(self.head, self.spine + (elim,))


def shape_parts(domain: Value) -> Tuple[Value, Optional[Closure]]:
    """Split a Π-domain into its carrier and the shape tope, if any."""
    if isinstance(domain, VShape):
        return domain.cube, domain.tope
    return domain, None
