"""
Abstract syntax: one expression category for cubes, points, topes, shapes,
types and terms, plus declarations and modules.

Binders carry a pattern: a name, or a pair of patterns destructuring a
product cube or a Σ-value. The name "_" binds nothing.
"""

from dataclasses import dataclass, field, fields
from typing import Callable, Iterator, Optional, Tuple, Union

from models.span import NO_SPAN, Span

Pattern = Union[str, Tuple["Pattern", "Pattern"]]

WILDCARD = "_"


def pattern_names(pattern: Pattern) -> Tuple[str, ...]:
    """Names bound by a pattern, left to right, wildcards omitted."""
    if isinstance(pattern, str):
        return () if pattern == WILDCARD else (pattern,)
    return pattern_names(pattern[0]) + pattern_names(pattern[1])


@dataclass(frozen=True)
class Expr:
    span: Span = field(default=NO_SPAN, compare=False, repr=False, kw_only=True)


# === Universes ===

@dataclass(frozen=True)
class Universe(Expr):
    pass


@dataclass(frozen=True)
class UniverseCube(Expr):
    pass


@dataclass(frozen=True)
class UniverseTope(Expr):
    pass


# === Cubes and points ===

@dataclass(frozen=True)
class CubeUnit(Expr):
    pass


@dataclass(frozen=True)
class CubeUnitStar(Expr):
    pass


@dataclass(frozen=True)
class Cube2(Expr):
    pass


@dataclass(frozen=True)
class Cube2_0(Expr):
    pass


@dataclass(frozen=True)
class Cube2_1(Expr):
    pass


@dataclass(frozen=True)
class CubeProduct(Expr):
    left: Expr
    right: Expr


# === Topes ===

@dataclass(frozen=True)
class TopeTop(Expr):
    pass


@dataclass(frozen=True)
class TopeBottom(Expr):
    pass


@dataclass(frozen=True)
class TopeAnd(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class TopeOr(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class TopeEq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class TopeLeq(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Shape(Expr):
    """{t : I | φ}; the binder scopes over the tope only."""
    binder: Pattern
    cube: Expr
    tope: Expr


# === Functions and pairs ===

@dataclass(frozen=True)
class Pi(Expr):
    """(x : A) → B where A is a type, a cube or a shape."""
    binder: Pattern
    domain: Expr
    body: Expr


@dataclass(frozen=True)
class Lambda(Expr):
    binder: Pattern
    body: Expr


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class Sigma(Expr):
    binder: Pattern
    domain: Expr
    body: Expr


@dataclass(frozen=True)
class Pair(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class First(Expr):
    term: Expr


@dataclass(frozen=True)
class Second(Expr):
    term: Expr


# Points of product cubes share the pair and projection nodes with Σ-terms;
# which layer is meant is decided by the checker.
PairPoint = Pair
FirstPoint = First
SecondPoint = Second


# === Identity types ===

@dataclass(frozen=True)
class IdType(Expr):
    left: Expr
    right: Expr
    type_: Optional[Expr] = None


@dataclass(frozen=True)
class Refl(Expr):
    term: Optional[Expr] = None
    type_: Optional[Expr] = None


@dataclass(frozen=True)
class IndPath(Expr):
    """idJ(A, a, C, d, x, p): based path induction."""
    type_: Expr
    base: Expr
    family: Expr
    refl_case: Expr
    endpoint: Expr
    path: Expr


# === Refinements ===

Constraint = Tuple[Expr, Expr]


@dataclass(frozen=True)
class RefinementType(Expr):
    carrier: Expr
    constraints: Tuple[Constraint, ...]


@dataclass(frozen=True)
class RecOr(Expr):
    branches: Tuple[Constraint, ...]


@dataclass(frozen=True)
class RecBot(Expr):
    pass


# === Names and annotations ===

@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class GlobalRef(Expr):
    name: str


@dataclass(frozen=True)
class TypeAscription(Expr):
    term: Expr
    type_: Expr


@dataclass(frozen=True)
class Hole(Expr):
    pass


BINDING_NODES = (Shape, Pi, Lambda, Sigma)


def subexpressions(expr: Expr) -> Iterator[Expr]:
    """Direct children of a non-binding node, in field order."""
    for f in fields(expr):
        if f.name == "span":
            continue
        value = getattr(expr, f.name)
        if isinstance(value, Expr):
            yield value
        elif isinstance(value, tuple):
            for item in value:
                if isinstance(item, tuple):
                    yield from (x for x in item if isinstance(x, Expr))
                elif isinstance(item, Expr):
                    yield item


def map_subexpressions(expr: Expr, fn: Callable[[Expr], Expr]) -> Expr:
    """Rebuild a non-binding node with `fn` applied to each child."""
    changes = {}
    for f in fields(expr):
        if f.name == "span":
            continue
        value = getattr(expr, f.name)
        if isinstance(value, Expr):
            changes[f.name] = fn(value)
        elif isinstance(value, tuple) and value and isinstance(value[0], tuple):
            changes[f.name] = tuple(tuple(fn(x) for x in item) for item in value)
    if not changes:
        return expr
    return type(expr)(**{**{f.name: getattr(expr, f.name) for f in fields(expr)}, **changes})


# === Declarations ===

@dataclass(frozen=True)
class Param:
    binder: Pattern
    type_: Expr
    span: Span = NO_SPAN


@dataclass(frozen=True)
class Declaration:
    span: Span = field(default=NO_SPAN, compare=False, kw_only=True)


def _abstract_type(params: Tuple[Param, ...], result: Expr) -> Expr:
    for param in reversed(params):
        result = Pi(param.binder, param.type_, result, span=param.span)
    return result


def _abstract_term(params: Tuple[Param, ...], body: Expr) -> Expr:
    for param in reversed(params):
        body = Lambda(param.binder, body, span=param.span)
    return body


@dataclass(frozen=True)
class Define(Declaration):
    name: str
    params: Tuple[Param, ...]
    result_type: Expr
    body: Expr
    uses: Optional[Tuple[str, ...]] = None

    @property
    def signature(self) -> Expr:
        """The declared type with parameters turned into Π-binders."""
        return _abstract_type(self.params, self.result_type)

    @property
    def term(self) -> Expr:
        """The body with parameters turned into λ-binders."""
        return _abstract_term(self.params, self.body)


@dataclass(frozen=True)
class Postulate(Declaration):
    name: str
    params: Tuple[Param, ...]
    result_type: Expr
    uses: Optional[Tuple[str, ...]] = None

    @property
    def signature(self) -> Expr:
        return _abstract_type(self.params, self.result_type)


@dataclass(frozen=True)
class SectionBegin(Declaration):
    name: Optional[str] = None


@dataclass(frozen=True)
class SectionEnd(Declaration):
    name: Optional[str] = None


@dataclass(frozen=True)
class VariableDecl(Declaration):
    names: Tuple[str, ...]
    type_: Expr


@dataclass(frozen=True)
class SourceModule:
    """A parsed file: pragma, declarations in source order, and where it came from."""
    lang: Optional[str]
    declarations: Tuple[Declaration, ...]
    path: str = "<input>"
    line_count: int = 0
