"""
Type-directed readback of values into η-long β-normal expressions.
"""

from typing import AbstractSet, Tuple

from syntax.ast import (
    App,
    Cube2_0,
    Cube2_1,
    CubeUnitStar,
    Expr,
    First,
    IdType,
    IndPath,
    Lambda,
    Pair,
    Pattern,
    Pi,
    RecBot,
    RecOr,
    Refl,
    RefinementType,
    Second,
    Shape,
    Sigma,
    TopeAnd,
    TopeBottom,
    TopeEq,
    TopeLeq,
    TopeOr,
    TopeTop,
    Universe,
    UniverseCube,
    UniverseTope,
    Var,
    pattern_names,
)
from syntax.binding import fresh_name

from .errors import InternalError
from .evaluator import Evaluator, fresh_uid, path_family_type
from .topes import cube_expr
from .values import (
    CUBE_VALUES,
    EApp,
    EFirst,
    ESecond,
    HVar,
    Value,
    VCubeProduct,
    VCubeUnit,
    VCubeUniverse,
    VId,
    VNeutral,
    VPair,
    VPi,
    VPoint0,
    VPoint1,
    VPointStar,
    VRefinement,
    VRefl,
    VShape,
    VSigma,
    VStuckRecOr,
    VTopeAnd,
    VTopeBottom,
    VTopeEq,
    VTopeLeq,
    VTopeOr,
    VTopeTop,
    VTopeUniverse,
    VUniverse,
    shape_parts,
)


def _is_family_at(tope: Expr, name: str) -> bool:
    return (isinstance(tope, App) and tope.arg == Var(name)
            and isinstance(tope.fn, Var) and tope.fn.name != name)


def binder_base(binder: Pattern) -> str:
    names = pattern_names(binder)
    if not names:
        return "x"
    return "".join(names) if not isinstance(binder, str) else names[0]


class Readback:
    """Reads values back to syntax, choosing binder names that avoid `avoid`."""

    def __init__(self, ev: Evaluator, avoid: AbstractSet[str]):
        self.ev = ev
        self.avoid = frozenset(avoid)

    def bind(self, binder: Pattern, domain: Value) -> Tuple["Readback", str, Value]:
        """A fresh variable of `domain`; under a shape its tope is assumed."""
        name = fresh_name(binder_base(binder), self.avoid)
        carrier, tope = shape_parts(domain)
        var = VNeutral(HVar(name, fresh_uid(), carrier))
        ev = self.ev
        if tope is not None:
            ev = ev.assuming(ev.instantiate(tope, var))
        return Readback(ev, self.avoid | {name}), name, var

    def assuming(self, tope: Value) -> "Readback":
        return Readback(self.ev.assuming(tope), self.avoid)

    # === Terms ===

    def term(self, value: Value, type_: Value) -> Expr:
        ev = self.ev
        if ev.inconsistent():
            return RecBot()
        type_ = ev.unrefine(type_)
        value = ev.force(value)
        if isinstance(value, VStuckRecOr):
            return self._stuck(value, lambda rb, branch: rb.term(branch, type_))
        if isinstance(type_, VPi):
            inner, name, var = self.bind(type_.binder, type_.domain)
            body = inner.term(inner.ev.apply(value, var), inner.ev.instantiate(type_.body, var))
            return Lambda(name, body)
        if isinstance(type_, VSigma):
            left = ev.first(value)
            return Pair(self.term(left, type_.domain),
                        self.term(ev.second(value), ev.instantiate(type_.body, left)))
        if isinstance(type_, VId) and isinstance(value, VRefl):
            return Refl()
        if isinstance(type_, VUniverse):
            return self.type_(value)
        if isinstance(type_, VCubeUniverse):
            return cube_expr(value)
        if isinstance(type_, VTopeUniverse):
            return self.tope(value)
        if isinstance(type_, CUBE_VALUES):
            return self.point(value, type_)
        if isinstance(value, VNeutral):
            return self.neutral(value)
        raise InternalError(f"cannot read back {type(value).__name__} at {type(type_).__name__}")

    def _stuck(self, value: VStuckRecOr, read) -> Expr:
        if not value.branches:
            return RecBot()
        return RecOr(tuple((self.tope(tope), read(self.assuming(tope), branch))
                           for tope, branch in value.branches))

    def point(self, value: Value, cube: Value) -> Expr:
        if isinstance(cube, VCubeUnit):
            return CubeUnitStar()
        if isinstance(cube, VCubeProduct):
            return Pair(self.point(self.ev.first(value), cube.left),
                        self.point(self.ev.second(value), cube.right))
        value = self.ev.force(value)
        if isinstance(value, VPoint0):
            return Cube2_0()
        if isinstance(value, VPoint1):
            return Cube2_1()
        if isinstance(value, VNeutral):
            return self.neutral(value)
        raise InternalError(f"not a point: {type(value).__name__}")

    def tope(self, value: Value) -> Expr:
        if isinstance(value, VTopeTop):
            return TopeTop()
        if isinstance(value, VTopeBottom):
            return TopeBottom()
        if isinstance(value, (VTopeAnd, VTopeOr)):
            node = TopeAnd if isinstance(value, VTopeAnd) else TopeOr
            return node(self.tope(value.left), self.tope(value.right))
        if isinstance(value, (VTopeEq, VTopeLeq)):
            node = TopeEq if isinstance(value, VTopeEq) else TopeLeq
            return node(self._point_untyped(value.left), self._point_untyped(value.right))
        if isinstance(value, VNeutral):
            return self.neutral(value)
        raise InternalError(f"not a tope: {type(value).__name__}")

    def _point_untyped(self, value: Value) -> Expr:
        value = self.ev.force(value)
        if isinstance(value, VPoint0):
            return Cube2_0()
        if isinstance(value, VPoint1):
            return Cube2_1()
        if isinstance(value, VPointStar):
            return CubeUnitStar()
        if isinstance(value, VPair):
            return Pair(self._point_untyped(value.left), self._point_untyped(value.right))
        if isinstance(value, VNeutral):
            return self.neutral(value)
        raise InternalError(f"not a point: {type(value).__name__}")

    # === Types ===

    def type_(self, value: Value) -> Expr:
        ev = self.ev
        value = ev.force(value)
        if isinstance(value, VUniverse):
            return Universe()
        if isinstance(value, VCubeUniverse):
            return UniverseCube()
        if isinstance(value, VTopeUniverse):
            return UniverseTope()
        if isinstance(value, CUBE_VALUES):
            return cube_expr(value)
        if isinstance(value, VShape):
            inner, name, var = self.bind("t", value.cube)
            return Shape(name, cube_expr(value.cube), inner.tope(ev.instantiate(value.tope, var)))
        if isinstance(value, VPi):
            inner, name, var = self.bind(value.binder, value.domain)
            carrier, tope = shape_parts(value.domain)
            if tope is not None:
                tope_expr = self.tope(ev.instantiate(tope, var))
                if _is_family_at(tope_expr, name):
                    # (t : 2 | S t) prints as (t : S).
                    domain: Expr = tope_expr.fn
                elif isinstance(tope_expr, TopeTop):
                    domain = cube_expr(carrier)
                else:
                    domain = Shape(name, cube_expr(carrier), tope_expr)
            else:
                domain = self.type_(carrier)
            return Pi(name, domain, inner.type_(inner.ev.instantiate(value.body, var)))
        if isinstance(value, VSigma):
            inner, name, var = self.bind(value.binder, value.domain)
            return Sigma(name, self.type_(value.domain), inner.type_(inner.ev.instantiate(value.body, var)))
        if isinstance(value, VId):
            return IdType(self.term(value.left, value.type_), self.term(value.right, value.type_),
                          self.type_(value.type_))
        if isinstance(value, VRefinement):
            carrier = value.carrier
            constraints = tuple((self.tope(tope), self.assuming(tope).term(term, carrier))
                                for tope, term in value.constraints)
            return RefinementType(self.type_(carrier), constraints)
        if isinstance(value, VStuckRecOr):
            return self._stuck(value, lambda rb, branch: rb.type_(branch))
        if isinstance(value, VNeutral):
            return self.neutral(value)
        raise InternalError(f"not a type: {type(value).__name__}")

    # === Neutrals ===

    def neutral(self, value: VNeutral) -> Expr:
        ev = self.ev
        types = ev.spine_types(value)
        result: Expr = Var(value.head.name)
        for elim, type_ in zip(value.spine, types):
            if isinstance(elim, EApp):
                carrier, _ = shape_parts(ev.unrefine(type_).domain)
                result = App(result, self.term(elim.arg, carrier))
            elif isinstance(elim, EFirst):
                result = First(result)
            elif isinstance(elim, ESecond):
                result = Second(result)
            else:
                motive = ev.apply(ev.apply(elim.family, elim.base), VRefl())
                result = IndPath(
                    self.type_(elim.type_),
                    self.term(elim.base, elim.type_),
                    self.term(elim.family, path_family_type(elim.type_, elim.base)),
                    self.term(elim.refl_case, motive),
                    self.term(elim.endpoint, elim.type_),
                    result,
                )
        return result
