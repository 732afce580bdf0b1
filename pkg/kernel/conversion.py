"""
Judgmental equality and subtyping.

Comparison is type-directed with η for Π and Σ. Points of the interval are
equal when the hypotheses entail their equation; topes are equal when they
entail each other. When a direct comparison fails the hypotheses are split
into their disjunctive cases, and a stuck `recOR` is split along its own
branch topes when the hypotheses cover them; equality must then hold in
every case. Under inconsistent hypotheses everything is equal.
"""

import logging
from typing import Callable, List, Tuple

from .evaluator import Evaluator, fresh_uid, path_family_type
from .topes import clauses, conjunction, disjunction
from .values import (
    CUBE_VALUES,
    EApp,
    EIndPath,
    HGlobal,
    HVar,
    Value,
    VCubeProduct,
    VCubeUnit,
    VCubeUniverse,
    VId,
    VNeutral,
    VPi,
    VRefinement,
    VRefl,
    VSigma,
    VStuckRecOr,
    VTopeEq,
    VTopeTop,
    VTopeUniverse,
    VUniverse,
    shape_parts,
)

logger = logging.getLogger(__name__)

MAX_SPLIT_DEPTH = 8


class Conversion:
    """Equality and subtyping under the hypotheses of an evaluator.

    With `erase` set, refinement constraints are ignored and only the
    carriers are compared; the checker uses this to tell a boundary
    failure from a plain type mismatch.
    """

    def __init__(self, ev: Evaluator, depth: int = 0, erase: bool = False):
        self.ev = ev
        self.depth = depth
        self.erase = erase

    def assuming(self, *topes: Value) -> "Conversion":
        return Conversion(self.ev.assuming(*topes), self.depth, self.erase)

    def _with(self, ev: Evaluator) -> "Conversion":
        return Conversion(ev, self.depth + 1, self.erase)

    def fresh(self, binder, domain: Value) -> Tuple["Conversion", Value]:
        """A fresh variable of `domain`, with the shape tope assumed."""
        carrier, tope = shape_parts(domain)
        name = binder if isinstance(binder, str) and binder != "_" else "x"
        var = VNeutral(HVar(name, fresh_uid(), carrier))
        if tope is None:
            return self, var
        return self.assuming(self.ev.instantiate(tope, var)), var

    # === Case splitting ===

    def _split(self, goal: Callable[["Conversion"], bool], *values: Value) -> bool:
        if self.depth >= MAX_SPLIT_DEPTH:
            return False
        for value in values:
            value = self.ev.force(value)
            if isinstance(value, VStuckRecOr) and value.branches:
                topes = [tope for tope, _ in value.branches]
                if self.ev.entails(disjunction(topes)):
                    logger.debug(f"Splitting on {len(topes)} recOR branches")
                    return all(goal(self._with(self.ev.assuming(tope))) for tope in topes)
        cases = clauses(self.ev.hyps)
        if len(cases) > 1:
            logger.debug(f"Splitting hypotheses into {len(cases)} cases")
            return all(
                goal(self._with(Evaluator(self.ev.globals, (conjunction(list(case)),))))
                for case in cases
            )
        return False

    # === Terms ===

    def equal_terms(self, type_: Value, a: Value, b: Value) -> bool:
        if self.ev.inconsistent():
            return True
        if self._equal_terms(type_, a, b):
            return True
        return self._split(lambda conv: conv.equal_terms(type_, a, b), a, b, type_)

    def _equal_terms(self, type_: Value, a: Value, b: Value) -> bool:
        ev = self.ev
        type_ = ev.unrefine(type_)
        a, b = ev.force(a), ev.force(b)
        if isinstance(type_, VPi):
            inner, var = self.fresh(type_.binder, type_.domain)
            body = inner.ev.instantiate(type_.body, var)
            return inner.equal_terms(body, inner.ev.apply(a, var), inner.ev.apply(b, var))
        if isinstance(type_, VSigma):
            left_a, left_b = ev.first(a), ev.first(b)
            if not self.equal_terms(type_.domain, left_a, left_b):
                return False
            return self.equal_terms(ev.instantiate(type_.body, left_a), ev.second(a), ev.second(b))
        if isinstance(type_, VId) and isinstance(a, VRefl) and isinstance(b, VRefl):
            return True
        if isinstance(type_, VUniverse):
            return self.equal_types(a, b)
        if isinstance(type_, VCubeUniverse):
            return self.equal_cubes(a, b)
        if isinstance(type_, VTopeUniverse):
            return self.equal_topes(a, b)
        if isinstance(type_, CUBE_VALUES):
            return self.equal_points(type_, a, b)
        if isinstance(a, VNeutral) and isinstance(b, VNeutral):
            return self.equal_neutrals(a, b)
        return False

    def equal_points(self, cube: Value, a: Value, b: Value) -> bool:
        if isinstance(cube, VCubeUnit):
            return True
        if isinstance(cube, VCubeProduct):
            ev = self.ev
            return (self.equal_points(cube.left, ev.first(a), ev.first(b))
                    and self.equal_points(cube.right, ev.second(a), ev.second(b)))
        return self.ev.entails(VTopeEq(a, b))

    def equal_topes(self, a: Value, b: Value) -> bool:
        return self.ev.assuming(a).entails(b) and self.ev.assuming(b).entails(a)

    def equal_cubes(self, a: Value, b: Value) -> bool:
        if isinstance(a, VCubeProduct) and isinstance(b, VCubeProduct):
            return self.equal_cubes(a.left, b.left) and self.equal_cubes(a.right, b.right)
        return isinstance(a, CUBE_VALUES) and type(a) is type(b)

    def equal_neutrals(self, a: VNeutral, b: VNeutral) -> bool:
        if len(a.spine) != len(b.spine) or not _same_head(a, b):
            return False
        types = self.ev.spine_types(a)
        for elim_a, elim_b, type_ in zip(a.spine, b.spine, types):
            if type(elim_a) is not type(elim_b):
                return False
            if isinstance(elim_a, EApp):
                carrier, _ = shape_parts(self.ev.unrefine(type_).domain)
                if not self.equal_terms(carrier, elim_a.arg, elim_b.arg):
                    return False
            elif isinstance(elim_a, EIndPath) and not self._equal_ind_path(elim_a, elim_b):
                return False
        return True

    def _equal_ind_path(self, a: EIndPath, b: EIndPath) -> bool:
        ev = self.ev
        if not (self.equal_types(a.type_, b.type_) and self.equal_terms(a.type_, a.base, b.base)):
            return False
        if not self.equal_terms(path_family_type(a.type_, a.base), a.family, b.family):
            return False
        motive = ev.apply(ev.apply(a.family, a.base), VRefl())
        return (self.equal_terms(motive, a.refl_case, b.refl_case)
                and self.equal_terms(a.type_, a.endpoint, b.endpoint))

    # === Types ===

    def equal_types(self, a: Value, b: Value) -> bool:
        if self.ev.inconsistent():
            return True
        a, b = self.ev.force(a), self.ev.force(b)
        if isinstance(a, VRefinement) or isinstance(b, VRefinement):
            return self.subtype(a, b) and self.subtype(b, a)
        if self._equal_types(a, b):
            return True
        return self._split(lambda conv: conv.equal_types(a, b), a, b)

    def _equal_domains(self, a: Value, b: Value) -> bool:
        carrier_a, tope_a = shape_parts(a)
        carrier_b, tope_b = shape_parts(b)
        if tope_a is None and tope_b is None:
            return self.equal_types(carrier_a, carrier_b)
        if not self.equal_cubes(carrier_a, carrier_b):
            return False
        var = VNeutral(HVar("t", fresh_uid(), carrier_a))
        return self.equal_topes(self._shape_tope(tope_a, var), self._shape_tope(tope_b, var))

    def _shape_tope(self, tope, var: Value) -> Value:
        return VTopeTop() if tope is None else self.ev.instantiate(tope, var)

    def _equal_types(self, a: Value, b: Value) -> bool:
        if isinstance(a, (VUniverse, VCubeUniverse, VTopeUniverse)):
            return type(a) is type(b)
        if isinstance(a, CUBE_VALUES):
            return self.equal_cubes(a, b)
        if isinstance(a, (VPi, VSigma)) and type(a) is type(b):
            if not self._equal_domains(a.domain, b.domain):
                return False
            inner, var = self.fresh(a.binder, a.domain)
            return inner.equal_types(inner.ev.instantiate(a.body, var), inner.ev.instantiate(b.body, var))
        if isinstance(a, VId) and isinstance(b, VId):
            return (self.equal_types(a.type_, b.type_)
                    and self.equal_terms(a.type_, a.left, b.left)
                    and self.equal_terms(a.type_, a.right, b.right))
        if isinstance(a, VNeutral) and isinstance(b, VNeutral):
            return self.equal_neutrals(a, b)
        return False

    # === Subtyping ===

    def subtype(self, a: Value, b: Value) -> bool:
        """Whether every inhabitant of `a` inhabits `b`."""
        if self.ev.inconsistent():
            return True
        if self._subtype(a, b):
            return True
        return self._split(lambda conv: conv.subtype(a, b), a, b)

    def _subtype(self, a: Value, b: Value) -> bool:
        ev = self.ev
        carrier_a, constraints_a = split_refinement(ev, a)
        carrier_b, constraints_b = split_refinement(ev, b)
        if not self.subtype_carrier(carrier_a, carrier_b):
            return False
        if self.erase:
            return True
        for tope_b, value_b in constraints_b:
            under_b = self.assuming(tope_b)
            if under_b.ev.inconsistent():
                continue
            if not under_b.ev.entails(disjunction([tope for tope, _ in constraints_a])):
                return False
            for tope_a, value_a in constraints_a:
                both = under_b.assuming(tope_a)
                if not both.equal_terms(carrier_b, value_a, value_b):
                    return False
        return True

    def subtype_carrier(self, a: Value, b: Value) -> bool:
        if isinstance(a, VPi) and isinstance(b, VPi):
            if not self._domain_contains(a.domain, b.domain):
                return False
            inner, var = self.fresh(b.binder, b.domain)
            return inner.subtype(inner.ev.instantiate(a.body, var), inner.ev.instantiate(b.body, var))
        if isinstance(a, VSigma) and isinstance(b, VSigma):
            if not self.subtype(a.domain, b.domain):
                return False
            inner, var = self.fresh(a.binder, a.domain)
            return inner.subtype(inner.ev.instantiate(a.body, var), inner.ev.instantiate(b.body, var))
        return self.equal_types(a, b)

    def _domain_contains(self, larger: Value, smaller: Value) -> bool:
        """Whether a function on `larger` can be used on `smaller`."""
        carrier_l, tope_l = shape_parts(larger)
        carrier_s, tope_s = shape_parts(smaller)
        if tope_l is None and tope_s is None:
            return self.subtype(carrier_s, carrier_l)
        if not (isinstance(carrier_l, CUBE_VALUES) and self.equal_cubes(carrier_l, carrier_s)):
            return False
        var = VNeutral(HVar("t", fresh_uid(), carrier_s))
        return self.ev.assuming(self._shape_tope(tope_s, var)).entails(self._shape_tope(tope_l, var))

    # === Value-directed acceptance ===

    def accepts(self, value: Value, actual: Value, expected: Value) -> bool:
        """Whether `value : actual` meets every constraint of `expected`.

        Goes point-wise under Π binders and component-wise through Σ, so a
        function whose boundary values happen to compute correctly is
        accepted even when its declared type says nothing about them.
        """
        if self.ev.inconsistent():
            return True
        ev = self.ev
        carrier_a, _ = split_refinement(ev, actual)
        carrier_e, constraints = split_refinement(ev, expected)
        for tope, boundary in constraints:
            under = self.assuming(tope)
            if not under.ev.inconsistent() and not under.equal_terms(carrier_e, value, boundary):
                return False
        if isinstance(carrier_a, VPi) and isinstance(carrier_e, VPi):
            if not self._domain_contains(carrier_a.domain, carrier_e.domain):
                return False
            inner, var = self.fresh(carrier_e.binder, carrier_e.domain)
            return inner.accepts(inner.ev.apply(value, var),
                                 inner.ev.instantiate(carrier_a.body, var),
                                 inner.ev.instantiate(carrier_e.body, var))
        if isinstance(carrier_a, VSigma) and isinstance(carrier_e, VSigma):
            left = ev.first(value)
            return (self.accepts(left, carrier_a.domain, carrier_e.domain)
                    and self.accepts(ev.second(value),
                                     ev.instantiate(carrier_a.body, left),
                                     ev.instantiate(carrier_e.body, left)))
        return self.subtype(carrier_a, carrier_e)


def split_refinement(ev: Evaluator, type_: Value) -> Tuple[Value, List[Tuple[Value, Value]]]:
    """Strip nested refinements, collecting their constraints outermost first."""
    constraints: List[Tuple[Value, Value]] = []
    type_ = ev.force(type_)
    while isinstance(type_, VRefinement):
        constraints.extend(type_.constraints)
        type_ = ev.force(type_.carrier)
    return type_, constraints


def _same_head(a: VNeutral, b: VNeutral) -> bool:
    if isinstance(a.head, HVar) and isinstance(b.head, HVar):
        return a.head.uid == b.head.uid
    if isinstance(a.head, HGlobal) and isinstance(b.head, HGlobal):
        return a.head.name == b.head.name
    return False
