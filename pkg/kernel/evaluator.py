"""
Evaluation of elaborated expressions into values.

Evaluation depends on the tope hypotheses in force: a neutral whose type
is a refinement `A [φ ↦ a]` computes to `a` as soon as φ is entailed, and
a `recOR` computes to the first branch whose tope is entailed. Values
built under weaker hypotheses are brought up to date with `force`.
"""

import itertools
import logging
from typing import AbstractSet, Dict, Optional, Protocol, Sequence, Tuple

from syntax.ast import (
    App,
    Cube2,
    Cube2_0,
    Cube2_1,
    CubeProduct,
    CubeUnit,
    CubeUnitStar,
    Expr,
    First,
    GlobalRef,
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
    TypeAscription,
    Universe,
    UniverseCube,
    UniverseTope,
    Var,
)

from .errors import InternalError
from .topes import decide
from .values import (
    Closure,
    EApp,
    EFirst,
    EIndPath,
    Elim,
    Env,
    ESecond,
    HGlobal,
    Value,
    VCube2,
    VCubeProduct,
    VCubeUnit,
    VCubeUniverse,
    VId,
    VLambda,
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
)

logger = logging.getLogger(__name__)

_uids = itertools.count(1)


def fresh_uid() -> int:
    return next(_uids)


class GlobalEntryLike(Protocol):
    type_: Value
    value: Optional[Value]


class GlobalScope(Protocol):
    def lookup(self, name: str) -> Optional[GlobalEntryLike]: ...

    def names(self) -> AbstractSet[str]: ...


def path_family_type(type_: Value, base: Value) -> Value:
    """`(z : A) → (a =_{A} z) → U`, the type of the motive of based path induction."""
    body = Pi("_", IdType(Var("#base"), Var("z"), Var("#type")), Universe())
    return VPi("z", type_, Closure({"#type": type_, "#base": base}, "z", body))


CONSTANTS = {
    Universe: VUniverse,
    UniverseCube: VCubeUniverse,
    UniverseTope: VTopeUniverse,
    CubeUnit: VCubeUnit,
    Cube2: VCube2,
    CubeUnitStar: VPointStar,
    Cube2_0: VPoint0,
    Cube2_1: VPoint1,
    TopeTop: VTopeTop,
    TopeBottom: VTopeBottom,
}

BINARY = {
    CubeProduct: VCubeProduct,
    TopeAnd: VTopeAnd,
    TopeOr: VTopeOr,
    TopeEq: VTopeEq,
    TopeLeq: VTopeLeq,
}


class Evaluator:
    """Evaluates under fixed tope hypotheses against a global scope."""

    def __init__(self, globals_: GlobalScope, hyps: Tuple[Value, ...] = ()):
        self.globals = globals_
        self.hyps = hyps
        self._inconsistent: Optional[bool] = None
        self._entailed: Dict[Value, bool] = {}

    def assuming(self, *topes: Value) -> "Evaluator":
        return Evaluator(self.globals, self.hyps + topes)

    # === Topes ===

    def entails(self, tope: Value) -> bool:
        if isinstance(tope, VTopeTop):
            return True
        known = self._entailed.get(tope)
        if known is None:
            known = self._entailed[tope] = decide(self.hyps, tope)
        return known

    def inconsistent(self) -> bool:
        if self._inconsistent is None:
            self._inconsistent = bool(self.hyps) and decide(self.hyps, VTopeBottom())
        return self._inconsistent

    # === Evaluation ===

    def eval(self, env: Env, e: Expr) -> Value:
        kind = type(e)
        if kind in CONSTANTS:
            return CONSTANTS[kind]()
        if kind in BINARY:
            return BINARY[kind](self.eval(env, e.left), self.eval(env, e.right))
        if isinstance(e, Var):
            if e.name in env:
                return self.force(env[e.name])
            return self.global_value(e.name)
        if isinstance(e, GlobalRef):
            return self.global_value(e.name)
        if isinstance(e, App):
            return self.apply(self.eval(env, e.fn), self.eval(env, e.arg))
        if isinstance(e, Lambda):
            return VLambda(e.binder, Closure(env, e.binder, e.body))
        if isinstance(e, Pi):
            return VPi(e.binder, self.eval_domain(env, e.domain), Closure(env, e.binder, e.body))
        if isinstance(e, Sigma):
            return VSigma(e.binder, self.eval(env, e.domain), Closure(env, e.binder, e.body))
        if isinstance(e, Shape):
            return self.eval_domain(env, e)
        if isinstance(e, Pair):
            return VPair(self.eval(env, e.left), self.eval(env, e.right))
        if isinstance(e, First):
            return self.first(self.eval(env, e.term))
        if isinstance(e, Second):
            return self.second(self.eval(env, e.term))
        if isinstance(e, IdType):
            # Unannotated identity types only survive inside vacuous branches.
            type_ = VUniverse() if e.type_ is None else self.eval(env, e.type_)
            return VId(type_, self.eval(env, e.left), self.eval(env, e.right))
        if isinstance(e, Refl):
            return VRefl()
        if isinstance(e, IndPath):
            return self.ind_path(*(self.eval(env, part) for part in (
                e.type_, e.base, e.family, e.refl_case, e.endpoint, e.path)))
        if isinstance(e, RefinementType):
            constraints = []
            for tope, term in e.constraints:
                tope_value = self.eval(env, tope)
                constraints.append((tope_value, self.assuming(tope_value).eval(env, term)))
            return VRefinement(self.eval(env, e.carrier), tuple(constraints))
        if isinstance(e, RecOr):
            return self.eval_rec_or(env, e)
        if isinstance(e, RecBot):
            return VStuckRecOr(())
        if isinstance(e, TypeAscription):
            return self.eval(env, e.term)
        raise InternalError(f"cannot evaluate {type(e).__name__}")

    def eval_domain(self, env: Env, e: Expr) -> Value:
        if isinstance(e, Shape):
            return VShape(self.eval(env, e.cube), Closure(env, e.binder, e.tope))
        return self.eval(env, e)

    def eval_rec_or(self, env: Env, e: RecOr) -> Value:
        branches = []
        for tope, term in e.branches:
            tope_value = self.eval(env, tope)
            if self.entails(tope_value):
                return self.eval(env, term)
            branches.append((tope_value, self.assuming(tope_value).eval(env, term)))
        return VStuckRecOr(tuple(branches))

    def global_value(self, name: str) -> Value:
        entry = self.globals.lookup(name)
        if entry is None:
            raise InternalError(f"unknown global {name}")
        if entry.value is not None:
            return self.force(entry.value)
        return self.reflect(VNeutral(HGlobal(name, entry.type_)))

    # === Closures ===

    def bind_pattern(self, env: Env, pattern: Pattern, value: Value) -> Dict[str, Value]:
        env = dict(env)
        self._bind_into(env, pattern, value)
        return env

    def _bind_into(self, env: Dict[str, Value], pattern: Pattern, value: Value) -> None:
        if isinstance(pattern, str):
            if pattern != "_":
                env[pattern] = value
            return
        self._bind_into(env, pattern[0], self.first(value))
        self._bind_into(env, pattern[1], self.second(value))

    def instantiate(self, closure: Closure, arg: Value) -> Value:
        return self.eval(self.bind_pattern(closure.env, closure.binder, arg), closure.body)

    # === Eliminations ===

    def _map_stuck(self, stuck: VStuckRecOr, elim: Elim) -> Value:
        return VStuckRecOr(tuple(
            (tope, self.assuming(tope).eliminate(value, elim)) for tope, value in stuck.branches))

    def apply(self, fn: Value, arg: Value) -> Value:
        return self._eliminate_forced(self.force(fn), EApp(arg))

    def first(self, pair: Value) -> Value:
        return self._eliminate_forced(self.force(pair), EFirst())

    def second(self, pair: Value) -> Value:
        return self._eliminate_forced(self.force(pair), ESecond())

    def ind_path(self, type_: Value, base: Value, family: Value, refl_case: Value,
                 endpoint: Value, path: Value) -> Value:
        elim = EIndPath(type_, base, family, refl_case, endpoint)
        return self._eliminate_forced(self.force(path), elim)

    def eliminate(self, value: Value, elim: Elim) -> Value:
        return self._eliminate_forced(self.force(value), elim)

    def _eliminate_forced(self, value: Value, elim: Elim) -> Value:
        if isinstance(value, VNeutral):
            return self.reflect(value.extend(elim))
        if isinstance(value, VStuckRecOr):
            return self._map_stuck(value, elim)
        if isinstance(elim, EApp) and isinstance(value, VLambda):
            return self.instantiate(value.body, elim.arg)
        if isinstance(elim, EFirst) and isinstance(value, VPair):
            return value.left
        if isinstance(elim, ESecond) and isinstance(value, VPair):
            return value.right
        if isinstance(elim, EIndPath) and isinstance(value, VRefl):
            return elim.refl_case
        raise InternalError(f"cannot eliminate {type(value).__name__} with {type(elim).__name__}")

    # === Types of neutrals ===

    def unrefine(self, type_: Value) -> Value:
        type_ = self.force(type_)
        while isinstance(type_, VRefinement):
            type_ = self.force(type_.carrier)
        return type_

    def spine_types(self, neutral: VNeutral) -> Sequence[Value]:
        """The type of the head and of every prefix of the spine, in order."""
        type_ = neutral.head.type_
        prefix = VNeutral(neutral.head)
        types = [type_]
        for elim in neutral.spine:
            carrier = self.unrefine(type_)
            if isinstance(elim, EApp):
                if not isinstance(carrier, VPi):
                    raise InternalError("application of a neutral of non-function type")
                type_ = self.instantiate(carrier.body, elim.arg)
            elif isinstance(elim, EFirst):
                if isinstance(carrier, VSigma):
                    type_ = carrier.domain
                elif isinstance(carrier, VCubeProduct):
                    type_ = carrier.left
                else:
                    raise InternalError("projection of a neutral of non-pair type")
            elif isinstance(elim, ESecond):
                if isinstance(carrier, VSigma):
                    type_ = self.instantiate(carrier.body, self.first(prefix))
                elif isinstance(carrier, VCubeProduct):
                    type_ = carrier.right
                else:
                    raise InternalError("projection of a neutral of non-pair type")
            else:
                type_ = self.apply(self.apply(elim.family, elim.endpoint), prefix)
            prefix = prefix.extend(elim)
            types.append(type_)
        return types

    def neutral_type(self, neutral: VNeutral) -> Value:
        return self.spine_types(neutral)[-1]

    def reflect(self, neutral: VNeutral) -> Value:
        """Apply the refinement computation rule to a neutral, if a constraint holds."""
        type_ = self.force(self.neutral_type(neutral))
        while isinstance(type_, VRefinement):
            for tope, value in type_.constraints:
                if self.entails(tope):
                    return self.force(value)
            type_ = self.force(type_.carrier)
        return neutral

    def force(self, value: Value) -> Value:
        """Bring a value up to date with the current hypotheses."""
        if isinstance(value, VNeutral):
            current = self.reflect(VNeutral(value.head))
            for elim in value.spine:
                if isinstance(current, VNeutral):
                    current = self._eliminate_forced(current, elim)
                else:
                    current = self.eliminate(current, elim)
            return current
        if isinstance(value, VStuckRecOr):
            for tope, branch in value.branches:
                if self.entails(tope):
                    return self.force(branch)
        return value
