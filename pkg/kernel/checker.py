"""
Bidirectional type checking with elaboration.

`infer` and `check` return elaborated expressions: names of globals become
`GlobalRef`s, unannotated identity types gain their type, pattern binders
become a single variable and its projections, and anything checked under
contradictory tope hypotheses becomes `recBOT`.
"""

import functools
import itertools
import logging
from typing import Dict, List, Sequence, Tuple

from models.span import NO_SPAN
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
    Hole,
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
    pattern_names,
)
from syntax.binding import free_vars, fresh_name, substitute
from syntax.printer import pretty_print

from .context import Context
from .conversion import split_refinement
from .errors import (
    BoundaryMismatch,
    CannotInfer,
    HoleError,
    KernelError,
    NotAFunction,
    NotAPair,
    NotAType,
    TopeNotEntailed,
    TypeMismatch,
    UnboundVariable,
)
from .evaluator import path_family_type
from .readback import binder_base
from .topes import cube_expr, disjunction
from .values import (
    CUBE_VALUES,
    Value,
    VCube2,
    VCubeProduct,
    VCubeUnit,
    VCubeUniverse,
    VId,
    VPi,
    VRefinement,
    VRefl,
    VSigma,
    VTopeUniverse,
    VUniverse,
    shape_parts,
)

logger = logging.getLogger(__name__)

_U = VUniverse()
_CUBE = VCubeUniverse()
_TOPE = VTopeUniverse()

DESCRIPTIONS = {
    Lambda: "a λ-abstraction",
    Pair: "a pair",
    Refl: "refl",
    RecOr: "recOR",
    RecBot: "recBOT",
}


def _located(fn):
    """Attach the span of the innermost real node to errors passing through."""
    @functools.wraps(fn)
    def wrapper(ctx: Context, e: Expr, *args):
        try:
            return fn(ctx, e, *args)
        except KernelError as err:
            raise err.with_span(e.span if e.span != NO_SPAN else None)
    return wrapper


# === Binders ===

def _project(pattern: Pattern, expr: Expr, mapping: Dict[str, Expr]) -> None:
    if isinstance(pattern, str):
        if pattern != "_":
            mapping[pattern] = expr
        return
    _project(pattern[0], First(expr), mapping)
    _project(pattern[1], Second(expr), mapping)


def destructure(binder: Pattern, bodies: Sequence[Expr]) -> Tuple[str, Tuple[Expr, ...]]:
    """Replace a pattern binder by one fresh variable and its projections."""
    if isinstance(binder, str):
        return binder, tuple(bodies)
    avoid = set(pattern_names(binder))
    for body in bodies:
        avoid |= free_vars(body)
    name = fresh_name(binder_base(binder), avoid)
    mapping: Dict[str, Expr] = {}
    _project(binder, Var(name), mapping)
    return name, tuple(substitute(body, mapping) for body in bodies)


# === Inference ===

@_located
def infer(ctx: Context, e: Expr) -> Tuple[Expr, Value]:
    """Synthesize the type of `e`, returning the elaborated term and its type."""
    if isinstance(e, Var):
        local = ctx.lookup(e.name)
        if local is not None:
            return e, local
        return _infer_global(ctx, e.name, e)
    if isinstance(e, GlobalRef):
        return _infer_global(ctx, e.name, e)
    if isinstance(e, (Universe, UniverseCube, UniverseTope)):
        return e, _U
    if isinstance(e, (CubeUnit, Cube2)):
        return e, _CUBE
    if isinstance(e, CubeProduct):
        left = check(ctx, e.left, _CUBE)
        right = check(ctx, e.right, _CUBE)
        return CubeProduct(left, right, span=e.span), _CUBE
    if isinstance(e, CubeUnitStar):
        return e, VCubeUnit()
    if isinstance(e, (Cube2_0, Cube2_1)):
        return e, VCube2()
    if isinstance(e, (TopeTop, TopeBottom)):
        return e, _TOPE
    if isinstance(e, (TopeAnd, TopeOr)):
        return type(e)(check(ctx, e.left, _TOPE), check(ctx, e.right, _TOPE), span=e.span), _TOPE
    if isinstance(e, (TopeEq, TopeLeq)):
        return _infer_relation(ctx, e), _TOPE
    if isinstance(e, (Pi, Sigma, RefinementType)):
        elab, _ = check_type(ctx, e)
        return elab, _U
    if isinstance(e, IdType):
        return _infer_id_type(ctx, e), _U
    if isinstance(e, Refl):
        return _infer_refl(ctx, e)
    if isinstance(e, IndPath):
        return _infer_ind_path(ctx, e)
    if isinstance(e, App):
        return _infer_app(ctx, e)
    if isinstance(e, (First, Second)):
        return _infer_projection(ctx, e)
    if isinstance(e, Pair):
        return _infer_point_pair(ctx, e)
    if isinstance(e, TypeAscription):
        _, type_ = check_type(ctx, e.type_)
        return check(ctx, e.term, type_), type_
    if isinstance(e, Hole):
        raise HoleError(f"hole with no expected type under tope context {ctx.show_hyps()}")
    if isinstance(e, Shape):
        raise NotAType("a shape can only be used as the domain of a function type")
    what = DESCRIPTIONS.get(type(e), type(e).__name__)
    raise CannotInfer(f"cannot infer the type of {what}; add an ascription `(e as T)`")


def _infer_global(ctx: Context, name: str, e: Expr) -> Tuple[Expr, Value]:
    entry = ctx.globals.lookup(name)
    if entry is None:
        raise UnboundVariable(f"unbound name {name}")
    return GlobalRef(name, span=e.span), entry.type_


def _infer_relation(ctx: Context, e: Expr) -> Expr:
    left, cube = infer(ctx, e.left)
    cube = ctx.evaluator.force(cube)
    if not isinstance(cube, CUBE_VALUES):
        raise TypeMismatch(f"{pretty_print(e.left)} is not a point of a cube",
                           expected="a point of a cube", actual=ctx.show_type(cube))
    if isinstance(e, TopeLeq) and not isinstance(cube, VCube2):
        raise TypeMismatch("≤ compares points of the interval", expected="2", actual=ctx.show_type(cube))
    right = check(ctx, e.right, cube)
    return type(e)(left, right, span=e.span)


def _infer_id_type(ctx: Context, e: IdType) -> Expr:
    if e.type_ is not None:
        type_elab, type_ = check_type(ctx, e.type_)
        left = check(ctx, e.left, type_)
    else:
        left, type_ = infer(ctx, e.left)
        type_elab = ctx.readback().type_(type_)
    right = check(ctx, e.right, type_)
    return IdType(left, right, type_elab, span=e.span)


def _infer_refl(ctx: Context, e: Refl) -> Tuple[Expr, Value]:
    if e.term is None:
        raise CannotInfer("cannot infer the type of refl; write refl_{x : A} or give an expected type")
    type_elab = None
    if e.type_ is not None:
        type_elab, type_ = check_type(ctx, e.type_)
        term = check(ctx, e.term, type_)
    else:
        term, type_ = infer(ctx, e.term)
    value = ctx.eval(term)
    return Refl(term, type_elab, span=e.span), VId(type_, value, value)


def _infer_ind_path(ctx: Context, e: IndPath) -> Tuple[Expr, Value]:
    ev = ctx.evaluator
    type_elab, type_ = check_type(ctx, e.type_)
    base = check(ctx, e.base, type_)
    base_value = ctx.eval(base)
    family = check(ctx, e.family, path_family_type(type_, base_value))
    family_value = ctx.eval(family)
    refl_case = check(ctx, e.refl_case, ev.apply(ev.apply(family_value, base_value), VRefl()))
    endpoint = check(ctx, e.endpoint, type_)
    endpoint_value = ctx.eval(endpoint)
    path = check(ctx, e.path, VId(type_, base_value, endpoint_value))
    elab = IndPath(type_elab, base, family, refl_case, endpoint, path, span=e.span)
    return elab, ev.apply(ev.apply(family_value, endpoint_value), ctx.eval(path))


def _infer_app(ctx: Context, e: App) -> Tuple[Expr, Value]:
    fn, fn_type = infer(ctx, e.fn)
    pi = ctx.evaluator.unrefine(fn_type)
    if not isinstance(pi, VPi):
        raise NotAFunction(f"{pretty_print(e.fn)} is applied to an argument but is not a function",
                           actual=ctx.show_type(fn_type))
    carrier, tope = shape_parts(pi.domain)
    arg = check(ctx, e.arg, carrier)
    arg_value = ctx.eval(arg)
    if tope is not None:
        required = ctx.evaluator.instantiate(tope, arg_value)
        if not ctx.entails(required):
            raise TopeNotEntailed(f"{pretty_print(e.arg)} is not known to lie in the shape of the domain",
                                  expected=ctx.show_tope(required), actual=ctx.show_hyps())
    return App(fn, arg, span=e.span), ctx.evaluator.instantiate(pi.body, arg_value)


def _infer_projection(ctx: Context, e: Expr) -> Tuple[Expr, Value]:
    term, type_ = infer(ctx, e.term)
    carrier = ctx.evaluator.unrefine(type_)
    elab = type(e)(term, span=e.span)
    if isinstance(carrier, VSigma):
        if isinstance(e, First):
            return elab, carrier.domain
        return elab, ctx.evaluator.instantiate(carrier.body, ctx.evaluator.first(ctx.eval(term)))
    if isinstance(carrier, VCubeProduct):
        return elab, carrier.left if isinstance(e, First) else carrier.right
    raise NotAPair(f"{pretty_print(e.term)} is projected but is not a pair", actual=ctx.show_type(type_))


def _infer_point_pair(ctx: Context, e: Pair) -> Tuple[Expr, Value]:
    left, left_type = infer(ctx, e.left)
    right, right_type = infer(ctx, e.right)
    left_type, right_type = ctx.evaluator.force(left_type), ctx.evaluator.force(right_type)
    if isinstance(left_type, CUBE_VALUES) and isinstance(right_type, CUBE_VALUES):
        return Pair(left, right, span=e.span), VCubeProduct(left_type, right_type)
    raise CannotInfer("cannot infer the type of a pair of terms; add an ascription `(e as T)`")


# === Checking ===

@_located
def check(ctx: Context, e: Expr, type_: Value) -> Expr:
    """Check `e` against `type_`, returning the elaborated term."""
    if ctx.inconsistent():
        return RecBot(span=e.span)
    type_ = ctx.evaluator.force(type_)
    if isinstance(e, RecOr):
        return _check_rec_or(ctx, e, type_)
    if isinstance(e, RecBot):
        raise TopeNotEntailed("recBOT needs contradictory tope hypotheses",
                              expected="⊥", actual=ctx.show_hyps())
    if isinstance(e, Hole):
        expected = ctx.show_type(type_)
        raise HoleError(f"unfilled hole of type {expected} under tope context {ctx.show_hyps()}",
                        expected=expected)
    if isinstance(type_, VRefinement):
        return _check_refinement(ctx, e, type_)
    if isinstance(e, Lambda):
        if not isinstance(type_, VPi):
            raise TypeMismatch("a λ-abstraction needs a function type", expected=ctx.show_type(type_),
                               actual="a function type")
        return _check_lambda(ctx, e, type_)
    if isinstance(e, Pair) and isinstance(type_, VSigma):
        left = check(ctx, e.left, type_.domain)
        right = check(ctx, e.right, ctx.evaluator.instantiate(type_.body, ctx.eval(left)))
        return Pair(left, right, span=e.span)
    if isinstance(e, Pair) and isinstance(type_, VCubeProduct):
        return Pair(check(ctx, e.left, type_.left), check(ctx, e.right, type_.right), span=e.span)
    if isinstance(e, Refl) and isinstance(type_, VId):
        return _check_refl(ctx, e, type_)
    return _check_by_inference(ctx, e, type_)


def _check_lambda(ctx: Context, e: Lambda, type_: VPi) -> Expr:
    name, (body,) = destructure(e.binder, (e.body,))
    inner, var = ctx.bind(name, type_.domain)
    body_type = inner.evaluator.instantiate(type_.body, var)
    return Lambda(name, check(inner, body, body_type), span=e.span)


def _check_refl(ctx: Context, e: Refl, type_: VId) -> Expr:
    conv = ctx.conversion()
    term = annotation = None
    if e.type_ is not None:
        annotation, annotated = check_type(ctx, e.type_)
        if not conv.equal_types(annotated, type_.type_):
            raise TypeMismatch("the annotation of refl does not match the identity type",
                               expected=ctx.show_type(type_.type_), actual=ctx.show_type(annotated))
    if e.term is not None:
        term = check(ctx, e.term, type_.type_)
        if not conv.equal_terms(type_.type_, ctx.eval(term), type_.left):
            raise TypeMismatch("the annotation of refl does not match the identity type",
                               expected=ctx.show(type_.left, type_.type_),
                               actual=ctx.show(ctx.eval(term), type_.type_))
    if not conv.equal_terms(type_.type_, type_.left, type_.right):
        raise TypeMismatch("refl needs the two sides of the identity type to be judgmentally equal",
                           expected=ctx.show(type_.left, type_.type_),
                           actual=ctx.show(type_.right, type_.type_))
    return Refl(term, annotation, span=e.span)


def _check_agreement(ctx: Context, type_: Value, cases: List[Tuple[Value, Value]], what: str) -> None:
    """Values of overlapping cases must be equal where both topes hold."""
    for (i, (tope_i, value_i)), (j, (tope_j, value_j)) in itertools.combinations(enumerate(cases, 1), 2):
        both = ctx.assume(tope_i, tope_j)
        if not both.conversion().equal_terms(type_, value_i, value_j):
            raise BoundaryMismatch(
                f"{what} {i} and {j} disagree where {both.show_tope(tope_i)} and {both.show_tope(tope_j)} hold",
                expected=both.show(value_i, type_),
                actual=both.show(value_j, type_),
            )


def _check_rec_or(ctx: Context, e: RecOr, type_: Value) -> Expr:
    topes = [check(ctx, tope, _TOPE) for tope, _ in e.branches]
    tope_values = [ctx.eval(tope) for tope in topes]
    if not ctx.entails(disjunction(tope_values)):
        raise TopeNotEntailed(
            "the branches of recOR do not cover the tope context",
            expected=" ∨ ".join(pretty_print(tope) for tope in topes),
            actual=ctx.show_hyps(),
        )
    terms = []
    cases = []
    for tope_value, (_, term) in zip(tope_values, e.branches):
        inner = ctx.assume(tope_value)
        elab = check(inner, term, type_)
        terms.append(elab)
        cases.append((tope_value, inner.eval(elab)))
    _check_agreement(ctx, type_, cases, "recOR branches")
    return RecOr(tuple(zip(topes, terms)), span=e.span)


def _check_refinement(ctx: Context, e: Expr, type_: VRefinement) -> Expr:
    carrier, constraints = split_refinement(ctx.evaluator, type_)
    elab = check(ctx, e, carrier)
    value = ctx.eval(elab)
    for tope, boundary in constraints:
        under = ctx.assume(tope)
        if under.inconsistent():
            continue
        if not under.conversion().equal_terms(carrier, value, boundary):
            raise BoundaryMismatch(
                f"boundary condition fails where {under.show_tope(tope)} holds",
                expected=under.show(boundary, carrier),
                actual=under.show(value, carrier),
            )
    return elab


def _check_by_inference(ctx: Context, e: Expr, type_: Value) -> Expr:
    elab, actual = infer(ctx, e)
    conv = ctx.conversion()
    if conv.subtype(actual, type_) or conv.accepts(ctx.eval(elab), actual, type_):
        return elab
    if ctx.conversion(erase=True).subtype(actual, type_):
        raise BoundaryMismatch("the boundary of this term does not match the expected type",
                               expected=ctx.show_type(type_), actual=ctx.show_type(actual))
    raise TypeMismatch(f"{pretty_print(e)} does not have the expected type",
                       expected=ctx.show_type(type_), actual=ctx.show_type(actual))


# === Types ===

TYPE_FORMERS = (Pi, Sigma, RefinementType, RecOr, RecBot, Hole)


@_located
def check_type(ctx: Context, e: Expr) -> Tuple[Expr, Value]:
    """Check that `e` is a type (or a cube), returning it elaborated and evaluated."""
    if isinstance(e, Pi):
        domain, domain_value, name, body = _check_domain(ctx, e.binder, e.domain, e.body)
        inner, _ = ctx.bind(name, domain_value)
        body_elab, _ = check_type(inner, body)
        elab = Pi(name, domain, body_elab, span=e.span)
        return elab, ctx.eval(elab)
    if isinstance(e, Sigma):
        name, (body,) = destructure(e.binder, (e.body,))
        domain, domain_value = check_type(ctx, e.domain)
        inner, _ = ctx.bind(name, domain_value)
        body_elab, _ = check_type(inner, body)
        elab = Sigma(name, domain, body_elab, span=e.span)
        return elab, ctx.eval(elab)
    if isinstance(e, RefinementType):
        return _check_refinement_type(ctx, e)
    if isinstance(e, Shape):
        raise NotAType("a shape can only be used as the domain of a function type")
    if isinstance(e, (RecOr, RecBot, Hole)):
        elab = check(ctx, e, _U)
        return elab, ctx.eval(elab)
    elab, kind = infer(ctx, e)
    return _as_type(ctx, e, elab, kind), ctx.eval(elab)


def _as_type(ctx: Context, e: Expr, elab: Expr, kind: Value) -> Expr:
    if not isinstance(ctx.evaluator.force(kind), (VUniverse, VCubeUniverse)):
        raise NotAType(f"{pretty_print(e)} is not a type", expected="U", actual=ctx.show_type(kind))
    return elab


def _check_domain(ctx: Context, binder: Pattern, domain: Expr, body: Expr):
    """Elaborate a Π-domain: a type, a cube, a shape or a tope family."""
    if isinstance(domain, Shape):
        cube = check(ctx, domain.cube, _CUBE)
        shape_name, (tope,) = destructure(domain.binder, (domain.tope,))
        inner, _ = ctx.bind(shape_name, ctx.eval(cube))
        shape = Shape(shape_name, cube, check(inner, tope, _TOPE), span=domain.span)
        name, (body,) = destructure(binder, (body,))
        return shape, ctx.eval(shape), name, body
    if isinstance(domain, TYPE_FORMERS):
        elab, value = check_type(ctx, domain)
        name, (body,) = destructure(binder, (body,))
        return elab, value, name, body
    elab, kind = infer(ctx, domain)
    family = ctx.evaluator.unrefine(kind)
    if isinstance(family, VPi) and isinstance(family.domain, CUBE_VALUES):
        extended, var = ctx.bind("_", family.domain)
        if isinstance(extended.evaluator.instantiate(family.body, var), VTopeUniverse):
            # (t : S) with S : I → TOPE reads as (t : I | S t).
            name, (body,) = destructure(binder, (body,))
            if name == "_":
                name = fresh_name("t", free_vars(body))
            shape = Shape(name, cube_expr(family.domain), App(elab, Var(name)), span=domain.span)
            return shape, ctx.eval(shape), name, body
    elab = _as_type(ctx, domain, elab, kind)
    name, (body,) = destructure(binder, (body,))
    return elab, ctx.eval(elab), name, body


def _check_refinement_type(ctx: Context, e: RefinementType) -> Tuple[Expr, Value]:
    carrier_elab, carrier = check_type(ctx, e.carrier)
    constraints = []
    cases = []
    for tope, term in e.constraints:
        tope_elab = check(ctx, tope, _TOPE)
        tope_value = ctx.eval(tope_elab)
        inner = ctx.assume(tope_value)
        term_elab = check(inner, term, carrier)
        constraints.append((tope_elab, term_elab))
        cases.append((tope_value, inner.eval(term_elab)))
    _check_agreement(ctx, carrier, cases, "constraints")
    elab = RefinementType(carrier_elab, tuple(constraints), span=e.span)
    return elab, ctx.eval(elab)


# === Normalization ===

def normalize_typed(ctx: Context, e: Expr) -> Tuple[Expr, Expr]:
    """Normal form of `e` together with the normal form of its type."""
    elab, type_ = infer(ctx, e)
    readback = ctx.readback()
    return readback.term(ctx.eval(elab), type_), readback.type_(type_)


def normalize(ctx: Context, e: Expr) -> Expr:
    return normalize_typed(ctx, e)[0]
