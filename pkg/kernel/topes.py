"""
Bridge from tope values to the tope solver.

Interval variables are the heads of point-valued neutrals; each is given
a unique solver name (`name#uid`) so shadowed binders never collide.
"""

import itertools
from typing import Dict, List, Sequence, Tuple

from syntax.ast import (
    Cube2,
    Cube2_0,
    Cube2_1,
    CubeProduct,
    CubeUnit,
    CubeUnitStar,
    Expr,
    First,
    Pair,
    Second,
    TopeAnd,
    TopeBottom,
    TopeEq,
    TopeLeq,
    TopeOr,
    TopeTop,
    Var,
)
from topes.flatten import flatten_points
from topes.solver import entails

from .errors import IllFormedPoint, InternalError
from .values import (
    EFirst,
    ESecond,
    HVar,
    Value,
    VCube2,
    VCubeProduct,
    VCubeUnit,
    VNeutral,
    VPair,
    VPoint0,
    VPoint1,
    VPointStar,
    VTopeAnd,
    VTopeBottom,
    VTopeEq,
    VTopeLeq,
    VTopeOr,
    VTopeTop,
)


def cube_expr(cube: Value) -> Expr:
    if isinstance(cube, VCube2):
        return Cube2()
    if isinstance(cube, VCubeUnit):
        return CubeUnit()
    if isinstance(cube, VCubeProduct):
        return CubeProduct(cube_expr(cube.left), cube_expr(cube.right))
    raise InternalError(f"not a cube value: {cube!r}")


def _point(v: Value, cubes: Dict[str, Expr]) -> Expr:
    if isinstance(v, VPoint0):
        return Cube2_0()
    if isinstance(v, VPoint1):
        return Cube2_1()
    if isinstance(v, VPointStar):
        return CubeUnitStar()
    if isinstance(v, VPair):
        return Pair(_point(v.left, cubes), _point(v.right, cubes))
    if isinstance(v, VNeutral) and isinstance(v.head, HVar):
        key = f"{v.head.name}#{v.head.uid}"
        cubes[key] = cube_expr(v.head.type_)
        result: Expr = Var(key)
        for elim in v.spine:
            if isinstance(elim, EFirst):
                result = First(result)
            elif isinstance(elim, ESecond):
                result = Second(result)
            else:
                raise IllFormedPoint(f"point {v.head.name} is applied like a function")
        return result
    raise IllFormedPoint("point is not built from interval variables, 0₂, 1₂ and pairs")


def _tope(v: Value, cubes: Dict[str, Expr]) -> Expr:
    if isinstance(v, VTopeTop):
        return TopeTop()
    if isinstance(v, VTopeBottom):
        return TopeBottom()
    if isinstance(v, VTopeAnd):
        return TopeAnd(_tope(v.left, cubes), _tope(v.right, cubes))
    if isinstance(v, VTopeOr):
        return TopeOr(_tope(v.left, cubes), _tope(v.right, cubes))
    if isinstance(v, VTopeEq):
        return TopeEq(_point(v.left, cubes), _point(v.right, cubes))
    if isinstance(v, VTopeLeq):
        return TopeLeq(_point(v.left, cubes), _point(v.right, cubes))
    raise IllFormedPoint("tope does not reduce to a formula (tope variables are not supported)")


def decide(hyps: Sequence[Value], goal: Value) -> bool:
    """Whether the tope values in `hyps` entail `goal`."""
    cubes: Dict[str, Expr] = {}
    exprs = [_tope(h, cubes) for h in hyps] + [_tope(goal, cubes)]
    ctx, flat = flatten_points(list(cubes.items()), exprs)
    return entails(ctx, flat[:-1], flat[-1])


def clauses(hyps: Sequence[Value]) -> List[Tuple[Value, ...]]:
    """Disjunctive normal form of a conjunction of tope values, as atom tuples."""
    result: List[Tuple[Value, ...]] = [()]
    for hyp in hyps:
        result = [a + b for a, b in itertools.product(result, _dnf(hyp))]
    return result


def _dnf(v: Value) -> List[Tuple[Value, ...]]:
    if isinstance(v, VTopeTop):
        return [()]
    if isinstance(v, VTopeBottom):
        return []
    if isinstance(v, VTopeOr):
        return _dnf(v.left) + _dnf(v.right)
    if isinstance(v, VTopeAnd):
        return [a + b for a, b in itertools.product(_dnf(v.left), _dnf(v.right))]
    return [(v,)]


def disjunction(topes: Sequence[Value]) -> Value:
    if not topes:
        return VTopeBottom()
    result = topes[-1]
    for tope in reversed(topes[:-1]):
        result = VTopeOr(tope, result)
    return result


def conjunction(topes: Sequence[Value]) -> Value:
    if not topes:
        return VTopeTop()
    result = topes[-1]
    for tope in reversed(topes[:-1]):
        result = VTopeAnd(tope, result)
    return result
