"""
Flattening of tope expressions over product cubes into formulas over
interval variables.

A variable `p : 2 × 2` splits into `p.1` and `p.2`; projections of pairs
reduce; equations between points of the unit cube hold trivially and
equations between pairs become conjunctions.
"""

from typing import Dict, List, Sequence, Tuple, Union

from kernel.errors import IllFormedPoint
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
from syntax.printer import pretty_print

from .formulas import (
    BOTTOM,
    ONE,
    TOP,
    ZERO,
    AtomicPoint,
    And,
    CubeContext,
    Eq,
    Leq,
    Or,
    PointVar,
    Tope,
    conj,
)

UNIT = "*₁"

# A point is the unit point, an atomic point of 2, or a pair of points.
PointTree = Union[str, AtomicPoint, tuple]


def _split(name: str, cube: Expr, out: List[str]) -> PointTree:
    if isinstance(cube, Cube2):
        out.append(name)
        return PointVar(name)
    if isinstance(cube, CubeUnit):
        return UNIT
    if isinstance(cube, CubeProduct):
        return (_split(f"{name}.1", cube.left, out), _split(f"{name}.2", cube.right, out))
    raise IllFormedPoint(f"{pretty_print(cube)} is not a cube", cube.span)


def _point(e: Expr, points: Dict[str, PointTree]) -> PointTree:
    if isinstance(e, Var):
        if e.name not in points:
            raise IllFormedPoint(f"{e.name} is not a cube variable", e.span)
        return points[e.name]
    if isinstance(e, Cube2_0):
        return ZERO
    if isinstance(e, Cube2_1):
        return ONE
    if isinstance(e, CubeUnitStar):
        return UNIT
    if isinstance(e, Pair):
        return (_point(e.left, points), _point(e.right, points))
    if isinstance(e, (First, Second)):
        inner = _point(e.term, points)
        if not isinstance(inner, tuple):
            raise IllFormedPoint(f"projection of a non-pair point {pretty_print(e.term)}", e.span)
        return inner[0] if isinstance(e, First) else inner[1]
    raise IllFormedPoint(f"{pretty_print(e)} is not a point", e.span)


def _same_cube(a: PointTree, b: PointTree) -> bool:
    if isinstance(a, tuple) or isinstance(b, tuple):
        return (isinstance(a, tuple) and isinstance(b, tuple)
                and _same_cube(a[0], b[0]) and _same_cube(a[1], b[1]))
    return (a == UNIT) == (b == UNIT)


def _equate(a: PointTree, b: PointTree) -> Tope:
    if isinstance(a, tuple):
        return conj([_equate(a[0], b[0]), _equate(a[1], b[1])])
    if a == UNIT:
        return TOP
    return Eq(a, b)


def _tope(e: Expr, points: Dict[str, PointTree]) -> Tope:
    if isinstance(e, TopeTop):
        return TOP
    if isinstance(e, TopeBottom):
        return BOTTOM
    if isinstance(e, TopeAnd):
        return And(_tope(e.left, points), _tope(e.right, points))
    if isinstance(e, TopeOr):
        return Or(_tope(e.left, points), _tope(e.right, points))
    if isinstance(e, (TopeEq, TopeLeq)):
        left, right = _point(e.left, points), _point(e.right, points)
        if not _same_cube(left, right):
            raise IllFormedPoint(
                f"{pretty_print(e.left)} and {pretty_print(e.right)} live in different cubes", e.span)
        if isinstance(e, TopeEq):
            return _equate(left, right)
        if isinstance(left, tuple) or left == UNIT:
            raise IllFormedPoint("≤ compares points of the interval 2 only", e.span)
        return Leq(left, right)
    raise IllFormedPoint(f"{pretty_print(e)} is not a tope", e.span)


def flatten_points(
    cube_context: Sequence[Tuple[str, Expr]],
    topes: Sequence[Expr],
) -> Tuple[CubeContext, List[Tope]]:
    """Flatten cube-typed variables and tope expressions.

    Args:
        cube_context: `(name, cube)` pairs, cubes built from 1, 2 and ×.
        topes: tope expressions over those names.

    Returns:
        The interval variables in context order and the flattened topes.

    Raises:
        IllFormedPoint: for unknown variables, projections of non-pairs or
            comparisons across different cubes.
    """
    names: List[str] = []
    points: Dict[str, PointTree] = {}
    for name, cube in cube_context:
        points[name] = _split(name, cube, names)
    return tuple(names), [_tope(t, points) for t in topes]


def flatten_tope(cube_context: Sequence[Tuple[str, Expr]], tope: Expr) -> Tuple[CubeContext, Tope]:
    ctx, (flat,) = flatten_points(cube_context, [tope])
    return ctx, flat
