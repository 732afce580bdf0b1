"""
Name handling on expressions: free variables, α-equivalence and
capture-avoiding substitution.
"""

from dataclasses import fields
from typing import AbstractSet, Dict, FrozenSet, Mapping, Optional

from .ast import (
    BINDING_NODES,
    WILDCARD,
    Expr,
    GlobalRef,
    Lambda,
    Pattern,
    Pi,
    Shape,
    Sigma,
    Var,
    map_subexpressions,
    pattern_names,
    subexpressions,
)


def fresh_name(base: str, avoid: AbstractSet[str]) -> str:
    """`base` itself if unused, otherwise `base` followed by primes."""
    if base == WILDCARD:
        base = "x"
    name = base
    while name in avoid:
        name += "′"
    return name


def free_vars(expr: Expr) -> FrozenSet[str]:
    """Names occurring free in `expr` (locals and globals alike)."""
    if isinstance(expr, (Var, GlobalRef)):
        return frozenset((expr.name,))
    if isinstance(expr, Shape):
        return free_vars(expr.cube) | (free_vars(expr.tope) - set(pattern_names(expr.binder)))
    if isinstance(expr, (Pi, Sigma)):
        return free_vars(expr.domain) | (free_vars(expr.body) - set(pattern_names(expr.binder)))
    if isinstance(expr, Lambda):
        return free_vars(expr.body) - set(pattern_names(expr.binder))
    result: FrozenSet[str] = frozenset()
    for child in subexpressions(expr):
        result |= free_vars(child)
    return result


# === α-equivalence ===

def _bind(pattern: Pattern, scope: Dict[str, int], depth: int) -> Optional[Dict[str, int]]:
    scope = dict(scope)
    counter = depth

    def go(p: Pattern) -> None:
        nonlocal counter
        if isinstance(p, str):
            if p != WILDCARD:
                scope[p] = counter
            counter += 1
        else:
            go(p[0])
            go(p[1])

    go(pattern)
    return scope


def _same_shape(p: Pattern, q: Pattern) -> bool:
    if isinstance(p, str) or isinstance(q, str):
        return isinstance(p, str) and isinstance(q, str)
    return _same_shape(p[0], q[0]) and _same_shape(p[1], q[1])


def _pattern_width(p: Pattern) -> int:
    return 1 if isinstance(p, str) else _pattern_width(p[0]) + _pattern_width(p[1])


def _alpha(a: Expr, b: Expr, left: Dict[str, int], right: Dict[str, int], depth: int) -> bool:
    if isinstance(a, (Var, GlobalRef)) and isinstance(b, (Var, GlobalRef)):
        la = left.get(a.name) if isinstance(a, Var) else None
        lb = right.get(b.name) if isinstance(b, Var) else None
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if type(a) is not type(b):
        return False
    if isinstance(a, BINDING_NODES):
        if not _same_shape(a.binder, b.binder):
            return False
        inner_left = _bind(a.binder, left, depth)
        inner_right = _bind(b.binder, right, depth)
        inner_depth = depth + _pattern_width(a.binder)
        if isinstance(a, Shape):
            return (_alpha(a.cube, b.cube, left, right, depth)
                    and _alpha(a.tope, b.tope, inner_left, inner_right, inner_depth))
        if isinstance(a, Lambda):
            return _alpha(a.body, b.body, inner_left, inner_right, inner_depth)
        return (_alpha(a.domain, b.domain, left, right, depth)
                and _alpha(a.body, b.body, inner_left, inner_right, inner_depth))
    for f in fields(a):
        if f.name == "span":
            continue
        x, y = getattr(a, f.name), getattr(b, f.name)
        if isinstance(x, Expr) or isinstance(y, Expr):
            if not (isinstance(x, Expr) and isinstance(y, Expr)):
                return False
            if not _alpha(x, y, left, right, depth):
                return False
        elif isinstance(x, tuple) and x and isinstance(x[0], tuple):
            if len(x) != len(y):
                return False
            for item_x, item_y in zip(x, y):
                if not all(_alpha(p, q, left, right, depth) for p, q in zip(item_x, item_y)):
                    return False
        elif x != y:
            return False
    return True


def alpha_equal(a: Expr, b: Expr) -> bool:
    """Structural equality up to the choice of bound names (spans ignored)."""
    return _alpha(a, b, {}, {}, 0)


# === Substitution ===

def rename_pattern(pattern: Pattern, renaming: Mapping[str, str]) -> Pattern:
    if isinstance(pattern, str):
        return renaming.get(pattern, pattern)
    return (rename_pattern(pattern[0], renaming), rename_pattern(pattern[1], renaming))


def _enter_binder(
    binder: Pattern,
    bodies: tuple,
    mapping: Mapping[str, Expr],
):
    """Drop shadowed entries and rename binder names that would capture."""
    bound = set(pattern_names(binder))
    inner = {k: v for k, v in mapping.items() if k not in bound}
    if not inner:
        return binder, bodies, inner
    incoming = set()
    for value in inner.values():
        incoming |= free_vars(value)
    clashes = bound & incoming
    if not clashes:
        return binder, bodies, inner
    avoid = set(incoming) | bound | set(inner)
    for body in bodies:
        avoid |= free_vars(body)
    renaming = {}
    for name in sorted(clashes):
        new = fresh_name(name, avoid)
        avoid.add(new)
        renaming[name] = new
    binder = rename_pattern(binder, renaming)
    bodies = tuple(substitute(body, {old: Var(new) for old, new in renaming.items()}) for body in bodies)
    return binder, bodies, inner


def substitute(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Replace free `Var`s by expressions, renaming binders to avoid capture."""
    if not mapping:
        return expr
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, Shape):
        binder, (tope,), inner = _enter_binder(expr.binder, (expr.tope,), mapping)
        return Shape(binder, substitute(expr.cube, mapping), substitute(tope, inner), span=expr.span)
    if isinstance(expr, (Pi, Sigma)):
        binder, (body,), inner = _enter_binder(expr.binder, (expr.body,), mapping)
        return type(expr)(binder, substitute(expr.domain, mapping), substitute(body, inner), span=expr.span)
    if isinstance(expr, Lambda):
        binder, (body,), inner = _enter_binder(expr.binder, (expr.body,), mapping)
        return Lambda(binder, substitute(body, inner), span=expr.span)
    return map_subexpressions(expr, lambda child: substitute(child, mapping))
