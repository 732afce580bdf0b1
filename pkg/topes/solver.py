"""
Decision procedure for tope entailment over the directed interval.

Topes are coherent formulas, so a goal is entailed exactly when no linear
interval model satisfies the hypotheses together with the goal's negation.
Both sides are brought to disjunctive normal form over order literals
(p ≤ q, p < q); a conjunction of such literals has a model iff its
constraint graph, completed with 0₂ ≤ x ≤ 1₂ and 0₂ < 1₂, has no cycle
through a strict edge.
"""

import itertools
import logging
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from config import settings

from .formulas import (
    BOTTOM,
    ONE,
    ZERO,
    And,
    AtomicPoint,
    Bottom,
    CubeContext,
    Eq,
    Leq,
    Or,
    Top,
    Tope,
    rename_vars,
)

logger = logging.getLogger(__name__)

LE = "≤"
LT = "<"

Literal = Tuple[str, AtomicPoint, AtomicPoint]
Clause = FrozenSet[Literal]


# === Order constraints ===

def consistent(clause: Iterable[Literal]) -> bool:
    """Whether a conjunction of order literals has a model on the interval."""
    literals = list(clause)
    nodes: List[AtomicPoint] = [ZERO, ONE]
    for _, p, q in literals:
        for point in (p, q):
            if point not in nodes:
                nodes.append(point)
    index: Dict[AtomicPoint, int] = {point: i for i, point in enumerate(nodes)}
    size = len(nodes)
    edges = [(LT, ZERO, ONE)] + literals
    edges += [(LE, ZERO, point) for point in nodes[2:]]
    edges += [(LE, point, ONE) for point in nodes[2:]]

    reach = [[i == j for j in range(size)] for i in range(size)]
    for _, p, q in edges:
        reach[index[p]][index[q]] = True
    for k in range(size):
        row_k = reach[k]
        for i in range(size):
            if reach[i][k]:
                row_i = reach[i]
                for j in range(size):
                    if row_k[j]:
                        row_i[j] = True
    return not any(kind == LT and reach[index[q]][index[p]] for kind, p, q in edges)


def _product(left: List[Clause], right: List[Clause]) -> List[Clause]:
    result = []
    for a, b in itertools.product(left, right):
        merged = a | b
        if consistent(merged):
            result.append(merged)
    return result


def dnf(tope: Tope) -> List[Clause]:
    """Satisfiable clauses whose disjunction is equivalent to `tope`."""
    if isinstance(tope, Top):
        return [frozenset()]
    if isinstance(tope, Bottom):
        return []
    if isinstance(tope, Eq):
        clause = frozenset({(LE, tope.left, tope.right), (LE, tope.right, tope.left)})
        return [clause] if consistent(clause) else []
    if isinstance(tope, Leq):
        clause = frozenset({(LE, tope.left, tope.right)})
        return [clause] if consistent(clause) else []
    if isinstance(tope, Or):
        return dnf(tope.left) + dnf(tope.right)
    return _product(dnf(tope.left), dnf(tope.right))


def negated_dnf(tope: Tope) -> List[Clause]:
    """Clauses whose disjunction is equivalent to the negation of `tope` in linear models."""
    if isinstance(tope, Top):
        return []
    if isinstance(tope, Bottom):
        return [frozenset()]
    if isinstance(tope, Eq):
        return [frozenset({(LT, tope.left, tope.right)}), frozenset({(LT, tope.right, tope.left)})]
    if isinstance(tope, Leq):
        return [frozenset({(LT, tope.right, tope.left)})]
    if isinstance(tope, And):
        return negated_dnf(tope.left) + negated_dnf(tope.right)
    return _product(negated_dnf(tope.left), negated_dnf(tope.right))


# === Entailment ===

@lru_cache(maxsize=settings.entailment_cache_size)
def _decide(hyps: Tuple[Tope, ...], goal: Tope) -> bool:
    cases = [frozenset()]
    for hyp in hyps:
        cases = _product(cases, dnf(hyp))
        if not cases:
            return True
    refutations = negated_dnf(goal)
    return not any(consistent(case | refutation) for case in cases for refutation in refutations)


def _canonical(ctx: CubeContext, topes: Sequence[Tope]) -> List[Tope]:
    renaming = {name: f"v{i}" for i, name in enumerate(ctx)}
    return [rename_vars(t, renaming) for t in topes]


def entails(ctx: CubeContext, hyps: Sequence[Tope], goal: Tope) -> bool:
    """Whether `goal` follows from `hyps` in the theory of the directed interval.

    Variables are renamed canonically before the memoized check, so queries
    differing only in variable names share a cache entry.
    """
    *canonical_hyps, canonical_goal = _canonical(ctx, [*hyps, goal])
    return _decide(tuple(canonical_hyps), canonical_goal)


def satisfiable(ctx: CubeContext, hyps: Sequence[Tope]) -> bool:
    return not entails(ctx, hyps, BOTTOM)


def log_cache_statistics() -> None:
    info = _decide.cache_info()
    logger.debug(f"Entailment cache: {info.hits} hits, {info.misses} misses, {info.currsize} entries")
