"""
Finite interval models and the brute-force entailment oracle.

A model is a weak ordering of the interval variables: an ordered partition
into blocks, each flagged as sitting at 0₂, at 1₂ or strictly inside. Only
the first block may sit at 0₂ and only the last at 1₂.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from config import settings
from kernel.errors import BoundExceeded

from .formulas import (
    And,
    AtomicPoint,
    Bottom,
    CubeContext,
    Eq,
    Leq,
    Or,
    PointConst,
    Top,
    Tope,
)


class Flag(str, Enum):
    AT_ZERO = "at-zero"
    INTERIOR = "interior"
    AT_ONE = "at-one"


@dataclass(frozen=True)
class IntervalModel:
    blocks: Tuple[Tuple[str, ...], ...]
    flags: Tuple[Flag, ...]

    def positions(self) -> Dict[str, int]:
        """Rank of every variable: 0 at 0₂, 1..k for interior blocks, k+1 at 1₂."""
        top = sum(1 for f in self.flags if f == Flag.INTERIOR) + 1
        ranks: Dict[str, int] = {}
        interior = 0
        for block, flag in zip(self.blocks, self.flags):
            if flag == Flag.AT_ZERO:
                rank = 0
            elif flag == Flag.AT_ONE:
                rank = top
            else:
                interior += 1
                rank = interior
            for name in block:
                ranks[name] = rank
        return ranks

    def render(self) -> str:
        """Render as e.g. `0 = ∅ < {s} < {t} < 1` or `0 = {s} < 1 = {t}`."""
        def show(block: Tuple[str, ...]) -> str:
            return "{" + ", ".join(block) + "}"

        zero = "∅"
        one = None
        inner: List[str] = []
        for block, flag in zip(self.blocks, self.flags):
            if flag == Flag.AT_ZERO:
                zero = show(block)
            elif flag == Flag.AT_ONE:
                one = show(block)
            else:
                inner.append(show(block))
        parts = [f"0 = {zero}", *inner, "1" if one is None else f"1 = {one}"]
        return " < ".join(parts)


def check_bound(ctx: CubeContext, bound: Optional[int] = None) -> None:
    limit = settings.max_cube_vars if bound is None else bound
    if len(ctx) > limit:
        raise BoundExceeded(
            f"{len(ctx)} interval variables exceed the model bound {limit} (see --max-cube-vars)")


def _ordered_partitions(names: Tuple[str, ...]) -> Iterator[Tuple[Tuple[str, ...], ...]]:
    if not names:
        yield ()
        return
    for size in range(1, len(names) + 1):
        for first in itertools.combinations(names, size):
            rest = tuple(n for n in names if n not in first)
            for tail in _ordered_partitions(rest):
                yield (first,) + tail


def _flaggings(count: int) -> Iterator[Tuple[Flag, ...]]:
    if count == 0:
        yield ()
        return
    if count == 1:
        yield from ((Flag.AT_ZERO,), (Flag.AT_ONE,), (Flag.INTERIOR,))
        return
    middle = (Flag.INTERIOR,) * (count - 2)
    for first in (Flag.AT_ZERO, Flag.INTERIOR):
        for last in (Flag.AT_ONE, Flag.INTERIOR):
            yield (first,) + middle + (last,)


def enumerate_models(ctx: CubeContext, bound: Optional[int] = None) -> Iterator[IntervalModel]:
    """Every model over `ctx` exactly once, in a fixed order.

    Raises:
        BoundExceeded: if `ctx` has more variables than the bound.
    """
    check_bound(ctx, bound)
    for blocks in _ordered_partitions(tuple(ctx)):
        for flags in _flaggings(len(blocks)):
            yield IntervalModel(blocks, flags)


def _value(point: AtomicPoint, ranks: Dict[str, int], top: int) -> int:
    if isinstance(point, PointConst):
        return 0 if point.value == 0 else top
    return ranks[point.name]


def eval_tope(model: IntervalModel, tope: Tope) -> bool:
    ranks = model.positions()
    top = sum(1 for f in model.flags if f == Flag.INTERIOR) + 1
    return _eval(tope, ranks, top)


def _eval(tope: Tope, ranks: Dict[str, int], top: int) -> bool:
    if isinstance(tope, Top):
        return True
    if isinstance(tope, Bottom):
        return False
    if isinstance(tope, And):
        return _eval(tope.left, ranks, top) and _eval(tope.right, ranks, top)
    if isinstance(tope, Or):
        return _eval(tope.left, ranks, top) or _eval(tope.right, ranks, top)
    left, right = _value(tope.left, ranks, top), _value(tope.right, ranks, top)
    if isinstance(tope, Eq):
        return left == right
    if isinstance(tope, Leq):
        return left <= right
    raise TypeError(f"not a tope: {tope!r}")


def find_countermodel(
    ctx: CubeContext,
    hyps: Sequence[Tope],
    goal: Tope,
    bound: Optional[int] = None,
) -> Optional[IntervalModel]:
    """First model (in enumeration order) satisfying `hyps` but not `goal`."""
    for model in enumerate_models(ctx, bound):
        ranks = model.positions()
        top = sum(1 for f in model.flags if f == Flag.INTERIOR) + 1
        if all(_eval(h, ranks, top) for h in hyps) and not _eval(goal, ranks, top):
            return model
    return None


def oracle_entails(
    ctx: CubeContext,
    hyps: Sequence[Tope],
    goal: Tope,
    bound: Optional[int] = None,
) -> bool:
    return find_countermodel(ctx, hyps, goal, bound) is None


def model_count_table(max_vars: int) -> List[int]:
    """Number of models for 0..max_vars variables."""
    return [sum(1 for _ in enumerate_models(tuple(f"x{i}" for i in range(n)), max_vars))
            for n in range(max_vars + 1)]
