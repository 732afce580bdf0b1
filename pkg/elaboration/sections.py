"""
Sections: assumption variables, the `uses` discipline, and the automatic
parameterization of definitions when a section closes.

Inside a section a variable is a global-like name whose value is a fresh
neutral; it shadows any global of the same name until the section ends.
Definitions made inside record which variables they use, directly, through
the types of the variables they use, or through other definitions of the
section. At `#end` each of them is abstracted over exactly those
variables, in declaration order, and later references inside the section
are rewritten to pass the variables along.
"""

import logging
from dataclasses import dataclass, field, fields, replace
from typing import AbstractSet, Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from kernel.errors import ImplicitAssumption, KernelError, UnusedUses
from kernel.evaluator import Evaluator
from models.span import NO_SPAN, Span
from syntax.ast import BINDING_NODES, App, Expr, GlobalRef, Lambda, Pi, Var, map_subexpressions
from syntax.binding import free_vars, substitute

from .environment import GlobalEntry, GlobalEnv

logger = logging.getLogger(__name__)


@dataclass
class SectionFrame:
    name: Optional[str]
    span: Span = NO_SPAN
    variables: Dict[str, GlobalEntry] = field(default_factory=dict)
    # definition name → every section variable it uses, across all open frames
    definitions: Dict[str, FrozenSet[str]] = field(default_factory=dict)


class SectionScope:
    """The global scope seen from inside open sections."""

    def __init__(self, env: GlobalEnv, frames: Sequence[SectionFrame]):
        self.env = env
        self.frames = frames

    def lookup(self, name: str) -> Optional[GlobalEntry]:
        for frame in reversed(self.frames):
            if name in frame.variables:
                return frame.variables[name]
        return self.env.lookup(name)

    def names(self) -> AbstractSet[str]:
        names = set(self.env.names())
        for frame in self.frames:
            names |= frame.variables.keys()
        return names


# === Uses ===

def compute_used_variables(exprs: Iterable[Expr], frames: Sequence[SectionFrame]) -> Set[str]:
    """Section variables the expressions depend on, transitively."""
    pending: Set[str] = set()
    for expr in exprs:
        pending |= free_vars(expr)
    used: Set[str] = set()
    seen: Set[str] = set()
    while pending:
        name = pending.pop()
        if name in seen:
            continue
        seen.add(name)
        for frame in reversed(frames):
            if name in frame.variables:
                used.add(name)
                pending |= free_vars(frame.variables[name].type_expr)
                break
            if name in frame.definitions:
                pending |= frame.definitions[name]
                break
    return used


@dataclass(frozen=True)
class UsesReport:
    name: str
    declared: FrozenSet[str]
    computed: FrozenSet[str]
    explicit: FrozenSet[str]

    @property
    def missing(self) -> List[str]:
        return sorted(self.computed - self.explicit - self.declared)

    @property
    def unused(self) -> List[str]:
        return sorted(self.declared - self.computed)

    @property
    def ok(self) -> bool:
        return not self.missing


def check_uses(
    name: str,
    declared: Optional[Tuple[str, ...]],
    computed: AbstractSet[str],
    explicit: AbstractSet[str],
    span: Span = NO_SPAN,
) -> Tuple[UsesReport, List[KernelError]]:
    """Compare the `uses` clause of a definition with what it actually uses.

    `explicit` are the variables visible in the statement; the clause must
    list every other variable the definition depends on. Errors come first,
    then warnings for listed names that are never used.
    """
    report = UsesReport(name, frozenset(declared or ()), frozenset(computed), frozenset(explicit))
    problems: List[KernelError] = [
        ImplicitAssumption(
            f"{name} uses section variable {variable} without declaring it; add `uses ({variable})`",
            span,
        )
        for variable in report.missing
    ]
    problems += [UnusedUses(f"{name} declares `uses ({variable})` but never uses it", span)
                 for variable in report.unused]
    return report, problems


# === Generalization ===

def _placeholder(name: str) -> str:
    # Source identifiers never start with `#`, so placeholders cannot clash.
    return f"#{name}"


def _rewrite(expr: Expr, variables: Dict[str, GlobalEntry], applied: Dict[str, List[str]]) -> Expr:
    """Turn references to section variables and section definitions into placeholders."""
    if isinstance(expr, GlobalRef):
        if expr.name in variables:
            return Var(_placeholder(expr.name), span=expr.span)
        if applied.get(expr.name):
            result: Expr = expr
            for variable in applied[expr.name]:
                result = App(result, Var(_placeholder(variable)), span=expr.span)
            return result
        return expr
    if isinstance(expr, BINDING_NODES):
        changes = {f.name: _rewrite(getattr(expr, f.name), variables, applied)
                   for f in fields(expr) if isinstance(getattr(expr, f.name), Expr)}
        return replace(expr, **changes)
    return map_subexpressions(expr, lambda child: _rewrite(child, variables, applied))


def _abstract(expr: Expr, used: Sequence[str], variables: Dict[str, GlobalEntry],
              applied: Dict[str, List[str]], binder_type) -> Expr:
    result = _rewrite(expr, variables, applied)
    for name in reversed(used):
        body = substitute(result, {_placeholder(name): Var(name)})
        if binder_type is Pi:
            result = Pi(name, _rewrite(variables[name].type_expr, variables, applied), body)
        else:
            result = Lambda(name, body)
    return result


def end_section(frame: SectionFrame, env: GlobalEnv, outer: Sequence[SectionFrame]) -> GlobalEnv:
    """Generalize the definitions of a closing section over the variables they use.

    `outer` are the frames still open around `frame`; definitions move to
    the innermost of them, with their uses restricted to its variables.
    """
    order = list(frame.variables)
    applied: Dict[str, List[str]] = {}
    for name, uses in frame.definitions.items():
        entry = env.lookup(name)
        used = [variable for variable in order if variable in uses]
        applied[name] = used
        type_expr = _abstract(entry.type_expr, used, frame.variables, applied, Pi)
        term = None if entry.term is None else _abstract(entry.term, used, frame.variables, applied, Lambda)
        scope = SectionScope(env, outer)
        ev = Evaluator(scope)
        generalized = GlobalEntry(
            name=name,
            kind=entry.kind,
            type_=ev.eval({}, type_expr),
            type_expr=type_expr,
            term=term,
            value=None if term is None else ev.eval({}, term),
            span=entry.span,
        )
        env = env.replace(generalized)
        if outer:
            outer[-1].definitions[name] = frozenset(uses - set(frame.variables))
        logger.debug(f"Generalized {name} over {used or 'nothing'}")
    return env
