"""
Elaborator - Processes declaration streams into a global environment.

Declarations are handled strictly in source order. A hard error aborts the
declaration it occurs in: the entry is omitted and processing continues with
the next declaration. Diagnostics and status lines come out in source order.
"""

import logging
from typing import List, Optional, Tuple

from kernel.checker import check, check_type
from kernel.context import Context
from kernel.errors import DuplicateName, KernelError, SectionNameMismatch, UnusedUses
from kernel.evaluator import Evaluator, fresh_uid
from kernel.values import HVar, VNeutral
from models.schemas import DeclarationResult, DeclarationStatus, Diagnostic, FileReport
from models.span import NO_SPAN, Span
from syntax.ast import Declaration, Define, Expr, Postulate, SectionBegin, SectionEnd, SourceModule, VariableDecl

from .environment import EntryKind, GlobalEntry, GlobalEnv
from .sections import SectionFrame, SectionScope, check_uses, compute_used_variables, end_section

logger = logging.getLogger(__name__)


class Elaborator:
    """
    Checks declarations against a growing global environment.

    One elaborator can run several modules in a row (files concatenated in
    command-line order); sections never span files.
    """

    def __init__(self, env: Optional[GlobalEnv] = None):
        self.env = env if env is not None else GlobalEnv()
        self.frames: List[SectionFrame] = []
        self.diagnostics: List[Diagnostic] = []

    @property
    def scope(self) -> SectionScope:
        return SectionScope(self.env, self.frames)

    def context(self) -> Context:
        return Context(self.scope)

    # === Modules ===

    def run(self, module: SourceModule) -> FileReport:
        """Elaborate every declaration of `module`, returning its status lines."""
        self.frames = []
        report = FileReport(path=module.path)
        for decl in module.declarations:
            result = self._declaration(decl)
            if result is not None:
                report.declarations.append(result)
        if self.frames:
            # The parser rejects unbalanced sections; close anything left open.
            self._close_all()
        checked = sum(1 for r in report.declarations if r.status == DeclarationStatus.CHECKED)
        logger.info(f"Elaborated {module.path}: {checked}/{len(report.declarations)} declarations checked")
        return report

    def _declaration(self, decl: Declaration) -> Optional[DeclarationResult]:
        if isinstance(decl, SectionBegin):
            self.frames.append(SectionFrame(decl.name, decl.span))
            logger.debug(f"Opened section {decl.name or '(unnamed)'}")
            return None
        if isinstance(decl, SectionEnd):
            self._guard(self._end_section, decl)
            return None
        if isinstance(decl, VariableDecl):
            ok = all(self._guard(self._variable, decl, name) for name in decl.names)
            return self._result(", ".join(decl.names), EntryKind.VARIABLE, ok, decl.span)
        if isinstance(decl, Define):
            ok = self._guard(self._define, decl)
            return self._result(decl.name, EntryKind.DEFINED, ok, decl.span)
        if isinstance(decl, Postulate):
            ok = self._guard(self._postulate, decl)
            return self._result(decl.name, EntryKind.POSTULATED, ok, decl.span)
        return None

    def _guard(self, handler, decl: Declaration, *args) -> bool:
        try:
            handler(decl, *args)
            return True
        except KernelError as e:
            e.with_span(decl.span)
            logger.debug(f"Declaration at {decl.span} failed: {e}")
            self.diagnostics.append(e.to_diagnostic())
            return False

    @staticmethod
    def _result(name: str, kind: EntryKind, ok: bool, span: Span) -> DeclarationResult:
        return DeclarationResult(
            name=name,
            kind=kind.value,
            status=DeclarationStatus.CHECKED if ok else DeclarationStatus.FAILED,
            line=span.start_line,
        )

    # === Names ===

    def _ensure_fresh(self, name: str, span: Span, variable: bool = False) -> None:
        """Reject a name already taken where it would be ambiguous.

        Section variables may shadow earlier globals; they clash only with
        other open variables and with definitions made inside open sections.
        """
        for frame in self.frames:
            if name in frame.variables:
                raise DuplicateName(f"{name} is already a section variable (declared at {frame.variables[name].span})",
                                    span)
            if variable and name in frame.definitions:
                raise DuplicateName(f"{name} is already defined in this section", span)
        if not variable:
            entry = self.env.lookup(name)
            if entry is not None:
                raise DuplicateName(f"{name} is already defined at {entry.span}", span)

    # === Declarations ===

    def _define(self, decl: Define) -> None:
        self._ensure_fresh(decl.name, decl.span)
        logger.debug(f"Checking #def {decl.name}")
        ctx = self.context()
        type_expr, type_ = check_type(ctx, decl.signature)
        term = check(ctx, decl.term, type_)
        self._check_uses(decl.name, decl.uses, type_expr, term, decl.span)
        value = ctx.eval(term)
        self._add(GlobalEntry(decl.name, EntryKind.DEFINED, type_, type_expr, term, value, decl.span),
                  type_expr, term)

    def _postulate(self, decl: Postulate) -> None:
        self._ensure_fresh(decl.name, decl.span)
        logger.debug(f"Checking #postulate {decl.name}")
        type_expr, type_ = check_type(self.context(), decl.signature)
        self._check_uses(decl.name, decl.uses, type_expr, None, decl.span)
        self._add(GlobalEntry(decl.name, EntryKind.POSTULATED, type_, type_expr, span=decl.span), type_expr)

    def _variable(self, decl: VariableDecl, name: str) -> None:
        if not self.frames:
            raise SectionNameMismatch(f"#variable {name} outside of a section", decl.span)
        self._ensure_fresh(name, decl.span, variable=True)
        type_expr, type_ = check_type(self.context(), decl.type_)
        value = Evaluator(self.scope).reflect(VNeutral(HVar(name, fresh_uid(), type_)))
        self.frames[-1].variables[name] = GlobalEntry(name, EntryKind.VARIABLE, type_, type_expr,
                                                      value=value, span=decl.span)
        logger.debug(f"Assumed section variable {name}")

    def _check_uses(self, name: str, declared: Optional[Tuple[str, ...]], type_expr: Expr,
                    term: Optional[Expr], span: Span) -> None:
        if not self.frames:
            for variable in declared or ():
                self.diagnostics.append(
                    UnusedUses(f"{name} declares `uses ({variable})` outside of any section", span).to_diagnostic()
                )
            return
        bodies = [type_expr] if term is None else [type_expr, term]
        computed = compute_used_variables(bodies, self.frames)
        explicit = compute_used_variables([type_expr], self.frames)
        report, problems = check_uses(name, declared, computed, explicit, span)
        errors = [p for p in problems if not isinstance(p, UnusedUses)]
        if errors:
            # Report every missing name; the first one aborts the declaration.
            self.diagnostics.extend(e.to_diagnostic() for e in errors[1:])
            raise errors[0]
        self.diagnostics.extend(p.to_diagnostic() for p in problems)
        logger.debug(f"{name} uses {sorted(report.computed) or 'no section variables'}")

    def _add(self, entry: GlobalEntry, *exprs: Expr) -> None:
        self.env = self.env.extend(entry)
        if self.frames:
            self.frames[-1].definitions[entry.name] = frozenset(compute_used_variables(exprs, self.frames))

    # === Sections ===

    def _end_section(self, decl: SectionEnd) -> None:
        if not self.frames:
            raise SectionNameMismatch("#end without an open section", decl.span)
        frame = self.frames.pop()
        self.env = end_section(frame, self.env, self.frames)
        logger.debug(f"Closed section {frame.name or '(unnamed)'}")
        if decl.name != frame.name:
            raise SectionNameMismatch(
                f"#end {decl.name or '(unnamed)'} closes section {frame.name or '(unnamed)'}", decl.span
            )

    def _close_all(self) -> None:
        while self.frames:
            self._end_section(SectionEnd(self.frames[-1].name, span=NO_SPAN))


# === Functional interface ===

def elaborate_module(module: SourceModule, env: Optional[GlobalEnv] = None) -> Tuple[GlobalEnv, List[Diagnostic]]:
    """Elaborate `module` on top of `env`; the input environment is left untouched."""
    elaborator = Elaborator(env)
    elaborator.run(module)
    return elaborator.env, elaborator.diagnostics


def register_postulate(name: str, type_expr: Expr, env: GlobalEnv, span: Span = NO_SPAN) -> GlobalEnv:
    """Check `type_expr` as a type and add `name` as an axiom of that type.

    Raises:
        DuplicateName, or any checking error from the type.
    """
    if name in env:
        raise DuplicateName(f"{name} is already defined at {env.lookup(name).span}", span)
    elab, type_ = check_type(Context(env), type_expr)
    return env.extend(GlobalEntry(name, EntryKind.POSTULATED, type_, elab, span=span))
