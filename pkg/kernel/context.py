"""
The checking context: local variables with their types and values, the
tope hypotheses in force, and the global scope.

Cube variables are ordinary locals whose type is a cube; the tope layer
reads them off the neutrals that occur in the hypotheses, so the context
needs no separate cube list.
"""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Mapping, Optional, Tuple

from syntax.ast import Expr
from syntax.printer import pretty_print

from .conversion import Conversion
from .evaluator import Evaluator, GlobalScope, fresh_uid
from .readback import Readback
from .values import HVar, Value, VNeutral, shape_parts


@dataclass(frozen=True, eq=False)
class Context:
    globals: GlobalScope
    env: Mapping[str, Value] = field(default_factory=dict)
    types: Mapping[str, Value] = field(default_factory=dict)
    hyps: Tuple[Value, ...] = ()
    names: Tuple[str, ...] = ()

    # === Derived machinery ===

    @cached_property
    def evaluator(self) -> Evaluator:
        return Evaluator(self.globals, self.hyps)

    def conversion(self, erase: bool = False) -> Conversion:
        return Conversion(self.evaluator, erase=erase)

    def readback(self) -> Readback:
        return Readback(self.evaluator, set(self.names) | set(self.globals.names()))

    def eval(self, e: Expr) -> Value:
        return self.evaluator.eval(self.env, e)

    def entails(self, tope: Value) -> bool:
        return self.evaluator.entails(tope)

    def inconsistent(self) -> bool:
        return self.evaluator.inconsistent()

    def lookup(self, name: str) -> Optional[Value]:
        """Type of a local variable, if `name` is bound locally."""
        return self.types.get(name)

    # === Extension ===

    def assume(self, *topes: Value) -> "Context":
        return Context(self.globals, self.env, self.types, self.hyps + topes, self.names)

    def define(self, name: str, value: Value, type_: Value) -> "Context":
        env: Dict[str, Value] = dict(self.env)
        types: Dict[str, Value] = dict(self.types)
        env[name] = value
        types[name] = type_
        return Context(self.globals, env, types, self.hyps, self.names + (name,))

    def bind(self, name: str, domain: Value) -> Tuple["Context", Value]:
        """Bind a fresh variable of `domain`.

        For a shape domain the variable ranges over the cube and the shape's
        tope is added to the hypotheses. Pattern binders are turned into a
        single name by the checker before they get here.
        """
        carrier, tope = shape_parts(domain)
        var = VNeutral(HVar(name, fresh_uid(), carrier))
        ctx = self if name == "_" else self.define(name, var, carrier)
        if tope is not None:
            ctx = ctx.assume(self.evaluator.instantiate(tope, var))
        return ctx, var

    # === Display ===

    def show(self, value: Value, type_: Value) -> str:
        return pretty_print(self.readback().term(value, type_))

    def show_type(self, value: Value) -> str:
        return pretty_print(self.readback().type_(value))

    def show_tope(self, value: Value) -> str:
        return pretty_print(self.readback().tope(value))

    def show_hyps(self) -> str:
        if not self.hyps:
            return "⊤"
        return " , ".join(self.show_tope(h) for h in self.hyps)
