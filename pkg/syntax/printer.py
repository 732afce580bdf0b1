"""
Pretty-printer producing Unicode surface syntax that reparses to an
α-equal tree, plus a structural dump used by `parse --dump-ast`.
"""

from dataclasses import fields
from typing import List

from .ast import (
    WILDCARD,
    App,
    Cube2,
    Cube2_0,
    Cube2_1,
    CubeProduct,
    CubeUnit,
    CubeUnitStar,
    Declaration,
    Define,
    Expr,
    First,
    GlobalRef,
    Hole,
    IdType,
    IndPath,
    Lambda,
    Pair,
    Param,
    Pattern,
    Pi,
    Postulate,
    RecBot,
    RecOr,
    Refl,
    RefinementType,
    Second,
    SectionBegin,
    SectionEnd,
    Shape,
    Sigma,
    SourceModule,
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
    VariableDecl,
)
from .binding import free_vars

# Precedence levels, loosest first.
EXPR, OR, AND, REL, PROD, APP, ATOM = range(7)

CONSTANT_TEXT = {
    Universe: "U",
    UniverseCube: "CUBE",
    UniverseTope: "TOPE",
    CubeUnit: "1",
    CubeUnitStar: "*₁",
    Cube2: "2",
    Cube2_0: "0₂",
    Cube2_1: "1₂",
    TopeTop: "⊤",
    TopeBottom: "⊥",
    RecBot: "recBOT",
    Hole: "?",
}


def print_pattern(pattern: Pattern) -> str:
    if isinstance(pattern, str):
        return pattern
    return f"({print_pattern(pattern[0])} , {print_pattern(pattern[1])})"


def _branches(branches) -> str:
    return " , ".join(f"{_pp(tope, OR)} ↦ {_pp(term, EXPR)}" for tope, term in branches)


def _binder_group(binder: Pattern, domain: Expr) -> str:
    if isinstance(domain, Shape) and domain.binder == binder:
        return f"({print_pattern(binder)} : {_pp(domain.cube, EXPR)} | {_pp(domain.tope, EXPR)})"
    return f"({print_pattern(binder)} : {_pp(domain, EXPR)})"


def _level_and_text(e: Expr):
    kind = type(e)
    if kind in CONSTANT_TEXT:
        return ATOM, CONSTANT_TEXT[kind]
    if isinstance(e, (Var, GlobalRef)):
        return ATOM, e.name
    if isinstance(e, Refl):
        if e.term is None:
            return ATOM, "refl"
        if e.type_ is None:
            return ATOM, f"refl_{{{_pp(e.term, EXPR)}}}"
        return ATOM, f"refl_{{{_pp(e.term, EXPR)} : {_pp(e.type_, EXPR)}}}"
    if isinstance(e, Pair):
        return ATOM, f"({_pp(e.left, EXPR)} , {_pp(e.right, EXPR)})"
    if isinstance(e, TypeAscription):
        return ATOM, f"({_pp(e.term, EXPR)} as {_pp(e.type_, EXPR)})"
    if isinstance(e, Shape):
        return ATOM, f"{{{print_pattern(e.binder)} : {_pp(e.cube, EXPR)} | {_pp(e.tope, EXPR)}}}"
    if isinstance(e, RecOr):
        return ATOM, f"recOR({_branches(e.branches)})"
    if isinstance(e, IndPath):
        parts = (e.type_, e.base, e.family, e.refl_case, e.endpoint, e.path)
        return ATOM, "idJ(" + " , ".join(_pp(p, EXPR) for p in parts) + ")"
    if isinstance(e, (First, Second)):
        word = "first" if isinstance(e, First) else "second"
        return APP, f"{word} {_pp(e.term, ATOM)}"
    if isinstance(e, App):
        fn = e.fn
        head = f"({_pp(fn, EXPR)})" if isinstance(fn, RefinementType) else _pp(fn, APP)
        return APP, f"{head} {_pp(e.arg, ATOM)}"
    if isinstance(e, RefinementType):
        return APP, f"{_pp(e.carrier, APP)} [{_branches(e.constraints)}]"
    if isinstance(e, CubeProduct):
        return PROD, f"{_pp(e.left, PROD)} × {_pp(e.right, APP)}"
    if isinstance(e, (TopeEq, TopeLeq)):
        op = "≡" if isinstance(e, TopeEq) else "≤"
        return REL, f"{_pp(e.left, PROD)} {op} {_pp(e.right, PROD)}"
    if isinstance(e, IdType):
        op = "=" if e.type_ is None else f"=_{{{_pp(e.type_, EXPR)}}}"
        return REL, f"{_pp(e.left, PROD)} {op} {_pp(e.right, PROD)}"
    if isinstance(e, TopeAnd):
        return AND, f"{_pp(e.left, AND)} ∧ {_pp(e.right, REL)}"
    if isinstance(e, TopeOr):
        return OR, f"{_pp(e.left, OR)} ∨ {_pp(e.right, AND)}"
    if isinstance(e, Pi):
        if isinstance(e.binder, str) and (e.binder == WILDCARD or e.binder not in free_vars(e.body)):
            return EXPR, f"{_pp(e.domain, OR)} → {_pp(e.body, EXPR)}"
        return EXPR, f"{_binder_group(e.binder, e.domain)} → {_pp(e.body, EXPR)}"
    if isinstance(e, Lambda):
        binders = [e.binder]
        body = e.body
        while isinstance(body, Lambda):
            binders.append(body.binder)
            body = body.body
        return EXPR, "\\ " + " ".join(print_pattern(b) for b in binders) + f" → {_pp(body, EXPR)}"
    if isinstance(e, Sigma):
        return EXPR, f"Σ ({print_pattern(e.binder)} : {_pp(e.domain, EXPR)}) , {_pp(e.body, EXPR)}"
    raise TypeError(f"cannot print {type(e).__name__}")


def _pp(e: Expr, level: int) -> str:
    own, text = _level_and_text(e)
    return f"({text})" if own < level else text


def pretty_print(e: Expr) -> str:
    """Render an expression in Unicode surface syntax."""
    return _pp(e, EXPR)


# === Declarations ===

def _params(params) -> str:
    return "".join(" " + _binder_group(p.binder, p.type_) for p in params)


def _uses(uses) -> str:
    return "" if uses is None else " uses (" + " ".join(uses) + ")"


def print_declaration(decl: Declaration) -> str:
    if isinstance(decl, Define):
        return (f"#def {decl.name}{_uses(decl.uses)}{_params(decl.params)}\n"
                f"  : {pretty_print(decl.result_type)}\n"
                f"  := {pretty_print(decl.body)}")
    if isinstance(decl, Postulate):
        return (f"#postulate {decl.name}{_uses(decl.uses)}{_params(decl.params)}\n"
                f"  : {pretty_print(decl.result_type)}")
    if isinstance(decl, SectionBegin):
        return "#section" + (f" {decl.name}" if decl.name else "")
    if isinstance(decl, SectionEnd):
        return "#end" + (f" {decl.name}" if decl.name else "")
    if isinstance(decl, VariableDecl):
        keyword = "#variable" if len(decl.names) == 1 else "#variables"
        return f"{keyword} {' '.join(decl.names)} : {pretty_print(decl.type_)}"
    raise TypeError(f"cannot print {type(decl).__name__}")


def print_module(module: SourceModule) -> str:
    parts = [f"#lang {module.lang}"] if module.lang else []
    parts.extend(print_declaration(d) for d in module.declarations)
    return "\n\n".join(parts) + "\n"


# === Structural dump ===

def _dump(node, indent: int, out: List[str]) -> None:
    pad = "  " * indent
    if isinstance(node, (Expr, Declaration, Param)):
        out.append(f"{pad}{type(node).__name__}")
        for f in fields(node):
            if f.name == "span":
                continue
            value = getattr(node, f.name)
            if isinstance(value, (Expr, Declaration, Param)) or (
                    isinstance(value, tuple) and value and not isinstance(value[0], str)
                    and not (isinstance(value[0], tuple) and isinstance(value[0][0], str))):
                out.append(f"{pad}  {f.name}:")
                _dump(value, indent + 2, out)
            else:
                shown = print_pattern(value) if f.name == "binder" else repr(value)
                out.append(f"{pad}  {f.name}: {shown}")
    elif isinstance(node, tuple):
        for item in node:
            _dump(item, indent, out)
    else:
        out.append(f"{pad}{node!r}")


def dump_ast(module: SourceModule) -> str:
    """Indented structural dump; spans are omitted so output is stable."""
    out = [f"SourceModule lang={module.lang!r}"]
    for decl in module.declarations:
        _dump(decl, 1, out)
    return "\n".join(out) + "\n"
