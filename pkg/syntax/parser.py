"""
Recursive-descent parser for modules and expressions.

Precedence, loosest first: λ / Σ / →, ∨, ∧, the relations (≡ ≤ = =_{A}),
×, application with postfix refinements `[φ ↦ a , …]`, atoms.
"""

import logging
from typing import List, Optional, Sequence, Tuple

from kernel.errors import ParseError
from models.span import Span

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
from .literate import extract_literate, is_literate_path
from .tokens import COMMANDS, Token, TokenKind, tokenize

logger = logging.getLogger(__name__)

K = TokenKind

CONSTANTS = {
    K.U: Universe,
    K.CUBE: UniverseCube,
    K.TOPE: UniverseTope,
    K.CUBE_UNIT: CubeUnit,
    K.CUBE_2: Cube2,
    K.POINT_STAR: CubeUnitStar,
    K.POINT_0: Cube2_0,
    K.POINT_1: Cube2_1,
    K.TOP: TopeTop,
    K.BOT: TopeBottom,
    K.HOLE: Hole,
    K.RECBOT: RecBot,
}

ATOM_STARTS = frozenset(CONSTANTS) | {
    K.IDENT, K.REFL, K.REFL_ANNOT, K.RECOR, K.IDJ, K.LBRACE, K.LPAREN,
}


class Parser:
    """Parses a token list; one error per call, no recovery."""

    def __init__(self, tokens: Sequence[Token], file: str = "<input>"):
        self.tokens = list(tokens)
        self.file = file
        self.pos = 0
        if self.tokens:
            last = self.tokens[-1].span
            self._eof_span = Span(file, last.end_line, last.end_col, last.end_line, last.end_col)
        else:
            self._eof_span = Span(file, 1, 1, 1, 1)

    # === Token helpers ===

    def peek(self, offset: int = 0) -> Optional[Token]:
        index = self.pos + offset
        return self.tokens[index] if index < len(self.tokens) else None

    def at(self, *kinds: TokenKind) -> bool:
        tok = self.peek()
        return tok is not None and tok.kind in kinds

    def at_end(self) -> bool:
        return self.pos >= len(self.tokens)

    def span_here(self) -> Span:
        tok = self.peek()
        return tok.span if tok else self._eof_span

    def advance(self) -> Token:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span)
        self.pos += 1
        return tok

    def expect(self, kind: TokenKind) -> Token:
        tok = self.peek()
        if tok is None or tok.kind != kind:
            found = "end of input" if tok is None else repr(tok.text)
            raise ParseError(f"unexpected {found}", self.span_here(), [kind.value])
        self.pos += 1
        return tok

    def _span_from(self, start: Span) -> Span:
        if self.pos == 0:
            return start
        return start.to(self.tokens[self.pos - 1].span)

    # === Modules ===

    def parse_module(self, path: str = "<input>", line_count: int = 0) -> SourceModule:
        declarations: List[Declaration] = []
        open_sections: List[Tuple[Optional[str], Span]] = []
        lang = None
        while not self.at_end():
            tok = self.peek()
            start = tok.span
            if tok.kind == K.CMD_LANG:
                self.advance()
                lang = self.expect(K.IDENT).text
            elif tok.kind == K.CMD_DEF:
                declarations.append(self._parse_define())
            elif tok.kind == K.CMD_POSTULATE:
                declarations.append(self._parse_postulate())
            elif tok.kind == K.CMD_SECTION:
                self.advance()
                name = self.advance().text if self.at(K.IDENT) else None
                open_sections.append((name, start))
                declarations.append(SectionBegin(name, span=self._span_from(start)))
            elif tok.kind == K.CMD_END:
                self.advance()
                name = self.advance().text if self.at(K.IDENT) else None
                if not open_sections:
                    raise ParseError("#end without a matching #section", start)
                open_sections.pop()
                declarations.append(SectionEnd(name, span=self._span_from(start)))
            elif tok.kind in (K.CMD_VARIABLE, K.CMD_VARIABLES):
                self.advance()
                names = [self.expect(K.IDENT).text]
                while self.at(K.IDENT):
                    names.append(self.advance().text)
                self.expect(K.COLON)
                type_ = self.parse_expr()
                declarations.append(VariableDecl(tuple(names), type_, span=self._span_from(start)))
            else:
                raise ParseError(
                    f"unexpected {tok.text!r}",
                    tok.span,
                    [k.value for k in COMMANDS],
                )
        if open_sections:
            name, span = open_sections[-1]
            raise ParseError(f"section {name or '(unnamed)'} is never closed", span, [K.CMD_END.value])
        logger.debug(f"Parsed {len(declarations)} declarations from {path}")
        return SourceModule(lang, tuple(declarations), path, line_count)

    def _parse_uses(self) -> Optional[Tuple[str, ...]]:
        if not self.at(K.USES):
            return None
        self.advance()
        self.expect(K.LPAREN)
        names = []
        while self.at(K.IDENT):
            names.append(self.advance().text)
        self.expect(K.RPAREN)
        return tuple(names)

    def _parse_params(self) -> Tuple[Param, ...]:
        params: List[Param] = []
        while self.at(K.LPAREN):
            start = self.span_here()
            patterns, type_, tope = self._parse_binder_group()
            span = self._span_from(start)
            for pattern in patterns:
                domain = Shape(pattern, type_, tope, span=span) if tope is not None else type_
                params.append(Param(pattern, domain, span))
        return tuple(params)

    def _parse_define(self) -> Define:
        start = self.advance().span
        name = self.expect(K.IDENT).text
        uses = self._parse_uses()
        params = self._parse_params()
        self.expect(K.COLON)
        result_type = self.parse_expr()
        self.expect(K.DEFINE)
        body = self.parse_expr()
        return Define(name, params, result_type, body, uses, span=self._span_from(start))

    def _parse_postulate(self) -> Postulate:
        start = self.advance().span
        name = self.expect(K.IDENT).text
        uses = self._parse_uses()
        params = self._parse_params()
        self.expect(K.COLON)
        result_type = self.parse_expr()
        return Postulate(name, params, result_type, uses, span=self._span_from(start))

    # === Binders ===

    def _parse_pattern(self) -> Pattern:
        if self.at(K.IDENT):
            return self.advance().text
        if self.at(K.LPAREN):
            self.advance()
            left = self._parse_pattern()
            self.expect(K.COMMA)
            right = self._parse_pattern()
            self.expect(K.RPAREN)
            return (left, right)
        raise ParseError("expected a binder", self.span_here(), [K.IDENT.value, K.LPAREN.value])

    def _parse_binder_group(self) -> Tuple[List[Pattern], Expr, Optional[Expr]]:
        """( x y : A ) or ( (t , s) : I | φ )."""
        self.expect(K.LPAREN)
        patterns = [self._parse_pattern()]
        while not self.at(K.COLON):
            patterns.append(self._parse_pattern())
        self.expect(K.COLON)
        type_ = self.parse_expr()
        tope = None
        if self.at(K.BAR):
            self.advance()
            tope = self.parse_expr()
        self.expect(K.RPAREN)
        return patterns, type_, tope

    def _try_binder_arrow(self) -> Optional[Expr]:
        saved = self.pos
        start = self.span_here()
        try:
            patterns, type_, tope = self._parse_binder_group()
        except ParseError:
            self.pos = saved
            return None
        if not self.at(K.ARROW):
            self.pos = saved
            return None
        self.advance()
        body = self.parse_expr()
        span = self._span_from(start)
        for pattern in reversed(patterns):
            domain = Shape(pattern, type_, tope, span=span) if tope is not None else type_
            body = Pi(pattern, domain, body, span=span)
        return body

    # === Expressions ===

    def parse_expr(self) -> Expr:
        start = self.span_here()
        if self.at(K.LAMBDA):
            self.advance()
            binders = [self._parse_pattern()]
            while not self.at(K.ARROW):
                binders.append(self._parse_pattern())
            self.advance()
            body = self.parse_expr()
            span = self._span_from(start)
            for binder in reversed(binders):
                body = Lambda(binder, body, span=span)
            return body
        if self.at(K.SIGMA):
            self.advance()
            self.expect(K.LPAREN)
            binder = self._parse_pattern()
            self.expect(K.COLON)
            domain = self.parse_expr()
            self.expect(K.RPAREN)
            self.expect(K.COMMA)
            body = self.parse_expr()
            return Sigma(binder, domain, body, span=self._span_from(start))
        if self.at(K.LPAREN):
            pi = self._try_binder_arrow()
            if pi is not None:
                return pi
        left = self._parse_or()
        if self.at(K.ARROW):
            self.advance()
            right = self.parse_expr()
            return Pi(WILDCARD, left, right, span=self._span_from(start))
        return left

    def _parse_or(self) -> Expr:
        start = self.span_here()
        left = self._parse_and()
        while self.at(K.OR):
            self.advance()
            left = TopeOr(left, self._parse_and(), span=self._span_from(start))
        return left

    def _parse_and(self) -> Expr:
        start = self.span_here()
        left = self._parse_relation()
        while self.at(K.AND):
            self.advance()
            left = TopeAnd(left, self._parse_relation(), span=self._span_from(start))
        return left

    def _parse_relation(self) -> Expr:
        start = self.span_here()
        left = self._parse_product()
        if self.at(K.TEQ, K.LEQ, K.EQ):
            op = self.advance().kind
            right = self._parse_product()
            span = self._span_from(start)
            if op == K.TEQ:
                return TopeEq(left, right, span=span)
            if op == K.LEQ:
                return TopeLeq(left, right, span=span)
            return IdType(left, right, None, span=span)
        if self.at(K.EQ_ANNOT):
            self.advance()
            self.expect(K.LBRACE)
            type_ = self.parse_expr()
            self.expect(K.RBRACE)
            right = self._parse_product()
            return IdType(left, right, type_, span=self._span_from(start))
        return left

    def _parse_product(self) -> Expr:
        start = self.span_here()
        left = self._parse_application()
        while self.at(K.TIMES):
            self.advance()
            left = CubeProduct(left, self._parse_application(), span=self._span_from(start))
        return left

    def _parse_application(self) -> Expr:
        start = self.span_here()
        if self.at(K.FIRST, K.SECOND):
            projection = First if self.advance().kind == K.FIRST else Second
            head = projection(self._parse_atom(), span=self._span_from(start))
        else:
            head = self._parse_atom()
        while self.at(*ATOM_STARTS):
            head = App(head, self._parse_atom(), span=self._span_from(start))
        while self.at(K.LBRACKET):
            self.advance()
            constraints = self._parse_branches(K.RBRACKET)
            head = RefinementType(head, constraints, span=self._span_from(start))
        return head

    def _parse_branches(self, closer: TokenKind) -> Tuple[Tuple[Expr, Expr], ...]:
        branches = []
        while True:
            tope = self._parse_or()
            self.expect(K.MAPSTO)
            term = self.parse_expr()
            branches.append((tope, term))
            if self.at(K.COMMA):
                self.advance()
                continue
            self.expect(closer)
            return tuple(branches)

    def _parse_atom(self) -> Expr:
        tok = self.peek()
        if tok is None:
            raise ParseError("unexpected end of input", self._eof_span, ["expression"])
        start = tok.span
        kind = tok.kind
        if kind == K.IDENT:
            self.advance()
            return Var(tok.text, span=tok.span)
        if kind in CONSTANTS:
            self.advance()
            return CONSTANTS[kind](span=tok.span)
        if kind == K.REFL:
            self.advance()
            return Refl(span=tok.span)
        if kind == K.REFL_ANNOT:
            self.advance()
            self.expect(K.LBRACE)
            term = self.parse_expr()
            type_ = None
            if self.at(K.COLON):
                self.advance()
                type_ = self.parse_expr()
            self.expect(K.RBRACE)
            return Refl(term, type_, span=self._span_from(start))
        if kind == K.RECOR:
            self.advance()
            self.expect(K.LPAREN)
            return RecOr(self._parse_branches(K.RPAREN), span=self._span_from(start))
        if kind == K.IDJ:
            self.advance()
            self.expect(K.LPAREN)
            parts = [self.parse_expr()]
            for _ in range(5):
                self.expect(K.COMMA)
                parts.append(self.parse_expr())
            self.expect(K.RPAREN)
            return IndPath(*parts, span=self._span_from(start))
        if kind == K.LBRACE:
            self.advance()
            binder = self._parse_pattern()
            self.expect(K.COLON)
            cube = self.parse_expr()
            self.expect(K.BAR)
            tope = self.parse_expr()
            self.expect(K.RBRACE)
            return Shape(binder, cube, tope, span=self._span_from(start))
        if kind == K.LPAREN:
            self.advance()
            inner = self.parse_expr()
            if self.at(K.COMMA):
                parts = [inner]
                while self.at(K.COMMA):
                    self.advance()
                    parts.append(self.parse_expr())
                self.expect(K.RPAREN)
                span = self._span_from(start)
                result = parts[-1]
                for part in reversed(parts[:-1]):
                    result = Pair(part, result, span=span)
                return result
            if self.at(K.AS, K.COLON):
                self.advance()
                type_ = self.parse_expr()
                self.expect(K.RPAREN)
                return TypeAscription(inner, type_, span=self._span_from(start))
            self.expect(K.RPAREN)
            return inner
        raise ParseError(f"unexpected {tok.text!r}", tok.span, ["expression"])


# === Entry points ===

def parse_module(text: str, path: str = "<input>", literate: Optional[bool] = None) -> SourceModule:
    """Parse a whole source file.

    Literate Markdown is detected from the `.rzk.md` suffix unless
    `literate` is given explicitly; spans always refer to the original text.

    Raises:
        LexError, ParseError
    """
    if literate is None:
        literate = is_literate_path(path)
    source = extract_literate(text) if literate else text
    tokens = tokenize(source, path)
    return Parser(tokens, path).parse_module(path, text.count("\n") + 1)


def parse_expr(text: str, file: str = "<input>") -> Expr:
    """Parse a single expression; trailing tokens are an error."""
    return parse_expr_tokens(tokenize(text, file), file)


def parse_expr_tokens(tokens: Sequence[Token], file: str = "<input>") -> Expr:
    parser = Parser(tokens, file)
    expr = parser.parse_expr()
    if not parser.at_end():
        tok = parser.peek()
        raise ParseError(f"unexpected {tok.text!r} after expression", tok.span)
    return expr
