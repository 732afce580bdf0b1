"""
Textual entailment queries: `<cube-vars> | <hyps> |- <goal>`.

Cube variables are names of the interval 2; hypotheses are topes separated
by commas (none for an empty list).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from kernel.errors import ParseError
from syntax.ast import Cube2
from syntax.parser import parse_expr_tokens
from syntax.tokens import Token, TokenKind, tokenize

from .flatten import flatten_points
from .formulas import CubeContext, Tope
from .semantics import IntervalModel, find_countermodel
from .solver import entails


@dataclass(frozen=True)
class TopeQuery:
    ctx: CubeContext
    hyps: Tuple[Tope, ...]
    goal: Tope


@dataclass(frozen=True)
class TopeAnswer:
    entailed: bool
    countermodel: Optional[IntervalModel] = None


def _split_commas(tokens: Sequence[Token]) -> List[List[Token]]:
    groups: List[List[Token]] = [[]]
    depth = 0
    for tok in tokens:
        if tok.kind in (TokenKind.LPAREN, TokenKind.LBRACKET, TokenKind.LBRACE):
            depth += 1
        elif tok.kind in (TokenKind.RPAREN, TokenKind.RBRACKET, TokenKind.RBRACE):
            depth -= 1
        if tok.kind == TokenKind.COMMA and depth == 0:
            groups.append([])
        else:
            groups[-1].append(tok)
    return groups


def parse_query(text: str, file: str = "<query>") -> TopeQuery:
    """Parse and flatten a query.

    Raises:
        LexError, ParseError, IllFormedPoint
    """
    tokens = tokenize(text, file)
    bars = [i for i, tok in enumerate(tokens) if tok.kind == TokenKind.BAR]
    turnstiles = [i for i, tok in enumerate(tokens) if tok.kind == TokenKind.TURNSTILE]
    if not bars or not turnstiles or bars[0] > turnstiles[0]:
        raise ParseError("expected `<cube-vars> | <hyps> |- <goal>`", None, ["|", "|-"])
    bar, turnstile = bars[0], turnstiles[0]
    names = []
    for tok in tokens[:bar]:
        if tok.kind != TokenKind.IDENT:
            raise ParseError(f"unexpected {tok.text!r} among cube variables", tok.span, ["identifier"])
        names.append(tok.text)
    hyp_tokens = tokens[bar + 1:turnstile]
    hyps = [parse_expr_tokens(group, file) for group in _split_commas(hyp_tokens)] if hyp_tokens else []
    goal = parse_expr_tokens(tokens[turnstile + 1:], file)
    ctx, flat = flatten_points([(name, Cube2()) for name in names], [*hyps, goal])
    return TopeQuery(ctx, tuple(flat[:-1]), flat[-1])


def answer_query(query: TopeQuery, bound: Optional[int] = None) -> TopeAnswer:
    """Decide the query; a countermodel from the oracle accompanies a negative answer."""
    if entails(query.ctx, query.hyps, query.goal):
        return TopeAnswer(True)
    return TopeAnswer(False, find_countermodel(query.ctx, query.hyps, query.goal, bound))
