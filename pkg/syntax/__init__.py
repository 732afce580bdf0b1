"""Surface syntax: tokens, parser, printer and binding utilities."""

from .ast import Expr, SourceModule
from .binding import alpha_equal, free_vars, fresh_name, substitute
from .literate import extract_literate, is_literate_path
from .parser import parse_expr, parse_module
from .printer import dump_ast, pretty_print, print_declaration, print_module
from .tokens import Token, TokenKind, tokenize

__all__ = [
    "Expr",
    "SourceModule",
    "Token",
    "TokenKind",
    "alpha_equal",
    "dump_ast",
    "extract_literate",
    "free_vars",
    "fresh_name",
    "is_literate_path",
    "parse_expr",
    "parse_module",
    "pretty_print",
    "print_declaration",
    "print_module",
    "substitute",
    "tokenize",
]
