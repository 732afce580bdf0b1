"""
Tokenizer for the surface language.

Unicode operators and their ASCII aliases produce the same token kinds.
Identifiers are maximal runs of non-reserved characters, so `is-contr`,
`Δ¹`, `β-Σ-first` and `is-pre-∞-category` are single identifiers; binary operators
spelled in ASCII need surrounding whitespace.
"""

from dataclasses import dataclass
from enum import Enum
from typing import List

from kernel.errors import LexError
from models.span import Span


class TokenKind(str, Enum):
    IDENT = "identifier"
    LPAREN = "("
    RPAREN = ")"
    LBRACKET = "["
    RBRACKET = "]"
    LBRACE = "{"
    RBRACE = "}"
    COMMA = ","
    COLON = ":"
    DEFINE = ":="
    BAR = "|"
    TURNSTILE = "|-"
    ARROW = "→"
    MAPSTO = "↦"
    TEQ = "≡"
    LEQ = "≤"
    AND = "∧"
    OR = "∨"
    TIMES = "×"
    SIGMA = "Σ"
    TOP = "⊤"
    BOT = "⊥"
    EQ = "="
    EQ_ANNOT = "=_"
    LAMBDA = "\\"
    HOLE = "?"
    U = "U"
    CUBE = "CUBE"
    TOPE = "TOPE"
    CUBE_UNIT = "1"
    CUBE_2 = "2"
    POINT_STAR = "*₁"
    POINT_0 = "0₂"
    POINT_1 = "1₂"
    REFL = "refl"
    REFL_ANNOT = "refl_"
    RECOR = "recOR"
    RECBOT = "recBOT"
    IDJ = "idJ"
    FIRST = "first"
    SECOND = "second"
    AS = "as"
    USES = "uses"
    CMD_LANG = "#lang"
    CMD_DEF = "#def"
    CMD_POSTULATE = "#postulate"
    CMD_SECTION = "#section"
    CMD_END = "#end"
    CMD_VARIABLE = "#variable"
    CMD_VARIABLES = "#variables"


COMMANDS = frozenset({
    TokenKind.CMD_LANG,
    TokenKind.CMD_DEF,
    TokenKind.CMD_POSTULATE,
    TokenKind.CMD_SECTION,
    TokenKind.CMD_END,
    TokenKind.CMD_VARIABLE,
    TokenKind.CMD_VARIABLES,
})


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    span: Span


# Single characters that always form a token of their own.
PUNCTUATION = {
    "(": TokenKind.LPAREN,
    ")": TokenKind.RPAREN,
    "[": TokenKind.LBRACKET,
    "]": TokenKind.RBRACKET,
    "{": TokenKind.LBRACE,
    "}": TokenKind.RBRACE,
    ",": TokenKind.COMMA,
    "→": TokenKind.ARROW,
    "↦": TokenKind.MAPSTO,
    "≡": TokenKind.TEQ,
    "≤": TokenKind.LEQ,
    "∧": TokenKind.AND,
    "∨": TokenKind.OR,
    "×": TokenKind.TIMES,
    "⊤": TokenKind.TOP,
    "⊥": TokenKind.BOT,
    "⊢": TokenKind.TURNSTILE,
}

# Longest first.
SYMBOLS = (
    ("|->", TokenKind.MAPSTO),
    ("|-", TokenKind.TURNSTILE),
    ("|", TokenKind.BAR),
    (":=", TokenKind.DEFINE),
    (":", TokenKind.COLON),
)

WORDS = {
    "->": TokenKind.ARROW,
    "===": TokenKind.TEQ,
    "<=": TokenKind.LEQ,
    "/\\": TokenKind.AND,
    "\\/": TokenKind.OR,
    "*": TokenKind.TIMES,
    "Σ": TokenKind.SIGMA,
    "Sigma": TokenKind.SIGMA,
    "TOP": TokenKind.TOP,
    "BOT": TokenKind.BOT,
    "=": TokenKind.EQ,
    "=_": TokenKind.EQ_ANNOT,
    "\\": TokenKind.LAMBDA,
    "?": TokenKind.HOLE,
    "U": TokenKind.U,
    "CUBE": TokenKind.CUBE,
    "TOPE": TokenKind.TOPE,
    "1": TokenKind.CUBE_UNIT,
    "2": TokenKind.CUBE_2,
    "*₁": TokenKind.POINT_STAR,
    "*_1": TokenKind.POINT_STAR,
    "0₂": TokenKind.POINT_0,
    "0_2": TokenKind.POINT_0,
    "1₂": TokenKind.POINT_1,
    "1_2": TokenKind.POINT_1,
    "refl": TokenKind.REFL,
    "refl_": TokenKind.REFL_ANNOT,
    "recOR": TokenKind.RECOR,
    "recBOT": TokenKind.RECBOT,
    "idJ": TokenKind.IDJ,
    "first": TokenKind.FIRST,
    "π₁": TokenKind.FIRST,
    "second": TokenKind.SECOND,
    "π₂": TokenKind.SECOND,
    "as": TokenKind.AS,
    "uses": TokenKind.USES,
    "#lang": TokenKind.CMD_LANG,
    "#def": TokenKind.CMD_DEF,
    "#define": TokenKind.CMD_DEF,
    "#postulate": TokenKind.CMD_POSTULATE,
    "#section": TokenKind.CMD_SECTION,
    "#end": TokenKind.CMD_END,
    "#variable": TokenKind.CMD_VARIABLE,
    "#assume": TokenKind.CMD_VARIABLE,
    "#variables": TokenKind.CMD_VARIABLES,
}

WORD_BREAKS = frozenset(PUNCTUATION) | frozenset("|:")


class _Lexer:
    def __init__(self, text: str, file: str):
        self.text = text
        self.file = file
        self.pos = 0
        self.line = 1
        self.col = 1
        self.tokens: List[Token] = []

    def _advance(self, count: int) -> None:
        for ch in self.text[self.pos:self.pos + count]:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += count

    def _emit(self, kind: TokenKind, length: int) -> None:
        start_line, start_col = self.line, self.col
        lexeme = self.text[self.pos:self.pos + length]
        self._advance(length)
        span = Span(self.file, start_line, start_col, self.line, self.col)
        self.tokens.append(Token(kind, lexeme, span))

    def _here(self) -> Span:
        return Span(self.file, self.line, self.col, self.line, self.col + 1)

    def _skip_block_comment(self) -> None:
        start = self._here()
        depth = 0
        while self.pos < len(self.text):
            if self.text.startswith("{-", self.pos):
                depth += 1
                self._advance(2)
            elif self.text.startswith("-}", self.pos):
                depth -= 1
                self._advance(2)
                if depth == 0:
                    return
            else:
                self._advance(1)
        raise LexError("unterminated block comment", start)

    def run(self) -> List[Token]:
        text = self.text
        while self.pos < len(text):
            ch = text[self.pos]
            if ch in " \t\r\n":
                self._advance(1)
                continue
            if ch == "\ufeff" and self.pos == 0:
                self._advance(1)
                continue
            if not ch.isprintable():
                raise LexError(f"stray character U+{ord(ch):04X}", self._here())
            if text.startswith("--", self.pos):
                end = text.find("\n", self.pos)
                self._advance((len(text) if end < 0 else end) - self.pos)
                continue
            if text.startswith("{-", self.pos):
                self._skip_block_comment()
                continue
            if ch in PUNCTUATION:
                self._emit(PUNCTUATION[ch], 1)
                continue
            symbol = next(((s, k) for s, k in SYMBOLS if text.startswith(s, self.pos)), None)
            if symbol is not None:
                self._emit(symbol[1], len(symbol[0]))
                continue
            if ch == "\\" and not text.startswith("\\/", self.pos):
                self._emit(TokenKind.LAMBDA, 1)
                continue
            end = self.pos
            while end < len(text) and not text[end].isspace() and text[end] not in WORD_BREAKS:
                end += 1
            word = text[self.pos:end]
            kind = WORDS.get(word)
            if kind is None:
                if word.startswith("#"):
                    raise LexError(f"unknown command {word}", self._here())
                kind = TokenKind.IDENT
            self._emit(kind, end - self.pos)
        return self.tokens


def tokenize(text: str, file: str = "<input>") -> List[Token]:
    """Split source text into tokens carrying spans.

    Raises:
        LexError: on a stray control character, an unknown `#` command or
            an unterminated block comment.
    """
    return _Lexer(text, file).run()
