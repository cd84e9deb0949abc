"""Tokenizer shared by the polynomial syntax and the session language."""

import re
from dataclasses import dataclass

from .errors import ParseError

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>(?:\#|//)[^\n]*)
  | (?P<num>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>->|\.\.|<=|[-+*/^()\[\]{},;:=<])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "ident", "op", "eof"
    value: str
    line: int
    col: int
    offset: int

    def __str__(self):
        return "end of input" if self.kind == "eof" else repr(self.value)


def tokenize(text):
    tokens = []
    pos = 0
    line, line_start = 1, 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        value = m.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, value, line, pos - line_start + 1, pos))
        nl = value.count("\n")
        if nl:
            line += nl
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1, pos))
    return tokens


class TokenStream:
    """Cursor over a token list with expectation tracking for error messages."""

    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    @classmethod
    def from_text(cls, text):
        return cls(tokenize(text))

    def peek(self, k=0):
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def next(self):
        tok = self.tokens[self.i]
        if tok.kind != "eof":
            self.i += 1
        return tok

    def at(self, *values):
        tok = self.peek()
        return tok.kind in ("op", "ident") and tok.value in values

    def accept(self, value):
        if self.at(value):
            return self.next()
        return None

    def expect(self, *values):
        tok = self.peek()
        if tok.kind in ("op", "ident") and tok.value in values:
            return self.next()
        self.error(f"unexpected {tok}", expected=[repr(v) for v in values])

    def expect_kind(self, kind, what=None):
        tok = self.peek()
        if tok.kind == kind:
            return self.next()
        self.error(f"unexpected {tok}", expected=[what or kind])

    def expect_int(self):
        """Signed integer literal."""
        neg = self.accept("-") is not None
        if not neg:
            self.accept("+")
        tok = self.expect_kind("num", "integer")
        v = int(tok.value)
        return -v if neg else v

    def error(self, message, expected=(), tok=None):
        tok = tok or self.peek()
        raise ParseError(message, tok.line, tok.col, expected)

    def at_end(self):
        return self.peek().kind == "eof"
