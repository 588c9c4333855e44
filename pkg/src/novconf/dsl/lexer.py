"""Tokenizer for .cnv scripts: names, integers, punctuation, ``//`` comments."""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import StrEnum

from novconf.errors import ParseError


class TokenKind(StrEnum):
    NAME = "name"
    INT = "integer"
    PUNCT = "punct"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    column: int
    offset: int

    def describe(self) -> str:
        if self.kind == TokenKind.EOF:
            return "end of input"
        return repr(self.text)


PUNCTUATION = "{}(),;:=+-*/^"

_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r]+)|(?P<nl>\n)|(?P<comment>//[^\n]*)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<int>[0-9]+)"
    r"|(?P<punct>[{}(),;:=+\-*/^])"
)


def tokenize(text: str) -> list[Token]:
    """Split ``text`` into tokens, ending with an EOF token.

    Raises:
        ParseError: On a character that starts no token.
    """
    tokens: list[Token] = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        column = pos - line_start + 1
        if match is None:
            raise ParseError(line, column, pos, ("token",), repr(text[pos]))
        kind = match.lastgroup
        value = match.group()
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind == "name":
            tokens.append(Token(TokenKind.NAME, value, line, column, pos))
        elif kind == "int":
            tokens.append(Token(TokenKind.INT, value, line, column, pos))
        elif kind == "punct":
            tokens.append(Token(TokenKind.PUNCT, value, line, column, pos))
        pos = match.end()
    tokens.append(Token(TokenKind.EOF, "", line, pos - line_start + 1, pos))
    return tokens
