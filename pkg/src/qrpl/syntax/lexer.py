"""Tokenizer for ``.qrp`` source text."""
from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

KEYWORDS = frozenset(
    """qubit qudit var int real bool gate proc main skip if then else fi while do od
    qif case fiq forall begin local end true false and or not div mod pi e""".split()
)

SYMBOLS = (":=", "->", "<=", ">=", "!=", "<", ">", "=", "+", "-", "*", "/", "^",
           "(", ")", "[", "]", "{", "}", ",", ";", ":")

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r\n]+)
  | (?P<comment>//[^\n]*)
  | (?P<ket>\|(?:[0-9]+|\+|-)>)
  | (?P<ketvar>\|[A-Za-z_][A-Za-z_0-9]*>)
  | (?P<ketopen>\|\()
  | (?P<number>(?:\d+\.\d*(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\.\d+(?:[eE][+-]?\d+)?|\d+)(?P<imag>i(?![A-Za-z_0-9]))?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<sym>:=|->|<=|>=|!=|[<>=+\-*/^()\[\]{},;:])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # INT REAL IMAG IDENT KW SYM KET KETVAR KETOPEN EOF
    text: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        return repr(self.text)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    n = len(source)
    while pos < n:
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise ParseError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "number" or m.group("imag") is not None:
            if m.group("imag"):
                tokens.append(Token("IMAG", text[:-1], line, col))
            elif re.fullmatch(r"\d+", text):
                tokens.append(Token("INT", text, line, col))
            else:
                tokens.append(Token("REAL", text, line, col))
        elif kind == "ident":
            tokens.append(Token("KW" if text in KEYWORDS else "IDENT", text, line, col))
        elif kind == "sym":
            tokens.append(Token("SYM", text, line, col))
        elif kind == "ket":
            tokens.append(Token("KET", text[1:-1], line, col))
        elif kind == "ketvar":
            tokens.append(Token("KETVAR", text[1:-1], line, col))
        elif kind == "ketopen":
            tokens.append(Token("KETOPEN", text, line, col))
        newlines = text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens
