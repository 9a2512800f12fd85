"""Lexer for the solution DSL.

The language is layout-sensitive: block structure is carried by synthesized
INDENT and DEDENT tokens maintained with an indent stack, the way Python's own
tokenizer does it.  Comments run from ``#`` to end of line and are discarded.
Blank lines and comment-only lines produce no tokens at all, so they never
disturb indentation tracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import LexError, ParseError

__all__ = ["Token", "TokenKind", "KEYWORDS", "tokenize", "decode_string"]


class TokenKind(Enum):
    IDENTIFIER = "identifier"
    NUMBER = "number-literal"
    STRING = "string-literal"
    OPERATOR = "operator"
    KEYWORD = "keyword"
    NEWLINE = "newline"
    INDENT = "indent"
    DEDENT = "dedent"
    END = "end"


@dataclass(frozen=True, slots=True)
class Token:
    kind: TokenKind
    lexeme: str
    line: int
    column: int


KEYWORDS = frozenset({"if", "elif", "else", "and", "or", "not", "True", "False"})

# Two-character operators must be tried before their one-character prefixes.
_TWO_CHAR_OPERATORS = ("==", "!=", "<=", ">=", "//")
_ONE_CHAR_OPERATORS = frozenset("+-*/%<>=()[],:")

_ESCAPES = {"n": "\n", "t": "\t", "r": "\r", '"': '"', "\\": "\\"}


def _is_identifier_start(ch: str) -> bool:
    return ch.isalpha() or ch == "_"


def _is_identifier_char(ch: str) -> bool:
    return ch.isalnum() or ch == "_"


class _LineLexer:
    """Scans the content of one physical line (indentation already consumed)."""

    def __init__(self, text: str, line_number: int) -> None:
        self.text = text
        self.line = line_number
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def _peek(self) -> str:
        return self.text[self.pos]

    def tokens(self) -> list[Token]:
        out: list[Token] = []
        while not self.at_end():
            ch = self._peek()
            if ch == " ":
                self.pos += 1
                continue
            if ch == "#":
                break
            column = self.pos + 1
            if ch == '"':
                out.append(self._string(column))
            elif ch.isdigit():
                out.append(self._number(column))
            elif _is_identifier_start(ch):
                out.append(self._identifier(column))
            else:
                out.append(self._operator(column))
        return out

    def _string(self, column: int) -> Token:
        start = self.pos
        self.pos += 1
        while not self.at_end():
            ch = self.text[self.pos]
            if ch == '"':
                self.pos += 1
                return Token(TokenKind.STRING, self.text[start:self.pos], self.line, column)
            if ch == "\\":
                if self.pos + 1 >= len(self.text):
                    break
                escape = self.text[self.pos + 1]
                if escape not in _ESCAPES:
                    raise LexError(f"invalid escape sequence '\\{escape}'", self.line, self.pos + 2)
                self.pos += 2
                continue
            self.pos += 1
        raise LexError("unterminated string literal", self.line, column)

    def _number(self, column: int) -> Token:
        start = self.pos
        while not self.at_end() and self._peek().isdigit():
            self.pos += 1
        if not self.at_end() and self._peek() == "." and self.pos + 1 < len(self.text) and self.text[self.pos + 1].isdigit():
            self.pos += 1
            while not self.at_end() and self._peek().isdigit():
                self.pos += 1
        return Token(TokenKind.NUMBER, self.text[start:self.pos], self.line, column)

    def _identifier(self, column: int) -> Token:
        start = self.pos
        while not self.at_end() and _is_identifier_char(self._peek()):
            self.pos += 1
        lexeme = self.text[start:self.pos]
        kind = TokenKind.KEYWORD if lexeme in KEYWORDS else TokenKind.IDENTIFIER
        return Token(kind, lexeme, self.line, column)

    def _operator(self, column: int) -> Token:
        two = self.text[self.pos:self.pos + 2]
        if two in _TWO_CHAR_OPERATORS:
            self.pos += 2
            return Token(TokenKind.OPERATOR, two, self.line, column)
        ch = self._peek()
        if ch in _ONE_CHAR_OPERATORS:
            self.pos += 1
            return Token(TokenKind.OPERATOR, ch, self.line, column)
        raise LexError(f"illegal character {ch!r}", self.line, column)


def _split_indent(line: str, line_number: int) -> tuple[int, str]:
    """Returns (indent width, remaining content).  Only spaces may indent."""
    width = 0
    while width < len(line) and line[width] == " ":
        width += 1
    if width < len(line) and line[width] == "\t":
        raise LexError("tab character in indentation", line_number, width + 1)
    return width, line[width:]


def tokenize(source: str) -> list[Token]:
    """Tokenizes program text into a flat stream ending with an END token.

    Raises LexError for illegal characters, bad escapes, and unterminated
    string literals; ParseError for inconsistent dedents.  Every accepted
    stream has balanced INDENT/DEDENT pairs and non-decreasing positions.
    """
    tokens: list[Token] = []
    indent_stack = [0]
    line_number = 0
    for raw_line in source.split("\n"):
        line_number += 1
        line = raw_line.rstrip("\r")
        width, content = _split_indent(line, line_number)
        stripped = content.strip()
        if not stripped or stripped.startswith("#"):
            continue
        column = width + 1
        if width > indent_stack[-1]:
            indent_stack.append(width)
            tokens.append(Token(TokenKind.INDENT, "", line_number, column))
        else:
            while width < indent_stack[-1]:
                indent_stack.pop()
                tokens.append(Token(TokenKind.DEDENT, "", line_number, column))
            if width != indent_stack[-1]:
                raise ParseError("unindent does not match any outer level", line_number, column)
        lexer = _LineLexer(line, line_number)
        lexer.pos = width
        tokens.extend(lexer.tokens())
        tokens.append(Token(TokenKind.NEWLINE, "\n", line_number, len(line) + 1))
    final_column = 1
    while indent_stack[-1] > 0:
        indent_stack.pop()
        tokens.append(Token(TokenKind.DEDENT, "", line_number + 1, final_column))
    tokens.append(Token(TokenKind.END, "", line_number + 1, final_column))
    return tokens


def decode_string(lexeme: str) -> str:
    """Decodes a STRING token's raw lexeme (quotes included) to its value."""
    body = lexeme[1:-1]
    out: list[str] = []
    index = 0
    while index < len(body):
        ch = body[index]
        if ch == "\\":
            out.append(_ESCAPES[body[index + 1]])
            index += 2
        else:
            out.append(ch)
            index += 1
    return "".join(out)
