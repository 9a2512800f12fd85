"""Errors raised while turning program text into an AST."""

from __future__ import annotations

from ..errors import SolveChartError


class ParseError(SolveChartError):
    """Structural error in program text, located by line and column."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"{line}:{column}: {message}")
        self.reason = message
        self.line = line
        self.column = column


class LexError(ParseError):
    """Character-level error: illegal characters or unterminated strings."""
