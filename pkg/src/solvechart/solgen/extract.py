"""Program extraction from raw model output.

Preference order: the first fenced code block; failing that, the longest
suffix of the text that parses as a non-empty program.  Models often prefix
an apology or explanation, and the suffix rule cuts it away without guessing
at formats.
"""

from __future__ import annotations

import re

from ..dsl import ParseError, parse_program
from ..errors import SolveChartError

__all__ = ["ExtractionError", "extract_program"]

_FENCE_RE = re.compile(r"```[A-Za-z0-9_+-]*[ \t]*\n(.*?)```", re.DOTALL)


class ExtractionError(SolveChartError):
    """No program-shaped text could be recovered from the reply."""


def extract_program(reply: str) -> str:
    """Pulls program text out of a model reply.

    Returns the text inside the first fenced code block if there is one,
    otherwise the longest suffix of the reply that parses as a program with
    at least one statement.  Raises ExtractionError when neither applies.
    The returned text is not guaranteed to parse if it came from a fence.
    """
    match = _FENCE_RE.search(reply)
    if match:
        return match.group(1).strip("\n")
    lines = reply.split("\n")
    for start in range(len(lines)):
        candidate = "\n".join(lines[start:])
        if not candidate.strip():
            break
        try:
            program = parse_program(candidate)
        except ParseError:
            continue
        if program.statements:
            return candidate
    raise ExtractionError("reply contains no code fence and no parseable suffix")
