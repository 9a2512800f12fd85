"""Runtime values, numeric coercion of agent text, and display rules.

Values are plain Python data: float for numbers, str for text, bool for
booleans, list for lists.  Numbers are always finite; any operation that
would produce NaN or an infinity raises instead.  bool is checked before
float everywhere since Python booleans are also ints.
"""

from __future__ import annotations

import math
import re
from enum import Enum
from typing import Union

from ..errors import SolveChartError

__all__ = ["EngineError", "EngineErrorKind", "Value", "coerce_numeric", "stringify", "is_number"]

Value = Union[float, str, bool, list]


class EngineErrorKind(Enum):
    UNBOUND_VARIABLE = "unbound-variable"
    TYPE_MISMATCH = "type-mismatch"
    DIVISION_BY_ZERO = "division-by-zero"
    ANSWER_UNASSIGNED = "answer-unassigned"
    AGENT_FAILURE = "agent-failure"
    NON_FINITE = "non-finite"


class EngineError(SolveChartError):
    """Execution failure, tagged with the kind of violation."""

    def __init__(self, kind: EngineErrorKind, message: str) -> None:
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.reason = message


def is_number(value: Value) -> bool:
    return isinstance(value, float) and not isinstance(value, bool)


# Optional sign, then digits with an optional fractional part.  There is no
# exponent form: chart labels and agent replies do not use one.
_NUMERIC_RE = re.compile(r"[+-]?(\d+(\.\d*)?|\.\d+)")


def coerce_numeric(raw: str) -> Value:
    """Interprets agent text as a Number when it looks like one.

    Trims whitespace, strips one trailing percent sign (keeping the
    magnitude, so "45%" becomes 45.0), and removes thousands separators.
    Anything that still fails to parse is returned untouched as Text.
    """
    text = raw.strip()
    candidate = text
    if candidate.endswith("%"):
        candidate = candidate[:-1].strip()
    candidate = candidate.replace(",", "")
    if _NUMERIC_RE.fullmatch(candidate):
        value = float(candidate)
        if math.isfinite(value):
            return value
    return text


def stringify(value: Value) -> str:
    """Renders a value the way answers are reported.

    Numbers keep at most six fractional digits with trailing zeros trimmed
    and integers printed without a decimal point; booleans render as
    "Yes"/"No"; lists are comma separated.
    """
    if isinstance(value, bool):
        return "Yes" if value else "No"
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return str(int(value))
        text = f"{value:.6f}".rstrip("0").rstrip(".")
        return "0" if text in ("", "-", "-0") else text
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return ", ".join(stringify(item) for item in value)
    raise TypeError(f"not a runtime value: {value!r}")
