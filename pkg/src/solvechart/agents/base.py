"""Agent query/answer types and the backend protocol.

ASK and SUBSTEP are metadata on the query: every backend must answer both
through the same lookup path, so routing never depends on the operator.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Protocol

from ..errors import SolveChartError

__all__ = ["AgentAnswer", "AgentError", "AgentErrorKind", "AgentHandle", "AgentQuery"]

OPERATORS = frozenset({"ASK", "SUBSTEP"})


class AgentErrorKind(Enum):
    UNANSWERABLE = "unanswerable"
    TRANSPORT = "transport"
    TIMEOUT = "timeout"
    BAD_RESPONSE = "bad-response"
    CASSETTE_MISS = "cassette-miss"


class AgentError(SolveChartError):
    """Raised when a backend cannot produce an answer."""

    def __init__(self, kind: AgentErrorKind, message: str) -> None:
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.reason = message


@dataclass(frozen=True)
class AgentQuery:
    question: str
    chart_id: str
    operator: str  # "ASK" or "SUBSTEP"

    def __post_init__(self) -> None:
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}")
        if not self.question.strip():
            raise ValueError("question must be non-empty")


@dataclass(frozen=True)
class AgentAnswer:
    answer: str
    latency_ms: float
    backend: str

    def __post_init__(self) -> None:
        if self.latency_ms < 0:
            raise ValueError("latency_ms must be non-negative")


class AgentHandle(Protocol):
    def answer(self, query: AgentQuery) -> AgentAnswer: ...
