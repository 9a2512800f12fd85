"""Deterministic interpreter for solution programs."""

from __future__ import annotations

from .interpreter import (
    AgentCallRecord,
    EngineConfig,
    ExecutionResult,
    ExecutionTrace,
    TraceStep,
    eval_expr,
    execute,
)
from .values import EngineError, EngineErrorKind, Value, coerce_numeric, stringify

__all__ = [
    "AgentCallRecord",
    "EngineConfig",
    "EngineError",
    "EngineErrorKind",
    "ExecutionResult",
    "ExecutionTrace",
    "TraceStep",
    "Value",
    "coerce_numeric",
    "eval_expr",
    "execute",
    "stringify",
]
