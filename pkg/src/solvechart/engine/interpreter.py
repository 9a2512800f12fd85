"""Tree-walking interpreter with a complete execution trace.

Execution is deterministic given the agent's replies and always terminates:
the language has no loops, so each AST node is visited at most once.  The
trace records every assignment, branch decision, and agent exchange in
evaluation order.  With fallback enabled, any execution failure is converted
into a single direct ASK of the original question.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..agents.base import AgentError, AgentHandle, AgentQuery
from ..dsl.formatter import format_expression
from ..dsl.nodes import (
    ANSWER_VARIABLE,
    AGENT_CALLEES,
    Assignment,
    Binary,
    BoolLit,
    Call,
    Expression,
    Identifier,
    If,
    ListLit,
    NumberLit,
    SolutionProgram,
    Statement,
    StringLit,
    Unary,
)
from .values import EngineError, EngineErrorKind, Value, coerce_numeric, is_number, stringify

__all__ = [
    "AgentCallRecord",
    "EngineConfig",
    "ExecutionResult",
    "ExecutionTrace",
    "TraceStep",
    "execute",
    "eval_expr",
]


@dataclass(frozen=True)
class TraceStep:
    kind: str  # "agent_call" | "assignment" | "branch" | "fallback"
    detail: str
    value: Value | None = None


@dataclass(frozen=True)
class AgentCallRecord:
    operator: str
    question: str
    raw_answer: str


@dataclass
class ExecutionTrace:
    steps: list[TraceStep] = field(default_factory=list)
    agent_calls: list[AgentCallRecord] = field(default_factory=list)

    def to_json_dict(self) -> dict:
        return {
            "steps": [
                {"kind": step.kind, "detail": step.detail, "value": step.value}
                for step in self.steps
            ],
            "agent_calls": [
                {
                    "operator": call.operator,
                    "question": call.question,
                    "raw_answer": call.raw_answer,
                }
                for call in self.agent_calls
            ],
        }


@dataclass(frozen=True)
class EngineConfig:
    # fallback_to_ask turns any execution failure into one direct ASK of the
    # original question; it needs `question` to be set.
    fallback_to_ask: bool = False
    chart_id: str = ""
    question: str | None = None


@dataclass(frozen=True)
class ExecutionResult:
    answer: Value
    trace: ExecutionTrace
    fallback_used: bool = False


def _mismatch(op: str, *values: Value) -> EngineError:
    names = ", ".join(type(v).__name__ for v in values)
    return EngineError(EngineErrorKind.TYPE_MISMATCH, f"cannot apply {op!r} to {names}")


def _require_finite(value: float, op: str) -> float:
    if not math.isfinite(value):
        raise EngineError(EngineErrorKind.NON_FINITE, f"{op!r} produced a non-finite number")
    return value


def _values_equal(left: Value, right: Value) -> bool:
    if isinstance(left, bool) != isinstance(right, bool):
        raise _mismatch("==", left, right)
    if isinstance(left, bool):
        return left is right
    if is_number(left) and is_number(right):
        return left == right
    if isinstance(left, str) and isinstance(right, str):
        return left == right
    if isinstance(left, list) and isinstance(right, list):
        if len(left) != len(right):
            return False
        return all(_values_equal(a, b) for a, b in zip(left, right))
    raise _mismatch("==", left, right)


class _Evaluator:
    def __init__(self, agent: AgentHandle, config: EngineConfig, trace: ExecutionTrace) -> None:
        self.agent = agent
        self.config = config
        self.trace = trace

    # -- expressions --------------------------------------------------------

    def eval(self, expr: Expression, env: dict[str, Value]) -> Value:
        if isinstance(expr, NumberLit):
            return expr.value
        if isinstance(expr, StringLit):
            return expr.value
        if isinstance(expr, BoolLit):
            return expr.value
        if isinstance(expr, Identifier):
            if expr.name not in env:
                raise EngineError(EngineErrorKind.UNBOUND_VARIABLE, f"variable {expr.name!r} is not bound")
            return env[expr.name]
        if isinstance(expr, ListLit):
            return [self.eval(item, env) for item in expr.items]
        if isinstance(expr, Unary):
            return self._unary(expr, env)
        if isinstance(expr, Binary):
            return self._binary(expr, env)
        if isinstance(expr, Call):
            return self._call(expr, env)
        raise TypeError(f"not an expression node: {expr!r}")

    def _unary(self, expr: Unary, env: dict[str, Value]) -> Value:
        value = self.eval(expr.operand, env)
        if expr.op == "-":
            if not is_number(value):
                raise _mismatch("-", value)
            return _require_finite(-value, "-")
        if not isinstance(value, bool):
            raise _mismatch("not", value)
        return not value

    def _binary(self, expr: Binary, env: dict[str, Value]) -> Value:
        op = expr.op
        if op in ("and", "or"):
            left = self.eval(expr.left, env)
            if not isinstance(left, bool):
                raise _mismatch(op, left)
            # Short circuit: the right side is never evaluated when the left
            # side decides, so its agent calls are never issued.
            if op == "and" and not left:
                return False
            if op == "or" and left:
                return True
            right = self.eval(expr.right, env)
            if not isinstance(right, bool):
                raise _mismatch(op, right)
            return right
        left = self.eval(expr.left, env)
        right = self.eval(expr.right, env)
        if op == "+":
            return self._add(left, right)
        if op in ("-", "*", "/", "//", "%"):
            if not (is_number(left) and is_number(right)):
                raise _mismatch(op, left, right)
            if op in ("/", "//", "%") and right == 0.0:
                raise EngineError(EngineErrorKind.DIVISION_BY_ZERO, f"{op!r} by zero")
            if op == "-":
                result = left - right
            elif op == "*":
                result = left * right
            elif op == "/":
                result = left / right
            elif op == "//":
                result = left // right
            else:
                result = left % right
            return _require_finite(result, op)
        if op in ("==", "!="):
            equal = _values_equal(left, right)
            return equal if op == "==" else not equal
        if op in ("<", "<=", ">", ">="):
            both_numbers = is_number(left) and is_number(right)
            both_text = isinstance(left, str) and isinstance(right, str)
            if not (both_numbers or both_text):
                raise _mismatch(op, left, right)
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        raise TypeError(f"unknown operator {op!r}")

    def _add(self, left: Value, right: Value) -> Value:
        if is_number(left) and is_number(right):
            return _require_finite(left + right, "+")
        # Text concatenation coerces a numeric side to text so computed
        # values can be embedded in follow-up questions.
        if isinstance(left, str) and isinstance(right, str):
            return left + right
        if isinstance(left, str) and is_number(right):
            return left + stringify(right)
        if is_number(left) and isinstance(right, str):
            return stringify(left) + right
        raise _mismatch("+", left, right)

    def _call(self, expr: Call, env: dict[str, Value]) -> Value:
        if expr.callee in AGENT_CALLEES:
            return self._agent_call(expr, env)
        args = [self.eval(arg, env) for arg in expr.args]
        name = expr.callee
        if name == "abs":
            if not is_number(args[0]):
                raise _mismatch(name, args[0])
            return _require_finite(abs(args[0]), name)
        if name == "round":
            if not is_number(args[0]):
                raise _mismatch(name, args[0])
            return float(round(args[0]))
        if len(args) == 1:
            items = args[0]
            if not isinstance(items, list):
                raise _mismatch(name, items)
        else:
            items = args
        for item in items:
            if not is_number(item):
                raise _mismatch(name, item)
        if name == "sum":
            total = 0.0
            for item in items:
                total = _require_finite(total + item, name)
            return total
        if not items:
            raise EngineError(EngineErrorKind.TYPE_MISMATCH, f"{name} of an empty list")
        return max(items) if name == "max" else min(items)

    def _agent_call(self, expr: Call, env: dict[str, Value]) -> Value:
        question = self.eval(expr.args[0], env)
        if not isinstance(question, str):
            raise _mismatch(expr.callee, question)
        return self.ask_agent(expr.callee, question)

    def ask_agent(self, operator: str, question: str) -> Value:
        query = AgentQuery(question=question, chart_id=self.config.chart_id, operator=operator)
        try:
            reply = self.agent.answer(query)
        except AgentError as err:
            raise EngineError(EngineErrorKind.AGENT_FAILURE, f"{operator} failed: {err}") from err
        value = coerce_numeric(reply.answer)
        self.trace.agent_calls.append(AgentCallRecord(operator, question, reply.answer))
        self.trace.steps.append(TraceStep("agent_call", f'{operator}("{question}")', value))
        return value

    # -- statements ---------------------------------------------------------

    def run_block(self, statements: tuple[Statement, ...], env: dict[str, Value]) -> None:
        for stmt in statements:
            self.run_statement(stmt, env)

    def run_statement(self, stmt: Statement, env: dict[str, Value]) -> None:
        if isinstance(stmt, Assignment):
            value = self.eval(stmt.expr, env)
            env[stmt.target] = value
            self.trace.steps.append(TraceStep("assignment", stmt.target, value))
            return
        for index, (condition, body) in enumerate(stmt.branches):
            decision = self.eval(condition, env)
            if not isinstance(decision, bool):
                raise _mismatch("if", decision)
            label = "if" if index == 0 else "elif"
            if decision:
                self.trace.steps.append(
                    TraceStep("branch", f"{label} {format_expression(condition)} -> taken", True)
                )
                self.run_block(body, env)
                return
            self.trace.steps.append(
                TraceStep("branch", f"{label} {format_expression(condition)} -> skipped", False)
            )
        if stmt.else_body is not None:
            self.trace.steps.append(TraceStep("branch", "else -> taken", True))
            self.run_block(stmt.else_body, env)


def eval_expr(
    expr: Expression,
    env: dict[str, Value],
    agent: AgentHandle,
    trace: ExecutionTrace,
    *,
    chart_id: str = "",
) -> Value:
    """Evaluates one expression against an environment and an agent."""
    evaluator = _Evaluator(agent, EngineConfig(chart_id=chart_id), trace)
    return evaluator.eval(expr, env)


def execute(program: SolutionProgram, agent: AgentHandle, config: EngineConfig | None = None) -> ExecutionResult:
    """Runs a program to completion and returns its answer plus trace.

    Raises EngineError when execution fails and fallback is disabled.  With
    config.fallback_to_ask set, the failure is recorded in the trace and the
    original question is asked directly instead.
    """
    config = config or EngineConfig()
    trace = ExecutionTrace()
    evaluator = _Evaluator(agent, config, trace)
    env: dict[str, Value] = {}
    try:
        evaluator.run_block(program.statements, env)
        if ANSWER_VARIABLE not in env:
            raise EngineError(
                EngineErrorKind.ANSWER_UNASSIGNED,
                f"program finished without assigning '{ANSWER_VARIABLE}'",
            )
        return ExecutionResult(env[ANSWER_VARIABLE], trace, fallback_used=False)
    except EngineError as err:
        if not config.fallback_to_ask or config.question is None:
            raise
        trace.steps.append(TraceStep("fallback", f"execution failed ({err}); asking directly", None))
        answer = evaluator.ask_agent("ASK", config.question)
        return ExecutionResult(answer, trace, fallback_used=True)
