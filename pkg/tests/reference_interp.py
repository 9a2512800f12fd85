"""Independent brute-force reference evaluator used as the engine oracle.

Deliberately written from the language rules, not from the engine source:
naive recursion, its own coercion and rendering helpers, and string error
kinds. The only shared artifact is the AST node classes, which are plain
data. Results are ("value", v) or ("error", kind-name) plus the ordered
list of agent exchanges.
"""

from __future__ import annotations

import math
import re

from solvechart.dsl.nodes import (
    Assignment,
    Binary,
    BoolLit,
    Call,
    Identifier,
    If,
    ListLit,
    NumberLit,
    StringLit,
    Unary,
)


class RefError(Exception):
    def __init__(self, kind: str) -> None:
        super().__init__(kind)
        self.kind = kind


_NUM_RE = re.compile(r"[+-]?(?:[0-9]+(?:\.[0-9]*)?|\.[0-9]+)")


def ref_coerce(raw: str):
    text = raw.strip()
    body = text
    if body.endswith("%"):
        body = body[:-1].strip()
    body = body.replace(",", "")
    if _NUM_RE.fullmatch(body):
        parsed = float(body)
        if math.isfinite(parsed):
            return parsed
    return text


def ref_stringify(value) -> str:
    if value is True:
        return "Yes"
    if value is False:
        return "No"
    if isinstance(value, float):
        if value == int(value) and abs(value) < 1e16:
            return str(int(value))
        text = f"{value:.6f}"
        while text.endswith("0"):
            text = text[:-1]
        if text.endswith("."):
            text = text[:-1]
        if text in ("", "-", "-0"):
            return "0"
        return text
    if isinstance(value, str):
        return value
    if isinstance(value, list):
        return ", ".join(ref_stringify(item) for item in value)
    raise TypeError(value)


def _num(value) -> bool:
    return isinstance(value, float) and not isinstance(value, bool)


def _finite(value: float) -> float:
    if not math.isfinite(value):
        raise RefError("NON_FINITE")
    return value


def _eq(a, b) -> bool:
    if isinstance(a, bool) != isinstance(b, bool):
        raise RefError("TYPE_MISMATCH")
    if isinstance(a, bool):
        return a is b
    if _num(a) and _num(b):
        return a == b
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        if len(a) != len(b):
            return False
        return all(_eq(x, y) for x, y in zip(a, b))
    raise RefError("TYPE_MISMATCH")


class _Ref:
    def __init__(self, answers, calls):
        self.answers = answers
        self.calls = calls

    def expr(self, node, env):
        if isinstance(node, NumberLit):
            return node.value
        if isinstance(node, StringLit):
            return node.value
        if isinstance(node, BoolLit):
            return node.value
        if isinstance(node, Identifier):
            if node.name in env:
                return env[node.name]
            raise RefError("UNBOUND_VARIABLE")
        if isinstance(node, ListLit):
            return [self.expr(item, env) for item in node.items]
        if isinstance(node, Unary):
            inner = self.expr(node.operand, env)
            if node.op == "-":
                if not _num(inner):
                    raise RefError("TYPE_MISMATCH")
                return _finite(-inner)
            if not isinstance(inner, bool):
                raise RefError("TYPE_MISMATCH")
            return not inner
        if isinstance(node, Binary):
            return self.binary(node, env)
        if isinstance(node, Call):
            return self.call(node, env)
        raise TypeError(node)

    def binary(self, node, env):
        op = node.op
        if op in ("and", "or"):
            left = self.expr(node.left, env)
            if not isinstance(left, bool):
                raise RefError("TYPE_MISMATCH")
            if op == "and" and left is False:
                return False
            if op == "or" and left is True:
                return True
            right = self.expr(node.right, env)
            if not isinstance(right, bool):
                raise RefError("TYPE_MISMATCH")
            return right
        left = self.expr(node.left, env)
        right = self.expr(node.right, env)
        if op == "+":
            if _num(left) and _num(right):
                return _finite(left + right)
            if isinstance(left, str) and isinstance(right, str):
                return left + right
            if isinstance(left, str) and _num(right):
                return left + ref_stringify(right)
            if _num(left) and isinstance(right, str):
                return ref_stringify(left) + right
            raise RefError("TYPE_MISMATCH")
        if op in ("-", "*", "/", "//", "%"):
            if not (_num(left) and _num(right)):
                raise RefError("TYPE_MISMATCH")
            if op in ("/", "//", "%") and right == 0.0:
                raise RefError("DIVISION_BY_ZERO")
            table = {
                "-": lambda: left - right,
                "*": lambda: left * right,
                "/": lambda: left / right,
                "//": lambda: left // right,
                "%": lambda: left % right,
            }
            return _finite(table[op]())
        if op == "==":
            return _eq(left, right)
        if op == "!=":
            return not _eq(left, right)
        if op in ("<", "<=", ">", ">="):
            ok = (_num(left) and _num(right)) or (
                isinstance(left, str) and isinstance(right, str)
            )
            if not ok:
                raise RefError("TYPE_MISMATCH")
            if op == "<":
                return left < right
            if op == "<=":
                return left <= right
            if op == ">":
                return left > right
            return left >= right
        raise TypeError(op)

    def call(self, node, env):
        name = node.callee
        if name in ("ASK", "SUBSTEP"):
            question = self.expr(node.args[0], env)
            if not isinstance(question, str):
                raise RefError("TYPE_MISMATCH")
            if question not in self.answers:
                raise RefError("AGENT_FAILURE")
            raw = self.answers[question]
            self.calls.append((name, question, raw))
            return ref_coerce(raw)
        values = [self.expr(arg, env) for arg in node.args]
        if name == "abs":
            if not _num(values[0]):
                raise RefError("TYPE_MISMATCH")
            return _finite(abs(values[0]))
        if name == "round":
            if not _num(values[0]):
                raise RefError("TYPE_MISMATCH")
            return float(round(values[0]))
        if len(values) == 1:
            if not isinstance(values[0], list):
                raise RefError("TYPE_MISMATCH")
            values = values[0]
        for item in values:
            if not _num(item):
                raise RefError("TYPE_MISMATCH")
        if name == "sum":
            total = 0.0
            for item in values:
                total = _finite(total + item)
            return total
        if not values:
            raise RefError("TYPE_MISMATCH")
        return max(values) if name == "max" else min(values)

    def stmt(self, node, env):
        if isinstance(node, Assignment):
            env[node.target] = self.expr(node.expr, env)
            return
        assert isinstance(node, If)
        for condition, body in node.branches:
            decision = self.expr(condition, env)
            if not isinstance(decision, bool):
                raise RefError("TYPE_MISMATCH")
            if decision:
                for inner in body:
                    self.stmt(inner, env)
                return
        if node.else_body is not None:
            for inner in node.else_body:
                self.stmt(inner, env)


def ref_execute(program, answers: dict[str, str]):
    """Runs a program against a question->reply table.

    Returns ((\"value\", v) | (\"error\", kind), calls) where calls is the
    ordered list of (operator, question, raw_answer) triples.
    """
    calls: list[tuple[str, str, str]] = []
    machine = _Ref(answers, calls)
    env: dict = {}
    try:
        for stmt in program.statements:
            machine.stmt(stmt, env)
        if "answer" not in env:
            return ("error", "ANSWER_UNASSIGNED"), calls
        return ("value", env["answer"]), calls
    except RefError as err:
        return ("error", err.kind), calls


def values_identical(a, b) -> bool:
    """Exact runtime-value equality, type-strict, bitwise on numbers."""
    if isinstance(a, bool) or isinstance(b, bool):
        return a is b
    if isinstance(a, float) and isinstance(b, float):
        return a == b and math.copysign(1.0, a) == math.copysign(1.0, b)
    if isinstance(a, str) and isinstance(b, str):
        return a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(values_identical(x, y) for x, y in zip(a, b))
    return False
