"""AST node types for solution programs.

All nodes are frozen dataclasses holding tuples, so structural equality is
dataclass equality and parsed programs are safe to share.  A program's
source_hash and warnings are bookkeeping, not structure, and are excluded
from comparison: two programs are equal iff their statements are.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Union

__all__ = [
    "AGENT_CALLEES",
    "CALLEES",
    "Assignment",
    "Binary",
    "BoolLit",
    "Call",
    "Expression",
    "Identifier",
    "If",
    "ListLit",
    "NumberLit",
    "SolutionProgram",
    "Statement",
    "StringLit",
    "Unary",
    "count_nodes",
    "iter_expressions",
]

# The callable surface is closed: two agent operators plus five builtins.
AGENT_CALLEES = frozenset({"ASK", "SUBSTEP"})
BUILTIN_CALLEES = frozenset({"abs", "min", "max", "sum", "round"})
CALLEES = AGENT_CALLEES | BUILTIN_CALLEES

ANSWER_VARIABLE = "answer"


@dataclass(frozen=True)
class NumberLit:
    value: float


@dataclass(frozen=True)
class StringLit:
    value: str


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Identifier:
    name: str


@dataclass(frozen=True)
class Unary:
    op: str  # "-" or "not"
    operand: "Expression"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class ListLit:
    items: tuple["Expression", ...]


@dataclass(frozen=True)
class Call:
    callee: str
    args: tuple["Expression", ...]


Expression = Union[NumberLit, StringLit, BoolLit, Identifier, Unary, Binary, ListLit, Call]


@dataclass(frozen=True)
class Assignment:
    target: str
    expr: Expression


@dataclass(frozen=True)
class If:
    # One entry per if/elif arm; arms and bodies are never empty.
    branches: tuple[tuple[Expression, tuple["Statement", ...]], ...]
    else_body: tuple["Statement", ...] | None = None


Statement = Union[Assignment, If]


@dataclass(frozen=True)
class SolutionProgram:
    statements: tuple[Statement, ...]
    source_hash: str = field(default="", compare=False)
    warnings: tuple[str, ...] = field(default=(), compare=False)


def iter_expressions(root: Expression) -> Iterator[Expression]:
    """Yields root and every expression nested under it, preorder."""
    yield root
    if isinstance(root, Unary):
        yield from iter_expressions(root.operand)
    elif isinstance(root, Binary):
        yield from iter_expressions(root.left)
        yield from iter_expressions(root.right)
    elif isinstance(root, (ListLit, Call)):
        for item in (root.items if isinstance(root, ListLit) else root.args):
            yield from iter_expressions(item)


def _count_statement(stmt: Statement) -> int:
    if isinstance(stmt, Assignment):
        return 1 + sum(1 for _ in iter_expressions(stmt.expr))
    total = 1
    for condition, body in stmt.branches:
        total += sum(1 for _ in iter_expressions(condition))
        total += sum(_count_statement(child) for child in body)
    if stmt.else_body is not None:
        total += sum(_count_statement(child) for child in stmt.else_body)
    return total


def count_nodes(program: SolutionProgram) -> int:
    """Counts statements plus expression nodes, for execution-bound checks."""
    return sum(_count_statement(stmt) for stmt in program.statements)
