"""Engine behavior against the independent naive reference evaluator."""

from __future__ import annotations

import random

import pytest

from gen_programs import AGENT_ANSWERS, random_program
from reference_interp import ref_execute, values_identical
from solvechart.agents.base import AgentAnswer, AgentError, AgentErrorKind
from solvechart.dsl.nodes import count_nodes
from solvechart.engine.interpreter import EngineConfig, execute
from solvechart.engine.values import EngineError


class StubAgent:
    def answer(self, query):
        if query.question not in AGENT_ANSWERS:
            raise AgentError(AgentErrorKind.UNANSWERABLE, "unknown question")
        return AgentAnswer(AGENT_ANSWERS[query.question], 0.0, "stub")


AGENT = StubAgent()


def engine_outcome(program):
    try:
        result = execute(program, AGENT, EngineConfig())
    except EngineError as err:
        return ("error", err.kind.name), None
    calls = [(c.operator, c.question, c.raw_answer) for c in result.trace.agent_calls]
    return ("value", result.answer), calls


@pytest.mark.parametrize("seed", range(300))
def test_engine_matches_reference(seed: int):
    program = random_program(random.Random(seed))
    (ref_kind, ref_payload), ref_calls = ref_execute(program, AGENT_ANSWERS)
    engine_result, engine_calls = engine_outcome(program)
    if ref_kind == "error":
        assert engine_result == ("error", ref_payload)
    else:
        assert engine_result[0] == "value"
        assert values_identical(engine_result[1], ref_payload)
        assert engine_calls == ref_calls


@pytest.mark.parametrize("seed", range(2000, 2100))
def test_step_count_bounded_by_ast_size(seed: int):
    program = random_program(random.Random(seed))
    try:
        result = execute(program, AGENT, EngineConfig())
    except EngineError:
        return
    assert len(result.trace.steps) <= 2 * count_nodes(program)
