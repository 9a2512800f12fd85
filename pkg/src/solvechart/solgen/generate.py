"""Question to validated solution program.

Live generation gets exactly one repair retry: the re-prompt appends the
failure so the model can correct itself.  Cassette-backed generation is a
single deterministic lookup.  Every program returned here has passed parsing
and the answer-assignment check, so the engine never sees junk.
"""

from __future__ import annotations

from enum import Enum
from typing import Union

from ..agents.replay import Cassette
from ..dsl import ParseError, SolutionProgram, parse_program
from ..errors import SolveChartError
from .client import LlmConfig, LlmError, chat_completion
from .extract import ExtractionError, extract_program
from .prompt import PromptBundle, build_prompt

__all__ = ["GenerationError", "GenerationErrorKind", "generate_solution"]

_ANSWER_WARNING = "without assigning"


class GenerationErrorKind(Enum):
    TRANSPORT = "transport"
    INVALID_PROGRAM = "invalid-program"
    CASSETTE_MISS = "cassette-miss"


class GenerationError(SolveChartError):
    def __init__(self, kind: GenerationErrorKind, message: str) -> None:
        super().__init__(f"{kind.value}: {message}")
        self.kind = kind
        self.reason = message


def _try_accept(reply: str) -> tuple[SolutionProgram | None, str | None]:
    """Extracts, parses, and validates one reply; returns (program, fault)."""
    try:
        source = extract_program(reply)
        program = parse_program(source)
    except (ExtractionError, ParseError) as err:
        return None, str(err)
    for warning in program.warnings:
        if _ANSWER_WARNING in warning:
            return None, warning
    return program, None


def _repair_bundle(bundle: PromptBundle, reply: str, fault: str) -> PromptBundle:
    note = (
        f"{bundle.user}\n\nYour previous reply could not be used: {fault}.\n"
        "Reply again with one corrected program in a single fenced code block."
    )
    return PromptBundle(system=bundle.system, user=note)


def generate_solution(
    question: str,
    client: Union[LlmConfig, Cassette],
    *,
    chart_hints: str | None = None,
    chart_id: str = "",
    record_to: Cassette | None = None,
) -> SolutionProgram:
    """Produces a validated solution program for a question.

    Args:
        question: The chart question.
        client: Either a live model configuration or a recorded cassette of
            replies keyed by (chart_id, question).
        chart_hints: Optional chart context for the prompt.
        chart_id: Chart identity used for cassette keys.
        record_to: When generating live, record the accepted raw reply here
            so later runs can replay it.

    Raises:
        GenerationError: TRANSPORT when the endpoint cannot be reached,
            CASSETTE_MISS for unrecorded questions, INVALID_PROGRAM when no
            usable program emerges after the single repair retry.
    """
    if isinstance(client, Cassette):
        reply = client.lookup(chart_id, question)
        if reply is None:
            raise GenerationError(
                GenerationErrorKind.CASSETTE_MISS,
                f"no recorded reply for chart {chart_id!r}, question {question!r}",
            )
        program, fault = _try_accept(reply)
        if program is None:
            raise GenerationError(
                GenerationErrorKind.INVALID_PROGRAM, f"recorded reply unusable: {fault}"
            )
        return program

    bundle = build_prompt(question, chart_hints)
    fault = ""
    for attempt in range(2):
        try:
            reply = chat_completion(client, bundle)
        except LlmError as err:
            raise GenerationError(GenerationErrorKind.TRANSPORT, str(err)) from err
        program, fault = _try_accept(reply)
        if program is not None:
            if record_to is not None:
                record_to.append(chart_id, question, reply)
            return program
        if attempt == 0:
            bundle = _repair_bundle(bundle, reply, fault)
    raise GenerationError(
        GenerationErrorKind.INVALID_PROGRAM, f"no usable program after retry: {fault}"
    )
