"""Evaluation harness.

Runs a dataset through one of two modes:

* ``agent_only``: each question goes straight to the chart agent as a single
  ASK; the reply is the prediction.
* ``programmatic``: a solution program is produced for the question (live
  model or replay cassette), then executed against the chart agent; the
  stringified result is the prediction.

Per-item failures are recorded as incorrect with a reason instead of
aborting the run. Reports serialize with sorted keys and a fixed config
snapshot so that two runs over the same inputs produce byte-identical JSON.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Union

from ..agents.base import AgentHandle, AgentQuery
from ..agents.replay import Cassette
from ..engine.interpreter import EngineConfig, execute
from ..engine.values import stringify
from ..errors import SolveChartError
from ..solgen.client import LlmConfig
from ..solgen.generate import generate_solution
from .dataset import EvalItem
from .metrics import DEFAULT_TOLERANCE, relaxed_match

MODES = ("agent_only", "programmatic")

AgentFactory = Callable[[EvalItem], AgentHandle]
LlmSource = Union[LlmConfig, Cassette]


@dataclass(frozen=True, slots=True)
class EvalConfig:
    """Settings for one evaluation run."""

    mode: str
    agent_factory: AgentFactory = field(repr=False)
    llm_client: LlmSource | None = None
    fallback_to_ask: bool = True
    workers: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    trace_dir: str | None = None

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "programmatic" and self.llm_client is None:
            raise ValueError("programmatic mode requires an llm_client")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def snapshot(self) -> dict:
        """The subset of settings recorded in reports.

        Deliberately excludes backend descriptors and anything run-dependent
        so replayed runs stay byte-identical.
        """
        return {
            "mode": self.mode,
            "workers": self.workers,
            "tolerance": self.tolerance,
            "fallback_to_ask": self.fallback_to_ask,
        }


@dataclass(frozen=True, slots=True)
class ItemResult:
    """Outcome for a single dataset item."""

    id: str
    prediction: str | None
    correct: bool
    mode: str
    fallback_used: bool = False
    trace_path: str | None = None
    reason: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "id": self.id,
            "prediction": self.prediction,
            "correct": self.correct,
            "mode": self.mode,
            "fallback_used": self.fallback_used,
            "trace_path": self.trace_path,
            "reason": self.reason,
        }


@dataclass(frozen=True, slots=True)
class EvalReport:
    """Results for a full run."""

    items: tuple[ItemResult, ...]
    accuracy: float
    config: dict
    empty_dataset: bool = False

    def to_json_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "config": self.config,
            "empty_dataset": self.empty_dataset,
            "items": [item.to_json_dict() for item in self.items],
        }

    def to_json_text(self) -> str:
        return json.dumps(self.to_json_dict(), indent=2, sort_keys=True) + "\n"


def _chart_hints(item: EvalItem) -> str | None:
    if item.table_path is None:
        return None
    from ..agents.table import load_table

    table = load_table(item.table_path)
    names = ", ".join(table.series_names())
    return f"{table.title}; series: {names}"


def _evaluate_item(item: EvalItem, config: EvalConfig) -> ItemResult:
    try:
        agent = config.agent_factory(item)
        if config.mode == "agent_only":
            reply = agent.answer(AgentQuery(item.question, item.chart_id, "ASK"))
            prediction = reply.answer
            fallback_used = False
            trace_path = None
        else:
            assert config.llm_client is not None
            program = generate_solution(
                item.question,
                config.llm_client,
                chart_hints=_chart_hints(item),
                chart_id=item.chart_id,
            )
            result = execute(
                program,
                agent,
                EngineConfig(
                    fallback_to_ask=config.fallback_to_ask,
                    chart_id=item.chart_id,
                    question=item.question,
                ),
            )
            prediction = stringify(result.answer)
            fallback_used = result.fallback_used
            trace_path = None
            if config.trace_dir is not None:
                out = Path(config.trace_dir) / f"{item.id}.json"
                out.parent.mkdir(parents=True, exist_ok=True)
                out.write_text(
                    json.dumps(result.trace.to_json_dict(), indent=2, sort_keys=True) + "\n",
                    encoding="utf-8",
                )
                trace_path = str(out)
        correct = relaxed_match(prediction, item.gold, config.tolerance)
        return ItemResult(
            id=item.id,
            prediction=prediction,
            correct=correct,
            mode=config.mode,
            fallback_used=fallback_used,
            trace_path=trace_path,
        )
    except SolveChartError as exc:
        return ItemResult(
            id=item.id,
            prediction=None,
            correct=False,
            mode=config.mode,
            reason=str(exc),
        )


def run_eval(items: list[EvalItem], config: EvalConfig) -> EvalReport:
    """Evaluate every item and assemble a report in dataset order."""
    if not items:
        return EvalReport(items=(), accuracy=0.0, config=config.snapshot(), empty_dataset=True)
    if config.workers == 1:
        results = [_evaluate_item(item, config) for item in items]
    else:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(lambda it: _evaluate_item(it, config), items))
    accuracy = sum(1 for r in results if r.correct) / len(results)
    return EvalReport(
        items=tuple(results),
        accuracy=accuracy,
        config=config.snapshot(),
    )
