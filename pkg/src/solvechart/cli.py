"""Command-line interface.

Subcommands:

* ``parse``: read a solution program, print its canonical form.
* ``run``: execute a program file against a chart agent.
* ``solve``: produce a program for a question (live model or replay
  cassette), execute it, print the answer.
* ``align-demo``: run the visual alignment pipeline on synthetic patches
  and print the bundle plus an invariant report as JSON.
* ``eval``: run a dataset through the harness and print the report.

stdout carries machine-readable output only (answers, canonical programs,
JSON documents); all diagnostics go to stderr. Exit codes: 0 success,
1 domain failure, 2 usage error (from argparse).

A JSON config file (``--config``) may supply defaults for most options;
explicit flags win over the file, the file wins over built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .agents.base import AgentHandle, AgentQuery
from .agents.http import HttpAgent
from .agents.oracle import OracleAgent
from .agents.replay import Cassette, ReplayAgent
from .agents.table import load_table
from .align.cluster import DEFAULT_K_MAX, DEFAULT_LINKAGE_THRESHOLD
from .align.invariants import check_bundle
from .align.pipeline import PipelineConfig, run_alignment_pipeline
from .align.synthetic import make_grid, make_params, make_query
from .dsl.formatter import format_program
from .dsl.parser import parse_program
from .engine.interpreter import EngineConfig, execute
from .engine.values import stringify
from .errors import SolveChartError
from .evaluation.dataset import EvalItem, load_dataset
from .evaluation.harness import EvalConfig, run_eval
from .evaluation.metrics import DEFAULT_TOLERANCE
from .solgen.client import LlmConfig
from .solgen.generate import generate_solution


class CliError(SolveChartError):
    """A command cannot proceed with the given arguments."""


_UNSET = object()


@dataclass(frozen=True, slots=True)
class ParseCommand:
    path: str


@dataclass(frozen=True, slots=True)
class RunCommand:
    program: str
    agent: str
    table: str | None = None
    record: str | None = None
    trace: str | None = None
    chart_id: str = ""
    question: str | None = None
    fallback: bool = False


@dataclass(frozen=True, slots=True)
class SolveCommand:
    question: str
    agent: str = "oracle"
    table: str | None = None
    llm: str | None = None
    llm_replay: str | None = None
    llm_record: str | None = None
    mode: str = "programmatic"
    chart_id: str = ""
    fallback: bool = True
    show_program: bool = False
    trace: str | None = None


@dataclass(frozen=True, slots=True)
class AlignDemoCommand:
    grid: str = "4x4"
    dim: int = 16
    seed: int = 0
    layers: int = 2
    top_k: int = 5
    linkage_threshold: float = DEFAULT_LINKAGE_THRESHOLD
    k_max: int = DEFAULT_K_MAX
    proximity_radius: float = 3.0
    disable_vp_alignment: bool = False
    disable_intra: bool = False
    disable_cross: bool = False


@dataclass(frozen=True, slots=True)
class EvalCommand:
    dataset: str
    mode: str = "programmatic"
    agent: str = "oracle"
    llm: str | None = None
    llm_replay: str | None = None
    workers: int = 1
    tolerance: float = DEFAULT_TOLERANCE
    fallback: bool = True
    output: str | None = None
    trace_dir: str | None = None


Command = ParseCommand | RunCommand | SolveCommand | AlignDemoCommand | EvalCommand


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise CliError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config file is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise CliError("config file must contain a JSON object")
    return data


def _resolve(args: argparse.Namespace, config: dict, name: str, builtin: Any) -> Any:
    value = getattr(args, name)
    if value is not _UNSET:
        return value
    if name in config:
        return config[name]
    return builtin


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--config",
        default=None,
        metavar="PATH",
        help="JSON file supplying defaults for this command's options",
    )


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="solvechart",
        description="Solution-program tooling for chart question answering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_parse = sub.add_parser("parse", help="canonicalize a solution program")
    p_parse.add_argument("path", help="program file, or '-' for stdin")
    _add_common(p_parse)

    p_run = sub.add_parser("run", help="execute a solution program")
    p_run.add_argument("--program", required=True, help="program file, or '-' for stdin")
    p_run.add_argument("--agent", default=_UNSET, help="oracle, http(s)://URL, or replay:PATH")
    p_run.add_argument("--table", default=_UNSET, help="chart table JSON (for the oracle agent)")
    p_run.add_argument("--record", default=_UNSET, metavar="PATH", help="record agent replies to a cassette")
    p_run.add_argument("--trace", default=_UNSET, metavar="PATH", help="write the execution trace as JSON")
    p_run.add_argument("--chart-id", default=_UNSET, help="chart identifier passed to the agent")
    p_run.add_argument("--question", default=_UNSET, help="original question (used by the single-ASK fallback)")
    p_run.add_argument("--fallback", action=argparse.BooleanOptionalAction, default=_UNSET,
                       help="on failure, fall back to one direct ASK (default: off)")
    _add_common(p_run)

    p_solve = sub.add_parser("solve", help="answer a question end to end")
    p_solve.add_argument("--question", required=True)
    p_solve.add_argument("--agent", default=_UNSET, help="oracle, http(s)://URL, or replay:PATH")
    p_solve.add_argument("--table", default=_UNSET, help="chart table JSON (for the oracle agent)")
    p_solve.add_argument("--llm", default=_UNSET, metavar="URL", help="chat-completions endpoint")
    p_solve.add_argument("--llm-replay", default=_UNSET, metavar="PATH", help="cassette of recorded model replies")
    p_solve.add_argument("--llm-record", default=_UNSET, metavar="PATH", help="record live model replies to a cassette")
    p_solve.add_argument("--mode", default=_UNSET, choices=["programmatic", "agent-only"])
    p_solve.add_argument("--chart-id", default=_UNSET)
    p_solve.add_argument("--fallback", action=argparse.BooleanOptionalAction, default=_UNSET,
                         help="on failure, fall back to one direct ASK (default: on)")
    p_solve.add_argument("--show-program", action="store_true", default=_UNSET,
                         help="print the canonical program to stderr")
    p_solve.add_argument("--trace", default=_UNSET, metavar="PATH", help="write the execution trace as JSON")
    _add_common(p_solve)

    p_align = sub.add_parser("align-demo", help="run the alignment pipeline on synthetic patches")
    p_align.add_argument("--grid", default=_UNSET, metavar="RxC", help="patch grid shape, e.g. 4x4")
    p_align.add_argument("--dim", type=int, default=_UNSET)
    p_align.add_argument("--seed", type=int, default=_UNSET)
    p_align.add_argument("--layers", type=int, default=_UNSET)
    p_align.add_argument("--top-k", type=int, default=_UNSET)
    p_align.add_argument("--linkage-threshold", type=float, default=_UNSET)
    p_align.add_argument("--k-max", type=int, default=_UNSET)
    p_align.add_argument("--proximity-radius", type=float, default=_UNSET)
    p_align.add_argument("--disable-vp-alignment", action="store_true", default=_UNSET,
                         help="replace the alignment matrix with seeded noise")
    p_align.add_argument("--disable-intra", action="store_true", default=_UNSET,
                         help="skip intra-cluster reasoning")
    p_align.add_argument("--disable-cross", action="store_true", default=_UNSET,
                         help="skip cross-cluster annotation")
    _add_common(p_align)

    p_eval = sub.add_parser("eval", help="evaluate a dataset")
    p_eval.add_argument("--dataset", required=True, help="JSONL dataset file")
    p_eval.add_argument("--mode", default=_UNSET, choices=["programmatic", "agent-only"])
    p_eval.add_argument("--agent", default=_UNSET, help="oracle, http(s)://URL, or replay:PATH")
    p_eval.add_argument("--llm", default=_UNSET, metavar="URL")
    p_eval.add_argument("--replay", "--llm-replay", dest="llm_replay", default=_UNSET,
                        metavar="PATH", help="cassette of recorded model replies")
    p_eval.add_argument("--workers", type=int, default=_UNSET)
    p_eval.add_argument("--tolerance", type=float, default=_UNSET)
    p_eval.add_argument("--fallback", action=argparse.BooleanOptionalAction, default=_UNSET,
                        help="fall back to one direct ASK on program failure (default: on)")
    p_eval.add_argument("--output", default=_UNSET, metavar="PATH", help="also write the report JSON here")
    p_eval.add_argument("--trace-dir", default=_UNSET, metavar="DIR", help="write per-item traces here")
    _add_common(p_eval)

    return parser


def parse_args(argv: list[str]) -> Command:
    """Parse argv into a command value. argparse exits with status 2 on usage errors."""
    parser = build_arg_parser()
    args = parser.parse_args(argv)
    config = _load_config(args.config)

    if args.command == "parse":
        return ParseCommand(path=args.path)
    if args.command == "run":
        return RunCommand(
            program=args.program,
            agent=_resolve(args, config, "agent", "oracle"),
            table=_resolve(args, config, "table", None),
            record=_resolve(args, config, "record", None),
            trace=_resolve(args, config, "trace", None),
            chart_id=_resolve(args, config, "chart_id", ""),
            question=_resolve(args, config, "question", None),
            fallback=bool(_resolve(args, config, "fallback", False)),
        )
    if args.command == "solve":
        return SolveCommand(
            question=args.question,
            agent=_resolve(args, config, "agent", "oracle"),
            table=_resolve(args, config, "table", None),
            llm=_resolve(args, config, "llm", None),
            llm_replay=_resolve(args, config, "llm_replay", None),
            llm_record=_resolve(args, config, "llm_record", None),
            mode=_resolve(args, config, "mode", "programmatic"),
            chart_id=_resolve(args, config, "chart_id", ""),
            fallback=bool(_resolve(args, config, "fallback", True)),
            show_program=bool(_resolve(args, config, "show_program", False)),
            trace=_resolve(args, config, "trace", None),
        )
    if args.command == "align-demo":
        return AlignDemoCommand(
            grid=_resolve(args, config, "grid", "4x4"),
            dim=int(_resolve(args, config, "dim", 16)),
            seed=int(_resolve(args, config, "seed", 0)),
            layers=int(_resolve(args, config, "layers", 2)),
            top_k=int(_resolve(args, config, "top_k", 5)),
            linkage_threshold=float(
                _resolve(args, config, "linkage_threshold", DEFAULT_LINKAGE_THRESHOLD)
            ),
            k_max=int(_resolve(args, config, "k_max", DEFAULT_K_MAX)),
            proximity_radius=float(_resolve(args, config, "proximity_radius", 3.0)),
            disable_vp_alignment=bool(_resolve(args, config, "disable_vp_alignment", False)),
            disable_intra=bool(_resolve(args, config, "disable_intra", False)),
            disable_cross=bool(_resolve(args, config, "disable_cross", False)),
        )
    if args.command == "eval":
        return EvalCommand(
            dataset=args.dataset,
            mode=_resolve(args, config, "mode", "programmatic"),
            agent=_resolve(args, config, "agent", "oracle"),
            llm=_resolve(args, config, "llm", None),
            llm_replay=_resolve(args, config, "llm_replay", None),
            workers=int(_resolve(args, config, "workers", 1)),
            tolerance=float(_resolve(args, config, "tolerance", DEFAULT_TOLERANCE)),
            fallback=bool(_resolve(args, config, "fallback", True)),
            output=_resolve(args, config, "output", None),
            trace_dir=_resolve(args, config, "trace_dir", None),
        )
    raise CliError(f"unknown command {args.command!r}")


def _read_source(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read program: {exc}") from exc


def _build_agent(spec: str, table: str | None, record: str | None) -> AgentHandle:
    if spec == "oracle":
        if table is None:
            raise CliError("--agent oracle requires --table")
        base: AgentHandle = OracleAgent(load_table(table))
    elif spec.startswith(("http://", "https://")):
        base = HttpAgent(spec)
    elif spec.startswith("replay:"):
        cassette_path = spec[len("replay:"):]
        agent = ReplayAgent(Cassette.load(cassette_path))
        if record is not None:
            raise CliError("cannot record from a replay agent")
        return agent
    else:
        raise CliError(f"unknown agent {spec!r}; use oracle, http(s)://URL, or replay:PATH")
    if record is not None:
        record_path = Path(record)
        cassette = Cassette.load(record_path) if record_path.exists() else Cassette.empty(record_path)
        return ReplayAgent(cassette, live=base)
    return base


def _build_llm(llm: str | None, llm_replay: str | None) -> LlmConfig | Cassette:
    if (llm is None) == (llm_replay is None):
        raise CliError("provide exactly one of --llm or --llm-replay")
    if llm is not None:
        return LlmConfig(endpoint=llm)
    return Cassette.load(llm_replay)


def _write_trace(path: str, trace_dict: dict) -> None:
    Path(path).write_text(
        json.dumps(trace_dict, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _cmd_parse(cmd: ParseCommand) -> int:
    program = parse_program(_read_source(cmd.path))
    sys.stdout.write(format_program(program))
    for warning in program.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def _cmd_run(cmd: RunCommand) -> int:
    program = parse_program(_read_source(cmd.program))
    agent = _build_agent(cmd.agent, cmd.table, cmd.record)
    result = execute(
        program,
        agent,
        EngineConfig(
            fallback_to_ask=cmd.fallback,
            chart_id=cmd.chart_id,
            question=cmd.question,
        ),
    )
    if cmd.trace is not None:
        _write_trace(cmd.trace, result.trace.to_json_dict())
    print(stringify(result.answer))
    return 0


def _cmd_solve(cmd: SolveCommand) -> int:
    agent = _build_agent(cmd.agent, cmd.table, None)
    if cmd.mode == "agent-only":
        reply = agent.answer(AgentQuery(cmd.question, cmd.chart_id, "ASK"))
        print(reply.answer)
        return 0
    llm = _build_llm(cmd.llm, cmd.llm_replay)
    record_to = None
    if cmd.llm_record is not None:
        if cmd.llm is None:
            raise CliError("--llm-record requires --llm")
        record_path = Path(cmd.llm_record)
        record_to = Cassette.load(record_path) if record_path.exists() else Cassette.empty(record_path)
    hints = None
    if cmd.table is not None:
        chart = load_table(cmd.table)
        hints = f"{chart.title}; series: {', '.join(chart.series_names())}"
    program = generate_solution(
        cmd.question, llm, chart_hints=hints, chart_id=cmd.chart_id, record_to=record_to
    )
    if cmd.show_program:
        sys.stderr.write(format_program(program))
    result = execute(
        program,
        agent,
        EngineConfig(
            fallback_to_ask=cmd.fallback,
            chart_id=cmd.chart_id,
            question=cmd.question,
        ),
    )
    if cmd.trace is not None:
        _write_trace(cmd.trace, result.trace.to_json_dict())
    print(stringify(result.answer))
    return 0


def _parse_grid(spec: str) -> tuple[int, int]:
    parts = spec.lower().split("x")
    if len(parts) != 2:
        raise CliError(f"--grid must look like RxC, got {spec!r}")
    try:
        rows, cols = int(parts[0]), int(parts[1])
    except ValueError as exc:
        raise CliError(f"--grid must look like RxC, got {spec!r}") from exc
    if rows < 1 or cols < 1:
        raise CliError("--grid dimensions must be positive")
    return rows, cols


def _cmd_align_demo(cmd: AlignDemoCommand) -> int:
    rows, cols = _parse_grid(cmd.grid)
    grid = make_grid(rows, cols, cmd.dim, seed=cmd.seed)
    query = make_query(cmd.dim, seed=cmd.seed)
    params = make_params(cmd.dim, seed=cmd.seed, layers=cmd.layers, top_k=cmd.top_k)
    pipeline_config = PipelineConfig(
        linkage_threshold=cmd.linkage_threshold,
        k_max=cmd.k_max,
        proximity_radius=cmd.proximity_radius,
        disable_alignment=cmd.disable_vp_alignment,
        disable_intra=cmd.disable_intra,
        disable_cross=cmd.disable_cross,
        noise_seed=cmd.seed,
    )
    bundle = run_alignment_pipeline(grid, query, params, pipeline_config)
    report = check_bundle(grid, bundle)
    document = {
        "config": {
            "grid": f"{rows}x{cols}",
            "dim": cmd.dim,
            "seed": cmd.seed,
            "layers": cmd.layers,
            "top_k": cmd.top_k,
            "linkage_threshold": cmd.linkage_threshold,
            "k_max": cmd.k_max,
            "proximity_radius": cmd.proximity_radius,
            "disable_vp_alignment": cmd.disable_vp_alignment,
            "disable_intra": cmd.disable_intra,
            "disable_cross": cmd.disable_cross,
        },
        "bundle": bundle.to_json_dict(),
        "invariants": report,
    }
    print(json.dumps(document, indent=2, sort_keys=True))
    return 0


def _cmd_eval(cmd: EvalCommand) -> int:
    try:
        items = load_dataset(cmd.dataset)
    except OSError as exc:
        raise CliError(f"cannot read dataset: {exc}") from exc
    mode = cmd.mode.replace("-", "_")
    tables: dict[str, OracleAgent] = {}

    if cmd.agent == "oracle":
        def factory(item: EvalItem) -> AgentHandle:
            if item.table_path is None:
                raise CliError(f"item {item.id!r} has no table_path for the oracle agent")
            agent = tables.get(item.table_path)
            if agent is None:
                agent = OracleAgent(load_table(item.table_path))
                tables[item.table_path] = agent
            return agent
    else:
        shared = _build_agent(cmd.agent, None, None)

        def factory(item: EvalItem) -> AgentHandle:
            return shared

    llm = None
    if mode == "programmatic":
        llm = _build_llm(cmd.llm, cmd.llm_replay)
    report = run_eval(
        items,
        EvalConfig(
            mode=mode,
            agent_factory=factory,
            llm_client=llm,
            fallback_to_ask=cmd.fallback,
            workers=cmd.workers,
            tolerance=cmd.tolerance,
            trace_dir=cmd.trace_dir,
        ),
    )
    text = report.to_json_text()
    sys.stdout.write(text)
    if cmd.output is not None:
        Path(cmd.output).write_text(text, encoding="utf-8")
    total = len(report.items)
    correct = sum(1 for item in report.items if item.correct)
    print(f"accuracy {correct}/{total} = {report.accuracy:.3f}", file=sys.stderr)
    if report.empty_dataset:
        print("warning: dataset is empty", file=sys.stderr)
    return 0


def run_command(cmd: Command) -> int:
    """Execute a parsed command. Returns the process exit status."""
    try:
        if isinstance(cmd, ParseCommand):
            return _cmd_parse(cmd)
        if isinstance(cmd, RunCommand):
            return _cmd_run(cmd)
        if isinstance(cmd, SolveCommand):
            return _cmd_solve(cmd)
        if isinstance(cmd, AlignDemoCommand):
            return _cmd_align_demo(cmd)
        if isinstance(cmd, EvalCommand):
            return _cmd_eval(cmd)
        raise CliError(f"unhandled command {type(cmd).__name__}")
    except SolveChartError as exc:
        print(f"solvechart: error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run_command(parse_args(sys.argv[1:])))


if __name__ == "__main__":
    main()
