from __future__ import annotations

import json

import pytest

from solvechart.agents.base import AgentError, AgentErrorKind
from solvechart.agents.oracle import OracleAgent
from solvechart.agents.replay import Cassette
from solvechart.agents.table import load_table
from solvechart.evaluation.dataset import (
    DatasetFormatError,
    DuplicateIdError,
    EvalItem,
    load_dataset,
)
from solvechart.evaluation.harness import EvalConfig, run_eval
from solvechart.evaluation.metrics import relaxed_match


def write_jsonl(path, records):
    lines = [json.dumps(r) if isinstance(r, dict) else r for r in records]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def record(item_id, question, gold, **extra):
    base = {"id": item_id, "question": question, "gold": gold, "chart_id": "c-" + item_id}
    base.update(extra)
    return base


# -- dataset loading --------------------------------------------------------

def test_load_dataset_preserves_order_and_resolves_paths(tmp_path):
    (tmp_path / "tables").mkdir()
    path = write_jsonl(
        tmp_path / "d.jsonl",
        [
            record("b", "q1", "1", table_path="tables/one.json"),
            "",
            record("a", "q2", "2"),
            record("c", "q3", "3", table_path="/abs/two.json"),
        ],
    )
    items = load_dataset(path)
    assert [item.id for item in items] == ["b", "a", "c"]
    assert items[0].table_path == str(tmp_path / "tables" / "one.json")
    assert items[1].table_path is None
    assert items[2].table_path == "/abs/two.json"


def test_load_dataset_missing_key_reports_line(tmp_path):
    path = write_jsonl(
        tmp_path / "d.jsonl",
        [record("a", "q", "1"), {"id": "b", "question": "q", "chart_id": "c"}],
    )
    with pytest.raises(DatasetFormatError) as excinfo:
        load_dataset(path)
    assert excinfo.value.line == 2
    assert "gold" in str(excinfo.value)
    assert str(excinfo.value).startswith("line 2:")


def test_load_dataset_duplicate_id(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [record("a", "q", "1"), record("a", "q2", "2")])
    with pytest.raises(DuplicateIdError) as excinfo:
        load_dataset(path)
    assert excinfo.value.line == 2
    assert "'a'" in str(excinfo.value)


def test_load_dataset_bad_json_line(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [record("a", "q", "1"), "{oops"])
    with pytest.raises(DatasetFormatError) as excinfo:
        load_dataset(path)
    assert excinfo.value.line == 2
    assert "invalid JSON" in str(excinfo.value)


def test_load_dataset_rejects_non_object_line(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", ["[1, 2]"])
    with pytest.raises(DatasetFormatError):
        load_dataset(path)


def test_load_dataset_rejects_non_string_fields(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [record("a", "q", 50)])
    with pytest.raises(DatasetFormatError) as excinfo:
        load_dataset(path)
    assert "'gold'" in str(excinfo.value)


def test_load_dataset_rejects_empty_id(tmp_path):
    path = write_jsonl(tmp_path / "d.jsonl", [record("", "q", "1")])
    with pytest.raises(DatasetFormatError) as excinfo:
        load_dataset(path)
    assert excinfo.value.line == 1


def test_eval_item_validation():
    with pytest.raises(ValueError):
        EvalItem(id="x", question="", gold="1", chart_id="c")


def test_bundled_fixture_dataset_loads(fixtures_dir):
    items = load_dataset(fixtures_dir / "dataset.jsonl")
    assert len(items) == 20
    assert [item.id for item in items] == sorted(item.id for item in items)
    for item in items:
        assert item.table_path is not None
        assert load_table(item.table_path).series_names()


# -- relaxed matching -------------------------------------------------------

@pytest.mark.parametrize(
    "prediction,gold,expected",
    [
        ("51", "50", True),
        ("56", "50", False),
        ("52.5", "50", True),
        ("52.51", "50", False),
        ("47.5", "50", True),
        ("Republican", "republican", True),
        ("  Republican ", "republican", True),
        ("0", "0", True),
        ("0", "0.0", True),
        ("0.0001", "0", False),
        ("45%", "45", True),
        ("45", "45%", True),
        ("1,234", "1234", True),
        ("Apples, Oranges", "apples,oranges", True),
        ("Apples, Oranges", "apples", False),
        ("Apples, 100", "apples, 104", True),
        ("Apples, 100", "apples, 110", False),
        ("45", "forty-five", False),
        ("forty-five", "45", False),
        ("", "", True),
    ],
)
def test_relaxed_match_table(prediction, gold, expected):
    assert relaxed_match(prediction, gold) is expected


def test_relaxed_match_zero_tolerance():
    assert relaxed_match("50", "50", tolerance=0.0) is True
    assert relaxed_match("50.0001", "50", tolerance=0.0) is False


def test_relaxed_match_negative_tolerance():
    with pytest.raises(ValueError):
        relaxed_match("1", "1", tolerance=-0.01)


def test_relaxed_match_reflexive():
    for value in ("50", "Republican", "45%", "Apples, Oranges", "0"):
        assert relaxed_match(value, value) is True


def test_relaxed_match_text_branch_symmetric():
    assert relaxed_match("WeD", "wed") is True
    assert relaxed_match("wed", "WeD") is True


# -- harness ----------------------------------------------------------------

TEMPS_QA = (
    ("t1", "What is the value of Mon?", "12"),
    ("t2", "What is the highest value of Temperature?", "21"),
    ("t3", "Which day has the lowest value?", "Wed"),
    ("t4", "What is the average of Mon and Tue?", "13.5"),
)


def temps_items(table_path) -> list[EvalItem]:
    return [
        EvalItem(id=i, question=q, gold=g, chart_id="temps", table_path=str(table_path))
        for i, q, g in TEMPS_QA
    ]


def oracle_factory(item):
    return OracleAgent(load_table(item.table_path))


def temps_cassette() -> Cassette:
    cassette = Cassette.empty()
    for item_id, question, _ in TEMPS_QA[:3]:
        cassette.append("temps", question, f'```\nanswer = ASK("{question}")\n```')
    cassette.append(
        "temps",
        TEMPS_QA[3][1],
        "```\n"
        'mon = SUBSTEP("what is the value of Mon")\n'
        'tue = SUBSTEP("what is the value of Tue")\n'
        "answer = (mon + tue) / 2\n"
        "```",
    )
    return cassette


@pytest.fixture()
def temps_path(fixtures_dir):
    return fixtures_dir / "tables" / "temps.json"


def test_agent_only_run(temps_path):
    config = EvalConfig(mode="agent_only", agent_factory=oracle_factory)
    report = run_eval(temps_items(temps_path), config)
    assert report.accuracy == 0.75
    assert report.empty_dataset is False
    assert [r.id for r in report.items] == ["t1", "t2", "t3", "t4"]
    assert [r.correct for r in report.items] == [True, True, True, False]
    failed = report.items[3]
    assert failed.prediction is None
    assert failed.reason is not None


def test_programmatic_run_covers_arithmetic(temps_path):
    config = EvalConfig(
        mode="programmatic", agent_factory=oracle_factory, llm_client=temps_cassette()
    )
    report = run_eval(temps_items(temps_path), config)
    assert report.accuracy == 1.0
    assert report.items[3].prediction == "13.5"
    assert all(r.fallback_used is False for r in report.items)


def test_empty_dataset_report():
    config = EvalConfig(mode="agent_only", agent_factory=oracle_factory)
    report = run_eval([], config)
    assert report.accuracy == 0.0
    assert report.empty_dataset is True
    assert report.items == ()


def test_worker_count_does_not_change_results(temps_path):
    items = temps_items(temps_path)
    serial = run_eval(items, EvalConfig(mode="agent_only", agent_factory=oracle_factory))
    threaded = run_eval(
        items, EvalConfig(mode="agent_only", agent_factory=oracle_factory, workers=4)
    )
    # The config snapshot records the worker count, so compare the outcomes.
    assert serial.accuracy == threaded.accuracy
    assert [r.to_json_dict() for r in serial.items] == [
        r.to_json_dict() for r in threaded.items
    ]


def test_repeat_runs_byte_identical(temps_path):
    items = temps_items(temps_path)
    config = EvalConfig(
        mode="programmatic", agent_factory=oracle_factory, llm_client=temps_cassette()
    )
    first = run_eval(items, config).to_json_text()
    second = run_eval(items, config).to_json_text()
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first)["accuracy"] == 1.0


def test_generation_miss_is_per_item(temps_path):
    items = temps_items(temps_path)
    cassette = temps_cassette()
    config = EvalConfig(mode="programmatic", agent_factory=oracle_factory, llm_client=Cassette.empty())
    report = run_eval(items, config)
    assert report.accuracy == 0.0
    assert all("cassette-miss" in r.reason for r in report.items)
    del cassette


def test_factory_failure_is_per_item(temps_path):
    items = temps_items(temps_path)

    def flaky(item):
        if item.id == "t2":
            raise AgentError(AgentErrorKind.TRANSPORT, "backend down")
        return oracle_factory(item)

    report = run_eval(items, EvalConfig(mode="agent_only", agent_factory=flaky))
    assert [r.correct for r in report.items] == [True, False, True, False]
    assert "backend down" in report.items[1].reason


def test_runtime_error_uses_ask_fallback(temps_path):
    items = [
        EvalItem(
            id="f1",
            question="What is the value of Fri?",
            gold="18",
            chart_id="temps",
            table_path=str(temps_path),
        )
    ]
    cassette = Cassette.empty()
    cassette.append("temps", "What is the value of Fri?", "```\nanswer = 1 / 0\n```")
    with_fallback = run_eval(
        items,
        EvalConfig(
            mode="programmatic",
            agent_factory=oracle_factory,
            llm_client=cassette,
            fallback_to_ask=True,
        ),
    )
    assert with_fallback.items[0].correct is True
    assert with_fallback.items[0].fallback_used is True

    without = run_eval(
        items,
        EvalConfig(
            mode="programmatic",
            agent_factory=oracle_factory,
            llm_client=cassette,
            fallback_to_ask=False,
        ),
    )
    assert without.items[0].correct is False
    assert "division-by-zero" in without.items[0].reason


def test_trace_dir_writes_per_item_traces(temps_path, tmp_path):
    items = temps_items(temps_path)
    config = EvalConfig(
        mode="programmatic",
        agent_factory=oracle_factory,
        llm_client=temps_cassette(),
        trace_dir=str(tmp_path / "traces"),
    )
    report = run_eval(items, config)
    for result in report.items:
        assert result.trace_path == str(tmp_path / "traces" / f"{result.id}.json")
        doc = json.loads((tmp_path / "traces" / f"{result.id}.json").read_text())
        assert doc["steps"]


def test_config_validation():
    with pytest.raises(ValueError):
        EvalConfig(mode="hybrid", agent_factory=oracle_factory)
    with pytest.raises(ValueError):
        EvalConfig(mode="programmatic", agent_factory=oracle_factory)
    with pytest.raises(ValueError):
        EvalConfig(mode="agent_only", agent_factory=oracle_factory, workers=0)


def test_snapshot_is_limited_and_stable():
    config = EvalConfig(
        mode="agent_only",
        agent_factory=oracle_factory,
        workers=3,
        tolerance=0.1,
        trace_dir="/somewhere",
    )
    assert config.snapshot() == {
        "mode": "agent_only",
        "workers": 3,
        "tolerance": 0.1,
        "fallback_to_ask": True,
    }
