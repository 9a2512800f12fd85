from __future__ import annotations

import json
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from solvechart.agents.base import AgentAnswer, AgentError, AgentErrorKind, AgentQuery
from solvechart.agents.http import HttpAgent, http_answer
from solvechart.agents.oracle import (
    NoMatch,
    OracleAgent,
    match_template,
    normalize_question,
    oracle_answer,
)
from solvechart.agents.replay import Cassette, CassetteFormatError, ReplayAgent
from solvechart.agents.table import ChartTable, Series, TableFormatError, load_table


def make_table(*series) -> ChartTable:
    return ChartTable(
        title="t",
        x_label="x",
        y_label="y",
        series=tuple(Series(name, tuple(points)) for name, points in series),
    )


# -- query/answer types -----------------------------------------------------

def test_query_requires_nonempty_question():
    with pytest.raises(ValueError):
        AgentQuery("", "c", "ASK")


def test_query_requires_known_operator():
    with pytest.raises(ValueError):
        AgentQuery("q", "c", "LOOKUP")


def test_answer_latency_nonnegative():
    with pytest.raises(ValueError):
        AgentAnswer("a", -1.0, "b")


# -- chart tables -----------------------------------------------------------

def test_load_table_fixture(election_table):
    assert election_table.title == "Vote share by party"
    assert election_table.series_names() == ["Republican", "Democrat"]
    assert election_table.lookup("Republican", "2012") == 50.0
    assert election_table.lookup("republican", "2012") == 50.0


def test_duplicate_series_names_rejected_case_insensitive():
    with pytest.raises(TableFormatError):
        make_table(("A", [("x", 1.0)]), ("a", [("x", 2.0)]))


def test_duplicate_categories_rejected():
    with pytest.raises(TableFormatError):
        make_table(("A", [("x", 1.0), ("x", 2.0)]))


def test_load_table_bad_json(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json", encoding="utf-8")
    with pytest.raises(TableFormatError):
        load_table(bad)


def test_load_table_wrong_shape(tmp_path):
    bad = tmp_path / "shape.json"
    bad.write_text(json.dumps({"title": "t"}), encoding="utf-8")
    with pytest.raises(TableFormatError):
        load_table(bad)


# -- templates --------------------------------------------------------------

def test_normalize_question():
    assert normalize_question("What is the VALUE of Democrat, in 2012?!") == (
        "what is the value of democrat in 2012"
    )


def test_match_value_of():
    match = match_template("What is the value of Democrat in 2012?")
    assert match.kind == "value_of"
    assert match.slot("rest") == "democrat in 2012"


def test_match_arg_extreme():
    match = match_template("which year has the lowest value")
    assert match.kind == "arg_extreme"
    assert match.slot("subject") == "year"
    assert match.slot("which") == "lowest"


def test_match_extreme_of_series():
    match = match_template("What is the maximum value of Apples?")
    assert match.kind == "extreme_of_series"
    assert match.slot("which") == "highest"


def test_no_match():
    with pytest.raises(NoMatch):
        match_template("compare the trends")


# -- oracle answers ---------------------------------------------------------

def test_oracle_cell_lookup(election_table):
    assert oracle_answer(election_table, "what is the value of Republican in 2012") == "50"


def test_oracle_overall_argmax_series():
    table = make_table(("A", [("x", 4.0)]), ("B", [("x", 9.0)]))
    assert oracle_answer(table, "which series has the highest value") == "B"


def test_oracle_unanswerable(election_table):
    with pytest.raises(AgentError) as err:
        oracle_answer(election_table, "what is the capital of France")
    assert err.value.kind is AgentErrorKind.UNANSWERABLE


def test_oracle_extremes(fruit_table, temps_table):
    assert oracle_answer(fruit_table, "What is the highest value of Apples?") == "150"
    assert oracle_answer(fruit_table, "What is the lowest value of Oranges?") == "60"
    assert oracle_answer(temps_table, "Which day has the lowest value?") == "Wed"


def test_oracle_single_series_category(temps_table):
    assert oracle_answer(temps_table, "What is the value of Thu?") == "21"


def test_oracle_cell_sum_and_difference(fruit_table, election_table):
    question = "What is the sum of Apples in Jan and Oranges in Jan?"
    assert oracle_answer(fruit_table, question) == "200"
    question = "What is the difference between Republican in 2010 and Democrat in 2010?"
    assert oracle_answer(election_table, question) == "2"


def test_oracle_longest_name_match():
    table = make_table(
        ("Total", [("Jan", 5.0)]),
        ("Total Sales", [("Jan", 9.0)]),
    )
    assert oracle_answer(table, "what is the value of Total Sales in Jan") == "9"


def test_oracle_unknown_name_unanswerable(election_table):
    with pytest.raises(AgentError):
        oracle_answer(election_table, "what is the value of Libertarian in 2012")


def test_oracle_purity(election_table):
    question = "what is the value of Democrat in 2010"
    answers = {oracle_answer(election_table, question) for _ in range(5)}
    assert answers == {"45"}


def test_operator_metadata_not_interpreted(election_agent):
    ask = election_agent.answer(AgentQuery("what is the value of Democrat in 2012", "c", "ASK"))
    substep = election_agent.answer(
        AgentQuery("what is the value of Democrat in 2012", "c", "SUBSTEP")
    )
    assert ask.answer == substep.answer == "43"


# -- cassettes --------------------------------------------------------------

def test_cassette_roundtrip(tmp_path, election_agent):
    path = tmp_path / "cassette.json"
    recorder = ReplayAgent(Cassette.empty(path), live=election_agent)
    query = AgentQuery("what is the value of Republican in 2012", "election", "SUBSTEP")
    first = recorder.answer(query)
    assert first.answer == "50"
    assert first.backend == "record"

    replayer = ReplayAgent(Cassette.load(path))
    replayed = replayer.answer(query)
    assert replayed.answer == "50"
    assert replayed.backend == "replay"


def test_cassette_strict_miss(tmp_path):
    agent = ReplayAgent(Cassette.empty())
    with pytest.raises(AgentError) as err:
        agent.answer(AgentQuery("q", "c", "ASK"))
    assert err.value.kind is AgentErrorKind.CASSETTE_MISS


def test_cassette_key_normalization():
    cassette = Cassette([{"chart_id": "c", "question": "What  is X?", "answer": "1"}])
    assert cassette.lookup("c", "what is x?") == "1"
    assert cassette.lookup("c", "  WHAT IS X?  ") == "1"
    assert cassette.lookup("other", "what is x?") is None


def test_cassette_last_entry_wins():
    cassette = Cassette(
        [
            {"chart_id": "c", "question": "q", "answer": "old"},
            {"chart_id": "c", "question": "q", "answer": "new"},
        ]
    )
    assert cassette.lookup("c", "q") == "new"


def test_cassette_record_mode_grows_file(tmp_path, election_agent):
    path = tmp_path / "c.json"
    recorder = ReplayAgent(Cassette.empty(path), live=election_agent)
    recorder.answer(AgentQuery("what is the value of Democrat in 2012", "e", "ASK"))
    entries = json.loads(path.read_text(encoding="utf-8"))
    assert len(entries) == 1
    recorder.answer(AgentQuery("what is the value of Democrat in 2010", "e", "ASK"))
    entries = json.loads(path.read_text(encoding="utf-8"))
    assert len(entries) == 2
    assert entries[1]["answer"] == "45"


def test_cassette_replays_hit_without_touching_live(tmp_path, election_agent):
    path = tmp_path / "c.json"
    recorder = ReplayAgent(Cassette.empty(path), live=election_agent)
    query = AgentQuery("what is the value of Democrat in 2012", "e", "ASK")
    recorder.answer(query)
    hit = recorder.answer(query)
    assert hit.backend == "replay"
    entries = json.loads(path.read_text(encoding="utf-8"))
    assert len(entries) == 1


def test_cassette_concurrent_appends(tmp_path):
    cassette = Cassette.empty(tmp_path / "c.json")

    def record(start: int) -> None:
        for i in range(start, start + 20):
            cassette.append("c", f"q{i}", str(i))

    threads = [threading.Thread(target=record, args=(base,)) for base in (0, 100, 200)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(cassette) == 60


def test_cassette_rejects_malformed_entries():
    with pytest.raises(CassetteFormatError):
        Cassette([{"chart_id": "c", "question": "q"}])


def test_cassette_load_rejects_non_array(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{"chart_id": "c"}', encoding="utf-8")
    with pytest.raises(CassetteFormatError):
        Cassette.load(path)


# -- http backend -----------------------------------------------------------

class _Handler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", "0"))
        body = json.loads(self.rfile.read(length) or b"{}")
        mode = self.server.mode  # type: ignore[attr-defined]
        self.server.last_request = (self.path, body)  # type: ignore[attr-defined]
        if mode == "ok":
            payload = json.dumps({"answer": "50"}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        elif mode == "http500":
            self.send_response(500)
            self.end_headers()
        elif mode == "notjson":
            payload = b"plain text"
            self.send_response(200)
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)
        elif mode == "missing-key":
            payload = json.dumps({"result": "50"}).encode()
            self.send_response(200)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(payload)))
            self.end_headers()
            self.wfile.write(payload)

    def log_message(self, *args):
        pass


@pytest.fixture
def http_server():
    server = ThreadingHTTPServer(("127.0.0.1", 0), _Handler)
    server.mode = "ok"
    server.last_request = None
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield server, f"http://127.0.0.1:{server.server_address[1]}"
    finally:
        server.shutdown()
        server.server_close()


def test_http_answer_protocol(http_server):
    server, url = http_server
    reply = http_answer(url, AgentQuery("what?", "c1", "SUBSTEP"))
    assert reply.answer == "50"
    assert reply.backend == "http"
    assert reply.latency_ms >= 0.0
    path, body = server.last_request
    assert path == "/answer"
    assert body == {"question": "what?", "chart_id": "c1", "operator": "SUBSTEP"}


def test_http_operator_parity(http_server):
    _, url = http_server
    agent = HttpAgent(url)
    ask = agent.answer(AgentQuery("q", "c", "ASK"))
    substep = agent.answer(AgentQuery("q", "c", "SUBSTEP"))
    assert ask.answer == substep.answer


def test_http_500_is_transport_error(http_server):
    server, url = http_server
    server.mode = "http500"
    with pytest.raises(AgentError) as err:
        http_answer(url, AgentQuery("q", "c", "ASK"))
    assert err.value.kind is AgentErrorKind.TRANSPORT


def test_http_non_json_is_bad_response(http_server):
    server, url = http_server
    server.mode = "notjson"
    with pytest.raises(AgentError) as err:
        http_answer(url, AgentQuery("q", "c", "ASK"))
    assert err.value.kind is AgentErrorKind.BAD_RESPONSE


def test_http_missing_answer_key_is_bad_response(http_server):
    server, url = http_server
    server.mode = "missing-key"
    with pytest.raises(AgentError) as err:
        http_answer(url, AgentQuery("q", "c", "ASK"))
    assert err.value.kind is AgentErrorKind.BAD_RESPONSE


def test_http_connection_refused_is_transport():
    with pytest.raises(AgentError) as err:
        http_answer("http://127.0.0.1:9", AgentQuery("q", "c", "ASK"), timeout_s=0.5)
    assert err.value.kind is AgentErrorKind.TRANSPORT
