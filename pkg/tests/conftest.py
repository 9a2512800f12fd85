from __future__ import annotations

from pathlib import Path

import pytest

from solvechart.agents.oracle import OracleAgent
from solvechart.agents.table import ChartTable, load_table

FIXTURES = Path(__file__).parent / "fixtures"

# The worked end-to-end example: decompose, subtract, decide by sign.
ELECTION_PROGRAM = """\
rep_2012 = SUBSTEP("what is the value of Republican in 2012")
dem_2012 = SUBSTEP("what is the value of Democrat in 2012")
difference_in_2012 = rep_2012 - dem_2012
if difference_in_2012 > 0:
    answer = "Republican"
else:
    answer = "Democrat"
"""


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def election_table() -> ChartTable:
    return load_table(FIXTURES / "tables" / "election.json")


@pytest.fixture(scope="session")
def fruit_table() -> ChartTable:
    return load_table(FIXTURES / "tables" / "fruit.json")


@pytest.fixture(scope="session")
def temps_table() -> ChartTable:
    return load_table(FIXTURES / "tables" / "temps.json")


@pytest.fixture
def election_agent(election_table: ChartTable) -> OracleAgent:
    return OracleAgent(election_table)


@pytest.fixture
def election_program_source() -> str:
    return ELECTION_PROGRAM
