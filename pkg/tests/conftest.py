import os
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "src"))

from asm.parser import load, parse  # noqa: E402
from report.fix_report import fixed_clock  # noqa: E402

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"
FIXED_TIMESTAMP = "Sat Nov 10 10:00:00 2018"

# fixtures that are not repair subjects
NON_REPAIR = {"mutator_catalog.mvm", "mutation_score.mvm"}


def fixture_path(name: str) -> Path:
    return FIXTURES / name


def repair_fixtures():
    return sorted(p.name for p in FIXTURES.glob("*.mvm") if p.name not in NON_REPAIR)


def all_fixtures():
    return sorted(p.name for p in FIXTURES.glob("*.mvm"))


@pytest.fixture
def load_fixture():
    def _load(name: str):
        return load(fixture_path(name))
    return _load


@pytest.fixture
def parse_text():
    return parse


@pytest.fixture
def clock():
    return fixed_clock(FIXED_TIMESTAMP)
