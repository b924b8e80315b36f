from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from instances import make_e1, make_e4, make_three_lines  # noqa: E402

PROBLEMS = Path(__file__).parent.parent / "problems"


@pytest.fixture
def e1():
    return make_e1()


@pytest.fixture
def e4():
    return make_e4()


@pytest.fixture
def three_lines():
    return make_three_lines()


@pytest.fixture
def problems_dir():
    return PROBLEMS
