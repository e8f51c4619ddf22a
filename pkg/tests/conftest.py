from __future__ import annotations

from pathlib import Path

import pytest

from itiguard import FixtureProvider, parse_itinerary

ROOT = Path(__file__).resolve().parent.parent
FIXTURES = ROOT / "fixtures"
GOLDENS = Path(__file__).resolve().parent / "goldens"


@pytest.fixture
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture
def goldens_dir() -> Path:
    return GOLDENS


@pytest.fixture
def sample_invalid():
    return parse_itinerary((FIXTURES / "sample_invalid.json").read_text(encoding="utf-8"), 4)


@pytest.fixture
def sample_corrected():
    return parse_itinerary((FIXTURES / "sample_corrected.json").read_text(encoding="utf-8"), 4)


@pytest.fixture
def demo_provider() -> FixtureProvider:
    return FixtureProvider({("SYD", "FRA"): 1020, ("FRA", "CAI"): 60, ("CAI", "CMN"): 60})
