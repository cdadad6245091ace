"""Shared pytest setup: repository root on sys.path, scenario fixtures."""

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).parent.parent
sys.path.insert(0, str(ROOT))

SCENARIOS = ROOT / "scenarios"


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs longer than a few seconds")


@pytest.fixture
def ideal_scenario_path() -> Path:
    return SCENARIOS / "ideal.yaml"


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240611)
