from __future__ import annotations

import sys
from pathlib import Path

TESTS_DIR = Path(__file__).resolve().parent
FIXTURES = TESTS_DIR / "fixtures"

# make the local helper modules (oracle, synth) importable from any rootdir
if str(TESTS_DIR) not in sys.path:
    sys.path.insert(0, str(TESTS_DIR))

import pytest


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def campaign_dir() -> Path:
    return FIXTURES / "campaign"


@pytest.fixture(scope="session")
def consent_dir() -> Path:
    return FIXTURES / "consent"
