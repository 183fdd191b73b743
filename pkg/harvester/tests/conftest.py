from __future__ import annotations

import sys
from pathlib import Path

import pytest

_HARVESTER_SRC = Path(__file__).resolve().parents[1] / "src"
_AUDITOR_SRC = Path(__file__).resolve().parents[2] / "src"

for candidate in (_HARVESTER_SRC, _AUDITOR_SRC):
    if str(candidate) not in sys.path:
        sys.path.insert(0, str(candidate))

from harharvest import FixtureCluster  # noqa: E402


@pytest.fixture(scope="session")
def cluster():
    with FixtureCluster(slow_seconds=2.0) as running:
        yield running
