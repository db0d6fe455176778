from __future__ import annotations

import os
import sys

import pytest
from hypothesis import settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# one line per acceptance criterion, filled in by test_acceptance
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sigma0():
    from sblob.scalars import specialize

    return specialize(0)


@pytest.fixture(scope="session")
def sigma1():
    from sblob.scalars import specialize

    return specialize(1)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
