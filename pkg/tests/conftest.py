from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion id -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE: dict[str, tuple[bool, str]] = {}


def pytest_addoption(parser):
    parser.addoption("--run-slow", action="store_true", default=False, help="run slow exhaustive checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-slow"):
        return
    skip = pytest.mark.skip(reason="needs --run-slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


@pytest.fixture
def record():
    def _record(criterion: str, passed: bool, detail: str = "") -> None:
        ACCEPTANCE[criterion] = (passed, detail)
        print(f"[{'PASS' if passed else 'FAIL'}] {criterion} {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[criterion]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {criterion}: {detail}")
