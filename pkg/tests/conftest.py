from pathlib import Path

import pytest

DATA = Path(__file__).parent / "data"

# (criterion number, passed, detail) filled in by test_acceptance.py
ACCEPTANCE: list = []


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture
def criterion():
    def record(number, passed, detail):
        ACCEPTANCE.append((number, passed, detail))

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, passed, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
