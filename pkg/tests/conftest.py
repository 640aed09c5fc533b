import time
from contextlib import contextmanager

import pytest

_LINES: list[str] = []


class Criterion:
    """Collects the outcome of one acceptance criterion and reports it on a single line."""

    def __init__(self, number: int, title: str, budget: float):
        self.number = number
        self.title = title
        self.budget = budget
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)


@contextmanager
def _criterion(number: int, title: str, budget: float):
    crit = Criterion(number, title, budget)
    start = time.perf_counter()
    ok = False
    try:
        yield crit
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed <= budget
        status = "PASS" if ok and in_time else "FAIL"
        detail = "; ".join(crit.notes)
        if ok and not in_time:
            detail = f"over budget; {detail}"
        line = f"[{status}] criterion {number}: {title} ({elapsed:.2f} s of {budget:g} s) {detail}".rstrip()
        _LINES.append(line)
        print(line)
    assert in_time, f"criterion {number} took {elapsed:.2f} s, budget {budget:g} s"


@pytest.fixture
def criterion():
    return _criterion


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)
