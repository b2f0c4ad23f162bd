import time

import pytest


def pytest_configure(config):
    config._acceptance_lines = {}


@pytest.fixture
def acceptance(request):
    """``record(number, title, passed, detail, started, limit)`` -> overall pass flag."""
    lines = request.config._acceptance_lines

    def record(number, title, passed, detail, started, limit=None):
        elapsed = time.perf_counter() - started
        in_time = limit is None or elapsed < limit
        ok = bool(passed) and in_time
        budget = f" of {limit:g}s" if limit is not None else ""
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title}: {detail} ({elapsed:.1f}s{budget})"
        lines[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config._acceptance_lines
    if lines:
        terminalreporter.section("acceptance criteria")
        for n in sorted(lines):
            terminalreporter.write_line(lines[n])
