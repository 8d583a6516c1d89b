import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def record_criterion():
    """Register a one-line PASS/FAIL summary for an acceptance criterion."""

    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
