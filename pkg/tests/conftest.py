import pytest

_LINES = []


@pytest.fixture
def acceptance_line():
    """Record one pass/fail line per acceptance criterion; echoed in the terminal summary."""

    def record(k, title, ok, detail):
        line = f"criterion {k:>2} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        print(line)
        _LINES.append((k, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(_LINES):
            terminalreporter.write_line(line)
