import pytest

_results = []


@pytest.fixture
def acceptance():
    """``check(label, ok)`` records a criterion outcome and asserts it."""

    def check(label, ok, detail=""):
        _results.append((label, bool(ok), detail))
        assert ok, f"{label}: {detail}"

    return check


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _results:
        line = f"{'PASS' if ok else 'FAIL'}  {label}"
        if detail and not ok:
            line += f"  ({detail})"
        terminalreporter.write_line(line)
