import pytest

CRITERIA = []


@pytest.fixture
def criterion():
    """Record one acceptance line ``[k] PASS|FAIL title: detail`` and assert it."""
    def record(number, title, ok, detail):
        line = f"[criterion {number:>2}] {'PASS' if ok else 'FAIL'} {title}: {detail}"
        CRITERIA.append((number, line))
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(CRITERIA):
        terminalreporter.write_line(line)
