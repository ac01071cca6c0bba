import pytest

RESULTS: list[str] = []


@pytest.fixture
def record():
    """Register a one-line criterion verdict for the terminal summary."""

    def _record(label: str, ok: bool, detail: str = "") -> bool:
        line = f"{label}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else "")
        RESULTS.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
