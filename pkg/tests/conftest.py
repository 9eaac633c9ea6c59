import pytest

_LINES: list[str] = []


class AcceptanceLog:
    """Collects one PASS/FAIL line per exit criterion for the terminal summary."""

    def record(self, name: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        _LINES.append(f"{status} {name}" + (f": {detail}" if detail else ""))
        return passed


@pytest.fixture(scope="session")
def acceptance():
    return AcceptanceLog()


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in _LINES:
        terminalreporter.write_line(line)
