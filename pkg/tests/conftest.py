import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """``record(n, ok, detail)`` prints a PASS/FAIL line for acceptance criterion ``n``."""
    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"ACCEPTANCE {n}: {'PASS' if ok else 'FAIL'} - {detail}"
        _LINES[n] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_LINES):
            terminalreporter.write_line(_LINES[n])
