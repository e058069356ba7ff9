import pytest

_VERDICTS: list[str] = []


class Verdict:
    """Records one PASS/FAIL line per acceptance check and asserts on it."""

    def __call__(self, criterion: int, label: str, ok: bool, detail: str = "", expected_failure: bool = False):
        word = "PASS" if ok else ("XFAIL" if expected_failure else "FAIL")
        line = f"{word:5s} criterion {criterion:2d} {label}" + (f": {detail}" if detail else "")
        _VERDICTS.append(line)
        print(line)
        assert ok, line


@pytest.fixture
def verdict() -> Verdict:
    return Verdict()


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
