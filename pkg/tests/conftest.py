import pytest
from hypothesis import settings

# exact arithmetic has heavy tails (products of underlined w0 tokens); timing is not the property under test
settings.register_profile("exact", deadline=None)
settings.load_profile("exact")

_LINES: dict[int, str] = {}


class Criterion:
    def __init__(self, n: int, title: str):
        self.n, self.title = n, title
        _LINES[n] = f"[FAIL] criterion {n:>2}: {title} (aborted)"

    def report(self, ok: bool, detail: str = "") -> bool:
        tag = "PASS" if ok else "FAIL"
        _LINES[self.n] = f"[{tag}] criterion {self.n:>2}: {self.title}" + (f" ({detail})" if detail else "")
        return ok


@pytest.fixture
def criterion():
    return Criterion


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_LINES):
        terminalreporter.write_line(_LINES[n])
