import pytest

_RESULTS = {}


@pytest.fixture
def record():
    """``record(criterion, name, passed, detail)``; the summary prints one line per criterion."""

    def add(criterion, name, passed, detail=""):
        _RESULTS.setdefault(criterion, []).append((name, bool(passed), detail))

    return add


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for criterion in sorted(_RESULTS):
        checks = _RESULTS[criterion]
        verdict = "PASS" if all(ok for _, ok, _ in checks) else "FAIL"
        tr.write_line(f"criterion {criterion}: {verdict}")
        for name, ok, detail in checks:
            tr.write_line(f"    {'ok  ' if ok else 'FAIL'} {name}: {detail}")
