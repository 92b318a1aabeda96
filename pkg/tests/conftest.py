import pytest

_ACCEPTANCE = []


@pytest.fixture
def record():
    """Log one acceptance criterion; the lines are printed in the terminal summary."""

    def _record(number, title, ok, detail=""):
        _ACCEPTANCE.append((number, title, bool(ok), detail))
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(_ACCEPTANCE, key=lambda t: t[0]):
        tag = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"{tag}  [{number:2d}] {title}  {detail}".rstrip())
