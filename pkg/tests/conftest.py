import pytest

_LINES = []


@pytest.fixture
def report(request):
    """Emit one acceptance verdict line, live and again in the session summary."""
    terminal = request.config.pluginmanager.getplugin("terminalreporter")

    def emit(n, ok, detail):
        line = f"[ACCEPTANCE {n}] {'PASS' if ok else 'FAIL'} {detail}"
        _LINES.append(line)
        if terminal is not None:
            terminal.write_line("")
            terminal.write_line(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES):
            terminalreporter.write_line(line)
