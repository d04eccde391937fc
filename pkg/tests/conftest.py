import pytest

_VERDICTS = pytest.StashKey[list]()


def format_verdict(n, ok, detail):
    return f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request):
    lines = request.config.stash[_VERDICTS]

    def emit(n, ok, detail):
        line = format_verdict(n, ok, detail)
        lines.append((n, line))
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
