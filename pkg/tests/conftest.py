import pytest

_LINES: list[str] = []


class Report:
    def __init__(self, criterion: str):
        self.criterion = criterion
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)


@pytest.fixture
def report(request):
    rep = Report(request.node.name)
    yield rep
    call = getattr(request.node, "rep_call", None)
    ok = call is not None and call.passed
    _LINES.append(f"[{'PASS' if ok else 'FAIL'}] {rep.criterion}: {'; '.join(rep.notes)}")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in _LINES:
            terminalreporter.write_line(line)
