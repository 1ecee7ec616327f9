import pytest

ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL verdict for an acceptance criterion."""
    state = {}

    def start(number: int, summary: str):
        state["n"], state["summary"] = number, summary

    yield start
    if "n" in state:
        failed = request.node.rep_call.failed if hasattr(request.node, "rep_call") else True
        line = f"criterion {state['n']}: {'FAIL' if failed else 'PASS'} - {state['summary']}"
        ACCEPTANCE[state["n"]] = line
        print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
