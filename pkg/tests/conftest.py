import pytest
from hypothesis import settings

# fixed example sequence so the suite is reproducible run to run
settings.register_profile("repro", derandomize=True)
settings.load_profile("repro")

ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    """Collects the one-line verdict each acceptance criterion prints."""
    def record(number, passed, detail):
        line = f"criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
