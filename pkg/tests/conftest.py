import mpmath as mp
import pytest

from plab.context import EvalContext

# acceptance lines collected by test_acceptance.record
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def hp():
    """Raise mpmath's global precision so residuals are not formed at 15 digits."""
    old = mp.mp.dps
    mp.mp.dps = 120
    yield
    mp.mp.dps = old


@pytest.fixture
def ctx30():
    return EvalContext(precision_digits=30)


@pytest.fixture
def ctx40():
    return EvalContext(precision_digits=40)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
