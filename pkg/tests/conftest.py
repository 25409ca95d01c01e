import pytest

# omega, gamma, epsilon of the worked example (unbroken phase)
REF = (1.0, 0.05, 0.5)
REF_DELTA = 0.964630863
REF_A = 0.2539434939


@pytest.fixture
def ref_point():
    return REF

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
