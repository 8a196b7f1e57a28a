import pytest

from spinstrata.curve_system import build_prototype


@pytest.fixture(scope="session")
def proto22():
    return build_prototype((2, 2), "even", 3)


@pytest.fixture(scope="session")
def proto24():
    return build_prototype((2, 4), "even", 4)


def pytest_terminal_summary(terminalreporter):
    from . import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
