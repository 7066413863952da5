import pytest

from zassenhaus.brute_force import enumerate_psl2, generate_sz

ORACLE_QS = (4, 5, 7, 8, 9, 11, 13)

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def sz8():
    return generate_sz(8)


@pytest.fixture(scope="session")
def psl2_groups():
    return {q: enumerate_psl2(q) for q in ORACLE_QS}


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
