import pytest

from lifshitz.quantities import ev_to_rad_s


@pytest.fixture(scope="session")
def gold_like():
    """Drude parameters used throughout as example inputs (9 eV, 35 meV)."""
    return ev_to_rad_s(9.0), ev_to_rad_s(0.035)


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance_report(request):
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return request.config.stash.setdefault(_ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s[7:9])):
            terminalreporter.write_line(line)
