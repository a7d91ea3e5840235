"""One test per acceptance criterion; each prints a PASS/FAIL line with its numbers."""
import pytest

from lifshitz import acceptance

# pinned tolerances, restated here so a change in the library is caught
TOLERANCES = {
    1: "rel 1e-3, runtime < 5 s",
    2: "ratio in [0.99, 1.01] at x >= 20",
    3: "ratio in [0.50, 0.55]; plasma within 2% of classical",
    4: "|extra| <= 1e-10 |F|",
    5: "|diff| <= 2 x combined error, x in [0.1, 20]",
    6: "<= 2% at x = 0.5; monotone to x = 0.1",
    7: "1% at kd in {5, 8, 12}",
    8: "0.5% of oracle; cubic scaling 1e-12",
    9: "1e-10 identity; e^{-x}-scale large-x; 0.5% small-x",
    10: "exact zeros; strict decay at 10 d",
    11: "byte-identical CSV, threads 1 vs 8",
}


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number, acceptance_report):
    check = acceptance.CRITERIA[number - 1]()
    line = f"{check.line()} [tolerance: {TOLERANCES[number]}]"
    print(line)
    acceptance_report.append(line)
    assert check.number == number
    assert check.passed, check.detail
