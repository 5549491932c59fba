import pytest

from lcameasure.group_core import annihilator, canonical_transversal, make_group, subgroup_generate
from lcameasure.measure import AtomicMeasure


@pytest.fixture
def z4():
    return make_group([4])


@pytest.fixture
def z4_setup(z4):
    """Z(4) with H = {0, 2}: annihilator {0, 2}, canonical transversal {0, 1}."""
    H = subgroup_generate(z4, [(2,)])
    lam = annihilator(z4, H)
    return z4, H, lam, canonical_transversal(z4, lam)


@pytest.fixture
def mixed(z4):
    return AtomicMeasure.dirac(z4, (0,), (1,), (3,))


@pytest.fixture
def uniform(z4):
    return AtomicMeasure.uniform(z4)


@pytest.fixture
def dirac0(z4):
    return AtomicMeasure.dirac(z4, (0,))


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if rep.when != "call":
                continue
            for key, value in rep.user_properties:
                if key == "acceptance":
                    lines.append(f"{'PASS' if outcome == 'passed' else 'FAIL'} {value}")
    if lines:
        terminalreporter.section("acceptance")
        for line in sorted(lines, key=lambda s: s.split("criterion")[1]):
            terminalreporter.write_line(line)
