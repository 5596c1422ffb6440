import numpy as np
import pytest

from crosstwin.crossing import annotate_branches, build_system, normal_curves, solve_branches
from crosstwin.variants import CUALNI, LatticeParams, cubic_point_group, variant_map

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def params():
    return LatticeParams(*CUALNI)


@pytest.fixture(scope="session")
def U(params):
    return variant_map(params)


@pytest.fixture(scope="session")
def group():
    return cubic_point_group()


@pytest.fixture(scope="session")
def system(U):
    return build_system(3, 6, 4, 5, U)


@pytest.fixture(scope="session")
def branches(system):
    return annotate_branches(system, solve_branches(system.coeffs, 1001))


@pytest.fixture(scope="session")
def curves(system, branches):
    return normal_curves(system, branches)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def acceptance():
    """Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""
    return ACCEPTANCE_LINES
