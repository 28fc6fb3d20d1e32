import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from vekua.formal_powers import build_basis  # noqa: E402
from vekua.radial import PotentialSpec  # noqa: E402

KAPPA = 0.5


@pytest.fixture(scope="session")
def helmholtz_q():
    return PotentialSpec.constant(-KAPPA**2, 1.0)


@pytest.fixture(scope="session")
def helmholtz(helmholtz_q):
    return build_basis(helmholtz_q, 8)


@pytest.fixture(scope="session")
def laplace():
    return build_basis(PotentialSpec.constant(0.0, 1.0), 8)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    if module is None or not module.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(module.RESULTS):
        terminalreporter.write_line(module.RESULTS[number])
