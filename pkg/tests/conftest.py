import numpy as np
import pytest

from symcone import jordan as jd


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ALGEBRAS = [("sym_real", 2), ("sym_real", 3), ("herm_complex", 2), ("herm_complex", 3), ("spin", 3), ("spin", 5)]


@pytest.fixture(params=ALGEBRAS, ids=[f"{k}-{s}" for k, s in ALGEBRAS])
def alg(request):
    return jd.make_algebra(*request.param)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
