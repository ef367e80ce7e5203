"""Shared fixtures.  The 24x96 two-sector solves are expensive, so they are
computed once per session and reused by the unit and acceptance tests."""
import numpy as np
import pytest

from mobius_dirac import dirac
from mobius_dirac.surface import StripParams

GRID = (24, 96)
COUNT = 40


class Solved:
    """Operators and spectra of both sectors on one grid."""

    def __init__(self, params, options, n_r, n_theta, count=COUNT, mass=0.0):
        self.params = params
        self.options = options
        self.grid = dirac.DiracGrid(params, n_r, n_theta, options.boundary)
        self.ops = {s: dirac.assemble(params, self.grid, s, mass, options) for s in (1, -1)}
        self.specs = {s: dirac.spectrum(op, count) for s, op in self.ops.items()}


@pytest.fixture(scope="session")
def mobius():
    return StripParams(4.0, 1.0, 1)


@pytest.fixture(scope="session")
def mobius_solved(mobius):
    return Solved(mobius, dirac.DiracOptions(wilson=0.5), *GRID)


@pytest.fixture(scope="session")
def flat_solved(mobius):
    return Solved(mobius, dirac.flat_control_options(0.5), *GRID)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
