"""Shared fixtures and the acceptance-criteria report.

Acceptance tests register one line each through the ``criterion`` reporter;
the lines are replayed in the terminal summary so the pass/fail status of
every criterion is visible in a normal pytest run.
"""

import numpy as np
import pytest

from holeburn import (
    FrequencyGrid,
    QGaussianSpec,
    SystemParams,
    build_q_gaussian,
    omega_from_mhz,
)

_CRITERION_LINES = []


def record_criterion(number, name, ok, detail):
    _CRITERION_LINES.append(
        f"{'PASS' if ok else 'FAIL'}  criterion {number:2d}  {name}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if not _CRITERION_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_CRITERION_LINES):
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def paper_params():
    return SystemParams.from_mhz(2691.5, 2691.5, 8.56, 0.4)


@pytest.fixture(scope="session")
def paper_grid(paper_params):
    return FrequencyGrid.centered(paper_params.omega_s, omega_from_mhz(50.0), 20001)


@pytest.fixture(scope="session")
def paper_density(paper_params, paper_grid):
    line = QGaussianSpec(paper_params.omega_s, omega_from_mhz(9.44), 1.39)
    return build_q_gaussian(line, paper_grid)


@pytest.fixture(scope="session")
def paper_probe(paper_params):
    return FrequencyGrid.centered(paper_params.omega_s, omega_from_mhz(25.0), 20001)


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
