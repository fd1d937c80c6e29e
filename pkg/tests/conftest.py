import numpy as np
import pytest

from urysohn.problems import linear_problem, reciprocal_problem, zero_problem
from urysohn.projection import make_partition, transfer_matrix
from urysohn.quadrature import composite_grid, make_basic_rule


def setup(n, r, quad="gauss", rho=None, m=None, breakpoint="cell"):
    rule = make_basic_rule(quad, rho if rho is not None else r)
    part = make_partition(0.0, 1.0, n, r)
    grid = composite_grid(rule, 0.0, 1.0, m if m is not None else n)
    return part, grid, transfer_matrix(part, grid, breakpoint)


@pytest.fixture
def reciprocal():
    return reciprocal_problem(1.0)


@pytest.fixture
def linear():
    return linear_problem()


@pytest.fixture
def zero():
    return zero_problem()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
