import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from urysohn.analysis import rate_fit
from urysohn.errors import IncompatibleGridsError, OutOfDomainError
from urysohn.projection import (
    evaluate_pp,
    interp_error_bound_check,
    interpolate,
    make_partition,
    probe_points,
    project,
    transfer_matrix,
)
from urysohn.quadrature import composite_grid, gauss_legendre_points, make_basic_rule


def test_partition_nodes():
    assert make_partition(0, 1, 2, 1).tau.tolist() == [0.25, 0.75]
    q1, q2 = gauss_legendre_points(2)
    assert make_partition(0, 1, 2, 2).tau == pytest.approx([q1 / 2, q2 / 2, 0.5 + q1 / 2, 0.5 + q2 / 2], abs=1e-16)
    assert make_partition(0, 1, 1, 3).tau == pytest.approx(gauss_legendre_points(3), abs=0)


@given(a=st.floats(-3, 3), width=st.floats(0.5, 5), n=st.integers(1, 40), r=st.integers(1, 6))
def test_partition_invariants(a, width, n, r):
    b = a + width
    part = make_partition(a, b, n, r)
    bp = part.breakpoints
    assert bp[0] == a and bp[-1] == b
    assert np.all(np.abs(np.diff(bp) - part.h) <= 1e-14 * (b - a))
    cells = part.tau.reshape(n, r)
    assert np.all(np.diff(cells, axis=1) > 0)
    assert np.all((cells > bp[:-1, None]) & (cells < bp[1:, None]))


@pytest.mark.parametrize("args", [(1, 0, 2, 1), (0, 1, 0, 1), (0, 1, 2, 0)])
def test_partition_bad_args(args):
    with pytest.raises(ValueError):
        make_partition(*args)


def test_interpolate_examples():
    part2 = make_partition(0, 1, 3, 2)
    pp = interpolate(part2, 3 * part2.tau - 1)
    s = np.linspace(0, 1, 17)
    assert pp(s) == pytest.approx(3 * s - 1, abs=1e-14)
    part1 = make_partition(0, 1, 2, 1)
    pp = interpolate(part1, part1.tau**2)
    assert pp.values.tolist() == [0.0625, 0.5625]
    assert interpolate(part2, np.full(6, 2.0))(0.3) == pytest.approx(2.0, abs=1e-15)


def test_interpolate_length_mismatch():
    with pytest.raises(ValueError):
        interpolate(make_partition(0, 1, 2, 2), np.ones(3))


def test_evaluate_breakpoint_convention():
    part = make_partition(0, 1, 2, 1)
    pp = interpolate(part, part.tau**2)
    assert evaluate_pp(pp, 0.5) == 0.5625  # right cell
    assert evaluate_pp(pp, 1.0) == 0.5625  # b belongs to the last cell
    assert evaluate_pp(pp, 0.0) == 0.0625


def test_evaluate_linear_at_breakpoints():
    part = make_partition(0, 1, 4, 2)
    pp = project(part, lambda t: t)
    assert pp(part.breakpoints) == pytest.approx(part.breakpoints, abs=1e-15)


@pytest.mark.parametrize("s", [-1e-9, 1.0 + 1e-9, np.nan])
def test_evaluate_out_of_domain(s):
    part = make_partition(0, 1, 2, 2)
    with pytest.raises(OutOfDomainError):
        evaluate_pp(interpolate(part, np.ones(4)), s)


def test_evaluate_shape():
    pp = project(make_partition(0, 1, 3, 2), np.sin)
    assert isinstance(pp(0.2), float)
    assert pp(np.zeros((2, 3))).shape == (2, 3)


@given(n=st.integers(1, 8), r=st.integers(1, 5), seed=st.integers(0, 2**31))
def test_nodal_values_and_idempotence(n, r, seed):
    rng = np.random.default_rng(seed)
    part = make_partition(0, 1, n, r)
    vals = rng.standard_normal(part.size)
    pp = interpolate(part, vals)
    assert pp(part.tau) == pytest.approx(vals, rel=1e-13, abs=1e-13)
    assert np.array_equal(project(part, pp).values, pp.values)


@given(n=st.integers(1, 6), r=st.integers(1, 5), seed=st.integers(0, 2**31))
def test_reproduces_low_degree_polynomials(n, r, seed):
    rng = np.random.default_rng(seed)
    poly = np.polynomial.Polynomial(rng.uniform(-1, 1, r))
    part = make_partition(0, 1, n, r)
    s = rng.uniform(0, 1, 100)
    assert np.max(np.abs(project(part, poly)(s) - poly(s))) <= 1e-12


@pytest.mark.parametrize("r", [1, 2, 3])
def test_interpolation_error_order(r):
    x = lambda t: 1 / (t + 1)
    ns = [4, 8, 16, 32]
    errs = []
    for n in ns:
        part = make_partition(0, 1, n, r)
        pts = probe_points(part)
        errs.append(np.max(np.abs(x(pts) - project(part, x)(pts))))
    assert rate_fit(1 / np.array(ns), errs) == pytest.approx(r, abs=0.3)


def test_bound_check_linear_exact():
    measured, bound = interp_error_bound_check(make_partition(0, 1, 3, 2), lambda t: 2 * t + 1, 0.0)
    assert measured <= 1e-14 and bound == 0.0


def test_bound_check_square():
    measured, bound = interp_error_bound_check(make_partition(0, 1, 4, 1), lambda t: t**2, 2.0)
    assert bound == pytest.approx(0.25, abs=1e-15)
    assert measured <= 0.25


def test_bound_check_sine_rate():
    errs = [interp_error_bound_check(make_partition(0, 1, n, 2), np.sin, 1.0)[0] for n in (4, 8)]
    assert math.log2(errs[0] / errs[1]) == pytest.approx(2, abs=0.3)


def test_bound_check_detects_violation():
    with pytest.raises(AssertionError):
        interp_error_bound_check(make_partition(0, 1, 4, 1), lambda t: t**2, 0.1)


def test_transfer_identity_when_grids_coincide():
    for r in (1, 2, 3):
        part = make_partition(0, 1, 3, r)
        grid = composite_grid(make_basic_rule("gauss", r), 0, 1, 3)
        assert np.allclose(transfer_matrix(part, grid).matrix, np.eye(3 * r), atol=1e-15)


def test_transfer_piecewise_constant_blocks():
    part = make_partition(0, 1, 2, 1)
    grid = composite_grid(make_basic_rule("simpson"), 0, 1, 4)
    E = transfer_matrix(part, grid).matrix
    expected = np.zeros((12, 2))
    expected[:6, 0] = 1
    expected[6:, 1] = 1
    assert np.array_equal(E, expected)


@pytest.mark.parametrize("r,rule,p", [(2, make_basic_rule("simpson"), 2),
                                      (2, make_basic_rule("gauss", 3), 3),
                                      (3, make_basic_rule("gauss", 2), 1)])
def test_transfer_rows_and_consistency(r, rule, p):
    rng = np.random.default_rng(1)
    n = 3
    part = make_partition(0, 1, n, r)
    grid = composite_grid(rule, 0, 1, p * n)
    E = transfer_matrix(part, grid)
    assert E.matrix.sum(axis=1) == pytest.approx(np.ones(grid.size), abs=1e-13)
    # a random element, evaluated cell by cell at the slots
    coeffs = rng.standard_normal((n, r))
    def piece(k, t):
        return np.polynomial.polynomial.polyval(t, coeffs[int(k)])
    tau_vals = np.array([piece(k, t) for k, t in zip(np.repeat(range(n), r), part.tau)])
    direct = np.array([piece(c, t) for c, t in zip(E.cell, grid.nodes)])
    assert np.max(np.abs(E @ tau_vals - direct)) <= 1e-12


def test_transfer_incompatible():
    part = make_partition(0, 1, 3, 1)
    with pytest.raises(IncompatibleGridsError):
        transfer_matrix(part, composite_grid(make_basic_rule("gauss", 1), 0, 1, 4))
    with pytest.raises(IncompatibleGridsError):
        transfer_matrix(part, composite_grid(make_basic_rule("gauss", 1), 0, 2, 3))


def test_transfer_average_at_breakpoints():
    part = make_partition(0, 1, 2, 1)
    grid = composite_grid(make_basic_rule("simpson"), 0, 1, 2)
    E = transfer_matrix(part, grid, breakpoint="average").matrix
    # slots: 0, .25, .5 | .5, .75, 1 ; both copies of 0.5 average the cells
    assert E[2].tolist() == [0.5, 0.5] and E[3].tolist() == [0.5, 0.5]
    assert E[0].tolist() == [1.0, 0.0] and E[5].tolist() == [0.0, 1.0]
    with pytest.raises(ValueError):
        transfer_matrix(part, grid, breakpoint="left")


def test_probe_points_cover_nodes():
    part = make_partition(0, 1, 4, 2)
    grid = composite_grid(make_basic_rule("gauss", 2), 0, 1, 8)
    pts = probe_points(part, grid, 100)
    for arr in (part.tau, part.breakpoints, grid.nodes):
        assert np.isin(arr, pts).all()
