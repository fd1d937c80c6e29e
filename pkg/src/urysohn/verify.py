"""Self-check suite run by ``urysohn verify``.

Each check returns a :class:`CheckResult`; nothing raises on failure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .analysis import lemma31_residual, rate_fit
from .operators import km_apply, km_derivative_apply
from .problems import RECIPROCAL_KERNEL, linear_problem
from .projection import (
    interp_error_bound_check,
    interpolate,
    make_partition,
    transfer_matrix,
)
from .quadrature import composite_grid, integrate, make_basic_rule
from .solvers import METHODS, solve


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


def default_rules():
    return [make_basic_rule("gauss", k) for k in range(1, 7)] + [make_basic_rule("simpson")]


def check_quadrature_exactness(rules=None) -> CheckResult:
    worst = 0.0
    for rule in rules or default_rules():
        for m in (1, 2, 5):
            grid = composite_grid(rule, 0.0, 1.0, m)
            for j in range(rule.error_order):
                exact = 1.0 / (j + 1)
                err = abs(integrate(grid, grid.nodes**j) - exact) / max(1.0, exact)
                worst = max(worst, err)
    return CheckResult("quadrature exactness", worst <= 1e-12, f"max rel err {worst:.2e}")


def check_projection_reproduction(seed=0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for r in range(1, 5):
        part = make_partition(0.0, 1.0, 3, r)
        coeffs = rng.standard_normal(r)
        poly = np.polynomial.Polynomial(coeffs)
        s = rng.uniform(0.0, 1.0, 100)
        worst = max(worst, float(np.max(np.abs(interpolate(part, poly(part.tau))(s) - poly(s)))))
    return CheckResult("projection reproduction", worst <= 1e-12, f"max err {worst:.2e}")


def check_interpolation_bound() -> CheckResult:
    cases = [
        (lambda t: t**2, 1, 2.0),  # r=1: |x'| <= 2
        (np.sin, 2, 1.0),
        (lambda t: 1.0 / (t + 1.0), 2, 2.0),
        (lambda t: 1.0 / (t + 1.0), 3, 6.0),
    ]
    try:
        for x, r, bound in cases:
            for n in (2, 4, 8):
                interp_error_bound_check(make_partition(0.0, 1.0, n, r), x, bound)
    except AssertionError as exc:
        return CheckResult("interpolation bound", False, f"violated: {exc}")
    return CheckResult("interpolation bound", True, "never violated")


def check_lemma31() -> CheckResult:
    worst = 0.0
    sharp = 0.0
    for r in (1, 2, 3):
        rule = make_basic_rule("gauss", r)
        for p in (1, 2, 3, 4):
            for j in range(r):
                worst = max(worst, abs(lemma31_residual(r, p, rule, j)))
            sharp = max(sharp, abs(lemma31_residual(r, p, rule, r)))
    ok = worst <= 1e-12 and sharp > 1e-6
    return CheckResult("discrete orthogonality of Psi", ok,
                       f"max |residual| j<r {worst:.2e}; max j=r {sharp:.2e}")


def frechet_check(seed=0):
    """Finite-difference and Taylor-remainder checks of the Nystrom derivative.

    Returns ``(max relative FD error, fitted remainder slope)`` for the
    reciprocal kernel.
    """
    rng = np.random.default_rng(seed)
    grid = composite_grid(make_basic_rule("gauss", 2), 0.0, 1.0, 8)
    x = 1.0 / (grid.nodes + 1.0)
    v = np.cos(3.0 * grid.nodes) + 0.1 * rng.standard_normal(grid.size)
    s = np.linspace(0.0, 1.0, 41)
    base = km_apply(RECIPROCAL_KERNEL, grid, x, s)
    deriv = km_derivative_apply(RECIPROCAL_KERNEL, grid, x, v, s)
    eps = 1e-6
    fd = (km_apply(RECIPROCAL_KERNEL, grid, x + eps * v, s) - base) / eps
    rel = float(np.max(np.abs(fd - deriv)) / np.max(np.abs(deriv)))
    epsilons = np.array([1e-2, 1e-3, 1e-4])
    rem = [np.max(np.abs(km_apply(RECIPROCAL_KERNEL, grid, x + e * v, s) - base - e * deriv))
           for e in epsilons]
    return rel, rate_fit(epsilons, rem)


def check_frechet() -> CheckResult:
    rel, slope = frechet_check()
    ok = rel <= 1e-5 and abs(slope - 2.0) <= 0.1
    return CheckResult("Frechet consistency", ok, f"FD rel err {rel:.2e}; remainder slope {slope:.3f}")


def _local_lagrange(q, x):
    # Vandermonde route, independent of the barycentric tabulation
    V = np.vander(q, increasing=True)
    X = np.vander(np.atleast_1d(x), len(q), increasing=True)
    return np.linalg.solve(V.T, X.T).T


def dense_linear_oracle(k, f, a, b, n, r, m, rule):
    """Explicit matrix assembly of every method for ``kappa = k(s, t) u``.

    Returns ``{method: (values at tau, values at quadrature slots)}``.
    """
    h, ht = (b - a) / n, (b - a) / m
    q = make_partition(0.0, 1.0, 1, r).gauss
    tau = np.concatenate([a + k_ * h + q * h for k_ in range(n)])
    zeta = np.concatenate([a + j * ht + rule.nodes * ht for j in range(m)])
    w = np.tile(rule.weights * ht, m)
    p = m // n
    E = np.zeros((zeta.size, tau.size))
    per = p * rule.rho
    for slot in range(zeta.size):
        cell, within = divmod(slot, per)
        nu, i = divmod(within, rule.rho)
        E[slot, cell * r:(cell + 1) * r] = _local_lagrange(q, (nu + rule.nodes[i]) / p)
    K_tz = k(tau[:, None], zeta[None, :]) * w
    K_zz = k(zeta[:, None], zeta[None, :]) * w
    f_t, f_z = f(tau), f(zeta)
    nt, nz = tau.size, zeta.size
    out = {}

    v = np.linalg.solve(np.eye(nz) - K_zz, f_z)
    out["nystrom"] = (f_t + K_tz @ v, v)

    u = np.linalg.solve(np.eye(nt) - K_tz @ E, f_t)
    out["collocation"] = (u, E @ u)
    out["iterated_collocation"] = (f_t + K_tz @ E @ u, f_z + K_zz @ E @ u)

    # operators on the (tau, slot) representation of a function
    N = nt + nz
    Kmat = np.zeros((N, N))
    Kmat[:nt, nt:] = K_tz
    Kmat[nt:, nt:] = K_zz
    Qmat = np.zeros((N, N))
    Qmat[:nt, :nt] = np.eye(nt)
    Qmat[nt:, :nt] = E
    Kmod = Qmat @ Kmat + Kmat @ Qmat - Qmat @ Kmat @ Qmat
    z = np.linalg.solve(np.eye(N) - Kmod, np.concatenate([f_t, f_z]))
    out["modified"] = (z[:nt], z[nt:])
    out["iterated_modified"] = (f_t + K_tz @ z[nt:], f_z + K_zz @ z[nt:])
    return out


LINEAR_ORACLE_CASES = ((1, 2, 4, 1), (2, 2, 4, 2))  # (r, n, m, gauss rho)


def linear_oracle_errors(cases=LINEAR_ORACLE_CASES):
    """Max nodal discrepancy between each solver and the dense oracle."""
    prob = linear_problem()
    k = lambda s, t: 1.0 / (s + t + 2.0)
    errors = {}
    for r, n, m, rho in cases:
        rule = make_basic_rule("gauss", rho)
        oracle = dense_linear_oracle(k, prob.rhs, 0.0, 1.0, n, r, m, rule)
        part = make_partition(0.0, 1.0, n, r)
        grid = composite_grid(rule, 0.0, 1.0, m)
        E = transfer_matrix(part, grid)
        for method in METHODS:
            sol, _ = solve(method, prob.kernel, grid, part, prob.rhs, E=E)
            ref_tau, ref_slots = oracle[method]
            err = max(np.max(np.abs(sol(part.tau) - ref_tau)),
                      np.max(np.abs(sol.grid_values - ref_slots)))
            errors[(r, n, m, method)] = float(err)
    return errors


def check_linear_oracle() -> CheckResult:
    errors = linear_oracle_errors()
    worst = max(errors.values())
    return CheckResult("linear oracle equivalence", worst <= 1e-10, f"max nodal diff {worst:.2e}")


def run_verify(rules=None) -> list:
    return [
        check_quadrature_exactness(rules),
        check_projection_reproduction(),
        check_interpolation_bound(),
        check_lemma31(),
        check_frechet(),
        check_linear_oracle(),
    ]
