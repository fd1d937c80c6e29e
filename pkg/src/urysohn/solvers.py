"""Dense linear algebra, damped Newton, and the discrete method drivers.

Every driver returns ``(solution, report)``. A solution is callable on
arbitrary points of [a, b] through the method's defining identity; failure
to converge is reported, never raised.
"""

from __future__ import annotations

import dataclasses
import logging
import warnings
from dataclasses import dataclass
from time import perf_counter

import numpy as np
import scipy.linalg

from .errors import SingularMatrixError
from .operators import (
    KernelModel,
    km_apply,
    km_jacobian,
    modified_nodal_apply,
    sample_at_slots,
)
from .projection import Partition, TransferMatrix, interpolate, transfer_matrix
from .quadrature import CompositeGrid

log = logging.getLogger(__name__)

METHODS = ("nystrom", "collocation", "iterated_collocation", "modified", "iterated_modified")

PIVOT_FLOOR = 1e-300


def _norm(x) -> float:
    return float(np.max(np.abs(x))) if np.size(x) else 0.0


def lu_solve(A, b) -> np.ndarray:
    """Solve ``A x = b`` by LU with partial pivoting."""
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"A must be square, got shape {A.shape}")
    if b.shape[0] != A.shape[0]:
        raise ValueError(f"b has {b.shape[0]} rows, A has {A.shape[0]}")
    if not np.all(np.isfinite(A)):
        raise ValueError("A has non-finite entries")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrixError
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(A, check_finite=False)
    if np.min(np.abs(np.diag(lu))) < PIVOT_FLOOR:
        raise SingularMatrixError("pivot below singularity threshold")
    return scipy.linalg.lu_solve((lu, piv), b, check_finite=False)


@dataclass(frozen=True)
class NewtonConfig:
    tol_residual: float = 1e-12
    tol_step: float = 1e-13
    max_iter: int = 50
    damping: float = 0.5
    max_halvings: int = 20

    def __post_init__(self):
        if self.tol_residual <= 0 or self.tol_step <= 0:
            raise ValueError("Newton tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not 0 < self.damping < 1 or self.max_halvings < 0:
            raise ValueError("damping must lie in (0, 1) and max_halvings be non-negative")


@dataclass
class SolveReport:
    method: str
    iterations: int
    residual: float
    converged: bool
    size: int
    wall_time: float
    fd_derivative: bool = False
    message: str = ""

    def summary(self) -> str:
        state = "ok" if self.converged else "FAILED"
        return f"{self.method}: {state} it={self.iterations} res={self.residual:.2e} N={self.size}"


def newton_solve(F, J, x0, cfg: NewtonConfig | None = None, method="newton"):
    """Damped Newton iteration with backtracking on the sup norm of ``F``.

    Returns ``(x, report)``; ``report.converged`` is true only when the final
    residual is within ``cfg.tol_residual``.
    """
    cfg = cfg or NewtonConfig()
    start = perf_counter()
    x = np.array(x0, dtype=float, copy=True)
    r = np.asarray(F(x), dtype=float)
    res = _norm(r)
    it = 0
    message = ""
    while res > cfg.tol_residual and it < cfg.max_iter:
        try:
            dx = lu_solve(J(x), -r)
        except SingularMatrixError as exc:
            message = f"singular Jacobian: {exc}"
            break
        lam = 1.0
        for _ in range(cfg.max_halvings + 1):
            x_new = x + lam * dx
            r_new = np.asarray(F(x_new), dtype=float)
            res_new = _norm(r_new)
            if res_new < res or res_new <= cfg.tol_residual:
                break
            lam *= cfg.damping
        else:
            message = "line search failed"
            break
        it += 1
        step = lam * _norm(dx)
        x, r, res = x_new, r_new, res_new
        log.debug("%s it=%d res=%.3e step=%.3e", method, it, res, step)
        if res > cfg.tol_residual and step <= cfg.tol_step * (1.0 + _norm(x)):
            message = "step tolerance reached before residual tolerance"
            break
    converged = res <= cfg.tol_residual
    if not converged and not message:
        message = f"no convergence in {cfg.max_iter} iterations"
    report = SolveReport(method, it, res, converged, x.size, perf_counter() - start, message=message)
    return x, report


class MethodSolution:
    """Base class for solved approximations.

    Subclasses provide ``grid_values`` (values at the quadrature slots, used
    when the solution is fed back into the Nystrom operator), ``__call__``
    and ``defining_residual``.
    """

    method = "abstract"

    def __init__(self, kernel: KernelModel, grid: CompositeGrid, rhs,
                 partition: Partition | None = None, E: TransferMatrix | None = None):
        self.kernel = kernel
        self.grid = grid
        self.rhs = rhs
        self.partition = partition
        self.E = E
        self.f_grid = np.asarray(rhs(grid.nodes), dtype=float)

    @property
    def a(self):
        return self.grid.a

    @property
    def b(self):
        return self.grid.b

    def __repr__(self):
        n = self.partition.n if self.partition is not None else None
        return f"<{type(self).__name__} method={self.method} m={self.grid.m} n={n}>"


class NystromSolution(MethodSolution):
    method = "nystrom"

    def __init__(self, kernel, grid, rhs, v, **kw):
        super().__init__(kernel, grid, rhs, **kw)
        self.grid_values = np.asarray(v, dtype=float)

    def __call__(self, s):
        return np.asarray(self.rhs(s)) + km_apply(self.kernel, self.grid, self.grid_values, s)

    def defining_residual(self) -> float:
        v = self.grid_values
        return _norm(v - self.f_grid - km_apply(self.kernel, self.grid, v, self.grid.nodes))


class CollocationSolution(MethodSolution):
    method = "collocation"

    def __init__(self, kernel, grid, rhs, partition, E, u):
        super().__init__(kernel, grid, rhs, partition, E)
        self.pp = interpolate(partition, u)
        self.tau_values = self.pp.values
        self.grid_values = E @ self.tau_values

    def __call__(self, s):
        return self.pp(s)

    def defining_residual(self) -> float:
        u = self.tau_values
        f_tau = self.rhs(self.partition.tau)
        return _norm(u - f_tau - km_apply(self.kernel, self.grid, self.grid_values, self.partition.tau))


class ModifiedSolution(MethodSolution):
    method = "modified"

    def __init__(self, kernel, grid, rhs, partition, E, u, v):
        super().__init__(kernel, grid, rhs, partition, E)
        self.tau_values = np.asarray(u, dtype=float)
        self.grid_values = np.asarray(v, dtype=float)

    def __call__(self, s):
        return np.asarray(self.rhs(s)) + modified_nodal_apply(
            self.kernel, self.grid, self.partition, self.E,
            self.tau_values, self.grid_values, s,
        )

    def defining_residual(self) -> float:
        tau = self.partition.tau
        u, v, E = self.tau_values, self.grid_values, self.E
        Eu = E @ u
        kv_tau = km_apply(self.kernel, self.grid, v, tau)
        kq_tau = km_apply(self.kernel, self.grid, Eu, tau)
        kq_grid = km_apply(self.kernel, self.grid, Eu, self.grid.nodes)
        r_tau = u - self.rhs(tau) - kv_tau
        r_grid = v - self.f_grid - E @ kv_tau - kq_grid + E @ kq_tau
        return max(_norm(r_tau), _norm(r_grid))


class IteratedSolution(MethodSolution):
    """One Nystrom sweep ``f + K_m(base)`` applied to a solved approximation."""

    def __init__(self, base: MethodSolution, kernel=None, grid=None, rhs=None):
        kernel = kernel or base.kernel
        grid = grid or base.grid
        rhs = rhs or base.rhs
        super().__init__(kernel, grid, rhs, base.partition, base.E)
        self.base = base
        self.method = "iterated_" + base.method
        self.base_grid_values = sample_at_slots(base, grid, base.E)
        self.grid_values = self.f_grid + km_apply(kernel, grid, self.base_grid_values, grid.nodes)

    def __call__(self, s):
        return np.asarray(self.rhs(s)) + km_apply(self.kernel, self.grid, self.base_grid_values, s)

    def defining_residual(self) -> float:
        return 0.0


def _report(report, method, kernel, **extra):
    return dataclasses.replace(report, method=method, fd_derivative=kernel.fd_derivative, **extra)


def solve_nystrom(kernel: KernelModel, grid: CompositeGrid, rhs, cfg: NewtonConfig | None = None):
    zeta = grid.nodes
    f = np.asarray(rhs(zeta), dtype=float)
    eye = np.eye(grid.size)

    def F(v):
        return v - f - km_apply(kernel, grid, v, zeta)

    def J(v):
        return eye - km_jacobian(kernel, grid, v, zeta)

    v, report = newton_solve(F, J, f, cfg, method="nystrom")
    return NystromSolution(kernel, grid, rhs, v), _report(report, "nystrom", kernel)


def solve_collocation(kernel: KernelModel, grid: CompositeGrid, partition: Partition,
                      E: TransferMatrix | None, rhs, cfg: NewtonConfig | None = None):
    E = E if E is not None else transfer_matrix(partition, grid)
    tau = partition.tau
    f = np.asarray(rhs(tau), dtype=float)
    eye = np.eye(partition.size)

    def F(u):
        return u - f - km_apply(kernel, grid, E @ u, tau)

    def J(u):
        return eye - km_jacobian(kernel, grid, E @ u, tau) @ E.matrix

    u, report = newton_solve(F, J, f, cfg, method="collocation")
    sol = CollocationSolution(kernel, grid, rhs, partition, E, u)
    return sol, _report(report, "collocation", kernel)


def iterate_solution(base: MethodSolution, kernel=None, grid=None, rhs=None) -> IteratedSolution:
    return IteratedSolution(base, kernel, grid, rhs)


def solve_modified(kernel: KernelModel, grid: CompositeGrid, partition: Partition,
                   E: TransferMatrix | None, rhs, cfg: NewtonConfig | None = None,
                   x0: MethodSolution | None = None):
    """Discrete modified projection solve on the coupled ``(u, v)`` system.

    Unknowns are ordered with the ``tau`` block first, then the quadrature
    slot block.
    """
    E = E if E is not None else transfer_matrix(partition, grid)
    tau, zeta = partition.tau, grid.nodes
    nt = partition.size
    Em = E.matrix
    f_tau = np.asarray(rhs(tau), dtype=float)
    f_zeta = np.asarray(rhs(zeta), dtype=float)
    both = np.concatenate([tau, zeta])

    if x0 is None:
        x0, _ = solve_collocation(kernel, grid, partition, E, rhs, cfg)
        u0 = x0.tau_values
        v0 = f_zeta + km_apply(kernel, grid, E @ u0, zeta)
    else:
        u0 = np.asarray(x0(tau), dtype=float)
        v0 = sample_at_slots(x0, grid, E)

    def F(z):
        u, v = z[:nt], z[nt:]
        kv_tau = km_apply(kernel, grid, v, tau)
        kq = km_apply(kernel, grid, Em @ u, both)
        r_tau = u - f_tau - kv_tau
        r_zeta = v - f_zeta - Em @ kv_tau - kq[nt:] + Em @ kq[:nt]
        return np.concatenate([r_tau, r_zeta])

    def J(z):
        u, v = z[:nt], z[nt:]
        a_v = km_jacobian(kernel, grid, v, tau)
        a_q = km_jacobian(kernel, grid, Em @ u, both)
        top = np.hstack([np.eye(nt), -a_v])
        bottom = np.hstack([
            -a_q[nt:] @ Em + Em @ (a_q[:nt] @ Em),
            np.eye(grid.size) - Em @ a_v,
        ])
        return np.vstack([top, bottom])

    z, report = newton_solve(F, J, np.concatenate([u0, v0]), cfg, method="modified")
    sol = ModifiedSolution(kernel, grid, rhs, partition, E, z[:nt], z[nt:])
    return sol, _report(report, "modified", kernel)


def solve_iterated_modified(kernel, grid, partition, E, rhs, cfg=None):
    base, report = solve_modified(kernel, grid, partition, E, rhs, cfg)
    return iterate_solution(base), _report(report, "iterated_modified", kernel)


def solve(method: str, kernel, grid, partition, rhs, cfg=None, E=None):
    """Dispatch on a method tag from ``METHODS``."""
    if method == "nystrom":
        return solve_nystrom(kernel, grid, rhs, cfg)
    E = E if E is not None else transfer_matrix(partition, grid)
    if method == "collocation":
        return solve_collocation(kernel, grid, partition, E, rhs, cfg)
    if method == "iterated_collocation":
        base, report = solve_collocation(kernel, grid, partition, E, rhs, cfg)
        return iterate_solution(base), _report(report, "iterated_collocation", kernel)
    if method == "modified":
        return solve_modified(kernel, grid, partition, E, rhs, cfg)
    if method == "iterated_modified":
        return solve_iterated_modified(kernel, grid, partition, E, rhs, cfg)
    raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
