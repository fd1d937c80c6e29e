"""Uniform partitions, Gauss collocation nodes and interpolatory projection.

Elements of the approximating space are discontinuous piecewise polynomials
of degree <= r-1, stored by their values at the ``r`` Gauss points of each
subinterval.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import IncompatibleGridsError, OutOfDomainError
from .quadrature import CompositeGrid, _frozen, gauss_legendre_points


def barycentric_weights(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return 1.0 / diff.prod(axis=1)


def lagrange_basis(nodes, bary, x) -> np.ndarray:
    """Tabulate the Lagrange basis on ``nodes`` at points ``x``.

    Returns an array of shape ``(len(x), len(nodes))`` computed with the
    second barycentric formula. Points coinciding with a node get the exact
    unit row.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    diff = x[:, None] - nodes[None, :]
    hit = diff == 0.0
    diff[hit] = 1.0
    tab = bary[None, :] / diff
    tab /= tab.sum(axis=1, keepdims=True)
    rows = hit.any(axis=1)
    tab[rows] = hit[rows].astype(float)
    return tab


@dataclass(frozen=True, eq=False)
class Partition:
    """Uniform partition of [a, b] into ``n`` cells with ``r`` Gauss nodes each.

    ``tau`` is ordered cell-major: ``tau[k * r + i] = t_k + q_i h``.
    """

    a: float
    b: float
    n: int
    r: int
    h: float = field(init=False)
    breakpoints: np.ndarray = field(init=False)
    gauss: np.ndarray = field(init=False)
    bary: np.ndarray = field(init=False)
    tau: np.ndarray = field(init=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        for name in ("n", "r"):
            val = getattr(self, name)
            if int(val) != val or val < 1:
                raise ValueError(f"{name} must be a positive integer, got {val!r}")
        h = (self.b - self.a) / self.n
        bp = self.a + h * np.arange(self.n + 1)
        bp[-1] = self.b
        q = np.asarray(gauss_legendre_points(self.r))
        tau = (bp[:-1, None] + q[None, :] * h).ravel()
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "breakpoints", _frozen(bp))
        object.__setattr__(self, "gauss", _frozen(q))
        object.__setattr__(self, "bary", _frozen(barycentric_weights(q)))
        object.__setattr__(self, "tau", _frozen(tau))

    @property
    def size(self) -> int:
        return self.n * self.r

    def locate(self, s):
        """Cell index (0-based) and local coordinate in [0, 1] for each ``s``.

        Interior breakpoints belong to the cell on their right; ``s = b``
        belongs to the last cell.
        """
        s = np.atleast_1d(np.asarray(s, dtype=float))
        if np.any((s < self.a) | (s > self.b)) or np.any(np.isnan(s)):
            bad = s[~((s >= self.a) & (s <= self.b))][0]
            raise OutOfDomainError(f"s={bad!r} outside [{self.a}, {self.b}]")
        k = np.minimum(np.floor((s - self.a) / self.h).astype(int), self.n - 1)
        local = (s - self.breakpoints[k]) / self.h
        return k, local


def make_partition(a: float, b: float, n: int, r: int) -> Partition:
    return Partition(float(a), float(b), n, r)


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    """Element of the piecewise-polynomial space, in nodal (Lagrange) form."""

    partition: Partition
    values: np.ndarray

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != (self.partition.size,):
            raise ValueError(
                f"expected {self.partition.size} nodal values, got shape {vals.shape}"
            )
        object.__setattr__(self, "values", _frozen(vals))

    def __call__(self, s):
        return evaluate_pp(self, s)


def interpolate(partition: Partition, values) -> PiecewisePoly:
    """The unique element of the space matching ``values`` at ``partition.tau``."""
    return PiecewisePoly(partition, values)


def project(partition: Partition, g) -> PiecewisePoly:
    """Interpolatory projection of a pointwise-evaluable function ``g``."""
    if isinstance(g, PiecewisePoly) and g.partition is partition:
        return g
    return interpolate(partition, np.asarray(g(partition.tau), dtype=float))


def evaluate_pp(pp: PiecewisePoly, s):
    part = pp.partition
    scalar = np.ndim(s) == 0
    k, local = part.locate(np.ravel(s))
    tab = lagrange_basis(part.gauss, part.bary, local)
    coeffs = pp.values.reshape(part.n, part.r)[k]
    out = np.einsum("ij,ij->i", tab, coeffs)
    return float(out[0]) if scalar else out.reshape(np.shape(s))


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Dense map from values at ``tau`` to values at the quadrature slots.

    Each quadrature slot is assigned to the partition cell that contains its
    composite cell, so a closed-rule node sitting on a breakpoint takes the
    limit from its own cell.
    """

    matrix: np.ndarray
    cell: np.ndarray
    p: int

    def __matmul__(self, other):
        return self.matrix @ other

    @property
    def T(self):
        return self.matrix.T

    @property
    def shape(self):
        return self.matrix.shape


def transfer_matrix(partition: Partition, grid: CompositeGrid, breakpoint="cell") -> TransferMatrix:
    """Map nodal values at ``tau`` to values at the quadrature slots.

    With ``breakpoint="cell"`` every slot uses the polynomial of its own
    cell. With ``breakpoint="average"`` slots lying on an interior
    breakpoint take the mean of the two one-sided limits, which is what a
    closed rule with merged endpoint nodes sees.
    """
    if not (np.isclose(partition.a, grid.a) and np.isclose(partition.b, grid.b)):
        raise IncompatibleGridsError("partition and grid cover different intervals")
    if grid.m % partition.n:
        raise IncompatibleGridsError(
            f"m={grid.m} is not a multiple of n={partition.n}"
        )
    if breakpoint not in ("cell", "average"):
        raise ValueError(f"breakpoint must be 'cell' or 'average', got {breakpoint!r}")
    p = grid.m // partition.n
    rho, r, n = grid.rule.rho, partition.r, partition.n
    nu = np.arange(p)
    # local coordinate (nu + mu_i)/p of every slot inside its cell
    local = ((nu[:, None] + grid.rule.nodes[None, :]) / p).ravel()
    block = lagrange_basis(partition.gauss, partition.bary, local)
    mat = np.kron(np.eye(n), block)
    cell = np.repeat(np.arange(n), p * rho)
    if breakpoint == "average" and n > 1:
        left = lagrange_basis(partition.gauss, partition.bary, [1.0])[0]
        right = lagrange_basis(partition.gauss, partition.bary, [0.0])[0]
        avg = 0.5 * np.concatenate([left, right])
        per_cell = p * rho
        for k in range(n - 1):
            cols = slice(k * r, (k + 2) * r)
            if local[-1] == 1.0:
                mat[(k + 1) * per_cell - 1] = 0.0
                mat[(k + 1) * per_cell - 1, cols] = avg
            if local[0] == 0.0:
                mat[(k + 1) * per_cell] = 0.0
                mat[(k + 1) * per_cell, cols] = avg
    return TransferMatrix(_frozen(mat), _frozen(cell), p)


def psi(partition_or_q, t):
    """Nodal polynomial ``(t - q_1) ... (t - q_r)`` of the Gauss points."""
    q = getattr(partition_or_q, "gauss", partition_or_q)
    t = np.asarray(t, dtype=float)
    return np.prod(t[..., None] - np.asarray(q), axis=-1)


def psi_sup_norm(q) -> float:
    # Psi is a multiple of the shifted Legendre polynomial, whose modulus on
    # [0, 1] peaks at the endpoints.
    return float(abs(psi(q, 1.0)))


def probe_points(partition: Partition, grid: CompositeGrid | None = None, count=1000):
    """Sup-norm probe set: uniform points plus tau, quadrature nodes,
    breakpoints and cell midpoints."""
    pts = [
        np.linspace(partition.a, partition.b, count),
        partition.tau,
        partition.breakpoints,
        0.5 * (partition.breakpoints[:-1] + partition.breakpoints[1:]),
    ]
    if grid is not None:
        pts.append(grid.nodes)
    return np.unique(np.concatenate(pts))


def interp_error_bound_check(partition: Partition, x, deriv_bound: float, probe_count=1000):
    """Measured sup error of the projection of ``x`` against the classical bound.

    ``deriv_bound`` is a bound on the sup norm of the r-th derivative of
    ``x``. Returns ``(measured, bound)`` and raises ``AssertionError`` if the
    bound is violated.
    """
    r = partition.r
    pts = probe_points(partition, count=probe_count)
    measured = float(np.max(np.abs(x(pts) - project(partition, x)(pts))))
    bound = psi_sup_norm(partition.gauss) / factorial(r) * deriv_bound * partition.h**r
    scale = float(np.max(np.abs(x(pts)))) if pts.size else 0.0
    # allow rounding noise when the bound vanishes (polynomials of degree < r)
    assert measured <= bound * (1 + 1e-6) + 64 * np.finfo(float).eps * scale, (measured, bound)
    return measured, bound
