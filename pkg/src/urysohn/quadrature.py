"""Basic quadrature rules on [0, 1] and their composite versions on [a, b]."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError

MAX_GAUSS_POINTS = 64
_NEWTON_TOL = 1e-14
_NEWTON_MAXITER = 100


def _frozen(a) -> np.ndarray:
    out = np.array(a, dtype=float)
    out.flags.writeable = False
    return out


@dataclass(frozen=True, eq=False)
class BasicRule:
    """Quadrature rule ``int_0^1 f ~ sum_i w_i f(mu_i)``.

    ``error_order`` is the exponent ``d`` of the composite error bound
    ``C |f^(d)| h^d`` (Gauss-rho: ``2 rho``, Simpson: 4), one more than the
    degree of precision.
    """

    nodes: np.ndarray
    weights: np.ndarray
    error_order: int
    name: str

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen(self.nodes))
        object.__setattr__(self, "weights", _frozen(self.weights))
        if self.nodes.shape != self.weights.shape or self.nodes.ndim != 1:
            raise ValueError("nodes and weights must be 1-D arrays of equal length")

    @property
    def rho(self) -> int:
        return self.nodes.size

    @property
    def degree_of_precision(self) -> int:
        return self.error_order - 1


def _legendre(x, k):
    """Return ``(P_k(x), P_{k-1}(x))`` by the three-term recurrence."""
    p_prev, p = np.ones_like(x), x.copy()
    if k == 0:
        return p_prev, np.zeros_like(x)
    for j in range(1, k):
        p_prev, p = p, ((2 * j + 1) * x * p - j * p_prev) / (j + 1)
    return p, p_prev


def _shifted_legendre(t, k):
    """Shifted Legendre polynomial of degree ``k`` on [0, 1] and its derivative."""
    x = 2.0 * t - 1.0
    p, p_prev = _legendre(x, k)
    # P_k'(x) = k (x P_k - P_{k-1}) / (x^2 - 1); chain rule adds the factor 2.
    # The endpoints give inf/nan here; callers only use dp in the interior.
    with np.errstate(divide="ignore", invalid="ignore"):
        dp = 2.0 * k * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


def _gauss_roots(r):
    # Sample in theta = arccos(2t-1) finely enough that each cell holds at
    # most one root, then run Newton safeguarded by bisection in the bracket.
    theta = np.linspace(np.pi, 0.0, 4 * r + 2)
    grid = 0.5 * (1.0 + np.cos(theta))
    vals, _ = _shifted_legendre(grid, r)
    idx = np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]
    if idx.size != r:
        raise ConvergenceError(f"bracketing found {idx.size} roots, expected {r}")
    roots = np.empty(r)
    for k, i in enumerate(idx):
        lo, hi = grid[i], grid[i + 1]
        flo = vals[i]
        # Chebyshev-point initial guess, clipped into the bracket
        t = 0.5 * (1.0 - np.cos((k + 0.75) * np.pi / (r + 0.5)))
        if not lo < t < hi:
            t = 0.5 * (lo + hi)
        for _ in range(_NEWTON_MAXITER):
            p, dp = _shifted_legendre(np.array([t]), r)
            p, dp = p[0], dp[0]
            if np.sign(p) == np.sign(flo):
                lo, flo = t, p
            else:
                hi = t
            step = p / dp
            t_new = t - step
            if not lo <= t_new <= hi:
                t_new = 0.5 * (lo + hi)
            if abs(t_new - t) <= _NEWTON_TOL:
                t = t_new
                break
            t = t_new
        else:
            raise ConvergenceError(f"Newton failed for root {k} of P_{r}")
        roots[k] = t
    return roots


def gauss_legendre_points(r: int) -> np.ndarray:
    """Gauss-Legendre zeros of order ``r`` in (0, 1), increasing."""
    if int(r) != r or r < 1:
        raise ValueError(f"r must be a positive integer, got {r!r}")
    return _frozen(_gauss_roots(int(r)))


def _gauss_weights(q):
    r = q.size
    _, dp = _shifted_legendre(q, r)
    # On [0,1]: w = 1 / (t (1 - t) P~_r'(t)^2)
    return 1.0 / (q * (1.0 - q) * dp * dp)


def _check_moments(nodes, weights, degree, tol=1e-13):
    for j in range(degree + 1):
        err = abs(np.dot(weights, nodes**j) - 1.0 / (j + 1))
        if err > tol:
            raise ConvergenceError(f"rule fails moment {j} by {err:.3e}")


def make_basic_rule(kind: str, rho: int | None = None) -> BasicRule:
    """Build a basic rule on [0, 1].

    Parameters
    ----------
    kind : {'gauss', 'simpson'}
    rho : int
        Number of Gauss points. Ignored for Simpson.
    """
    if kind == "simpson":
        return BasicRule([0.0, 0.5, 1.0], [1 / 6, 4 / 6, 1 / 6], 4, "simpson")
    if kind != "gauss":
        raise ValueError(f"unknown rule kind {kind!r}")
    if rho is None or int(rho) != rho or rho < 1:
        raise ValueError(f"gauss rule needs a positive integer rho, got {rho!r}")
    if rho > MAX_GAUSS_POINTS:
        raise ValueError(f"rho={rho} exceeds supported maximum {MAX_GAUSS_POINTS}")
    rho = int(rho)
    q = np.asarray(gauss_legendre_points(rho))
    w = _gauss_weights(q)
    _check_moments(q, w, 2 * rho - 1, tol=1e-12)
    return BasicRule(q, w, 2 * rho, f"gauss-{rho}")


@dataclass(frozen=True, eq=False)
class CompositeGrid:
    """Composite rule with ``m`` uniform cells on [a, b].

    Nodes are ordered cell-major: slot ``j * rho + i`` holds
    ``s_j + mu_i * htilde``. Closed rules keep duplicate nodes at shared
    cell endpoints, one per cell.
    """

    rule: BasicRule
    a: float
    b: float
    m: int
    htilde: float = field(init=False)
    nodes: np.ndarray = field(init=False)
    weights: np.ndarray = field(init=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got [{self.a}, {self.b}]")
        if int(self.m) != self.m or self.m < 1:
            raise ValueError(f"m must be a positive integer, got {self.m!r}")
        htilde = (self.b - self.a) / self.m
        starts = self.a + htilde * np.arange(self.m)
        nodes = (starts[:, None] + self.rule.nodes[None, :] * htilde).ravel()
        # keep the last node of a closed rule exactly at b
        np.clip(nodes, self.a, self.b, out=nodes)
        weights = np.tile(htilde * self.rule.weights, self.m)
        object.__setattr__(self, "htilde", htilde)
        object.__setattr__(self, "nodes", _frozen(nodes))
        object.__setattr__(self, "weights", _frozen(weights))

    @property
    def size(self) -> int:
        return self.nodes.size

    @property
    def error_order(self) -> int:
        return self.rule.error_order


def composite_grid(rule: BasicRule, a: float, b: float, m: int) -> CompositeGrid:
    return CompositeGrid(rule, float(a), float(b), int(m) if int(m) == m else m)


def integrate(grid: CompositeGrid, samples) -> float:
    """Apply the composite rule to samples of ``f`` at ``grid.nodes``."""
    samples = np.asarray(samples, dtype=float)
    if samples.shape != (grid.size,):
        raise ValueError(
            f"expected {grid.size} samples aligned to the grid, got shape {samples.shape}"
        )
    return float(grid.htilde * (samples.reshape(grid.m, grid.rule.rho) @ grid.rule.weights).sum())
