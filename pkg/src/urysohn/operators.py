"""Urysohn kernels, the Nystrom operator and its derivatives, and the
discrete modified projection operator.

Kernel callbacks are vectorised: they are called with broadcastable arrays
``s`` (column), ``t`` and ``u`` (rows) and must return an array of the
broadcast shape.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import CapabilityError, NumericDomainError
from .projection import Partition, PiecewisePoly, TransferMatrix, interpolate
from .quadrature import CompositeGrid

KernelFn = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

FD_STEP = 1e-6


@dataclass(frozen=True)
class KernelModel:
    """Kernel ``kappa(s, t, u)`` with its first two partial derivatives in ``u``.

    If ``d_kappa_du`` is omitted a centred finite difference is used and
    ``fd_derivative`` is set so solve reports can flag it.
    """

    kappa: KernelFn
    d_kappa_du: Optional[KernelFn] = None
    d2_kappa_du2: Optional[KernelFn] = None
    linear: bool = False
    name: str = "kernel"

    @classmethod
    def from_linear(cls, k: Callable, name="linear"):
        """Kernel ``k(s, t) * u`` of a Fredholm equation of the second kind."""
        return cls(
            kappa=lambda s, t, u: k(s, t) * u,
            d_kappa_du=lambda s, t, u: k(s, t) + 0.0 * u,
            d2_kappa_du2=lambda s, t, u: np.zeros(np.broadcast(s, t, u).shape),
            linear=True,
            name=name,
        )

    @property
    def fd_derivative(self) -> bool:
        return self.d_kappa_du is None

    def value(self, s, t, u):
        return self.kappa(s, t, u)

    def du(self, s, t, u):
        if self.d_kappa_du is not None:
            return self.d_kappa_du(s, t, u)
        step = FD_STEP * np.maximum(1.0, np.abs(u))
        return (self.kappa(s, t, u + step) - self.kappa(s, t, u - step)) / (2 * step)

    def du2(self, s, t, u):
        if self.d2_kappa_du2 is None:
            raise CapabilityError(f"kernel {self.name!r} has no second u-derivative")
        return self.d2_kappa_du2(s, t, u)


ZERO_KERNEL = KernelModel.from_linear(
    lambda s, t: np.zeros(np.broadcast(s, t).shape), name="zero"
)


def _checked(vals, s, t, u):
    vals = np.asarray(vals, dtype=float)
    bad = ~np.isfinite(vals)
    if bad.any():
        i, j = np.unravel_index(np.argmax(bad), vals.shape)
        raise NumericDomainError(s[i, 0], t[0, j], u[0, j])
    return vals


def _tabulate(fn, grid: CompositeGrid, x, s):
    """Table ``fn(s_i, zeta_j, x_j)`` of shape ``(len(s), m * rho)``."""
    x = np.asarray(x, dtype=float)
    if x.shape != (grid.size,):
        raise ValueError(f"expected {grid.size} grid values, got shape {x.shape}")
    s2 = np.atleast_1d(np.asarray(s, dtype=float))[:, None]
    t2, u2 = grid.nodes[None, :], x[None, :]
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        vals = np.broadcast_to(fn(s2, t2, u2), (s2.shape[0], grid.size))
    return _checked(vals, s2, t2, u2)


def _shape_like(out, s):
    return float(out[0]) if np.ndim(s) == 0 else out.reshape(np.shape(s))


def km_apply(kernel: KernelModel, grid: CompositeGrid, v, s):
    """Nystrom operator ``htilde * sum w_i kappa(s, zeta, v)``."""
    tab = _tabulate(kernel.value, grid, v, s)
    return _shape_like(tab @ grid.weights, s)


def km_jacobian(kernel: KernelModel, grid: CompositeGrid, x, s) -> np.ndarray:
    """Matrix of the Frechet derivative at ``x``, rows indexed by ``s``."""
    return _tabulate(kernel.du, grid, x, s) * grid.weights[None, :]


def km_derivative_apply(kernel: KernelModel, grid: CompositeGrid, x, v, s):
    v = np.asarray(v, dtype=float)
    return _shape_like(km_jacobian(kernel, grid, x, s) @ v, s)


def km_second_derivative_apply(kernel: KernelModel, grid: CompositeGrid, x, v1, v2, s):
    tab = _tabulate(kernel.du2, grid, x, s)
    prod = grid.weights * np.asarray(v1, dtype=float) * np.asarray(v2, dtype=float)
    return _shape_like(tab @ prod, s)


def sample_at_slots(x, grid: CompositeGrid, E: TransferMatrix | None = None):
    """Values of an evaluable ``x`` at the quadrature slots.

    Piecewise polynomials and solutions know their own slot values (a
    breakpoint node takes the limit from its own cell); anything else is
    evaluated pointwise.
    """
    if isinstance(x, PiecewisePoly):
        if E is None:
            raise ValueError("a transfer matrix is needed to sample a piecewise polynomial")
        return E @ x.values
    slot_values = getattr(x, "grid_values", None)
    if slot_values is not None:
        return np.asarray(slot_values, dtype=float)
    return np.asarray(x(grid.nodes), dtype=float)


def modified_nodal_apply(kernel, grid, partition, E, u, v, s):
    """Modified operator for an argument known by its values ``u`` at tau and
    ``v`` at the quadrature slots."""
    Eu = E @ np.asarray(u, dtype=float)
    pts = np.concatenate([partition.tau, np.atleast_1d(np.asarray(s, dtype=float))])
    kv = km_apply(kernel, grid, v, pts)
    kq = km_apply(kernel, grid, Eu, pts)
    nt = partition.size
    correction = interpolate(partition, kv[:nt] - kq[:nt])
    out = correction(pts[nt:]) + kq[nt:]
    return _shape_like(np.asarray(out), s)


def modified_apply(kernel, grid: CompositeGrid, partition: Partition, E: TransferMatrix, x, s):
    """Discrete modified projection operator applied to ``x``, evaluated at ``s``.

    Computes ``Q K_m(x) + K_m(Q x) - Q K_m(Q x)``.
    """
    u = x.values if isinstance(x, PiecewisePoly) else np.asarray(x(partition.tau), dtype=float)
    v = sample_at_slots(x, grid, E)
    return modified_nodal_apply(kernel, grid, partition, E, u, v, s)
