"""Error measurement, empirical orders of convergence and convergence tables."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .projection import make_partition, probe_points, psi
from .quadrature import BasicRule


def sup_error(approx, exact, probe_count: int = 1000, partition=None, grid=None) -> float:
    """Max of ``|approx - exact|`` over uniform probes plus the method's nodes.

    ``partition`` and ``grid`` default to the ones carried by ``approx``.
    """
    partition = partition if partition is not None else getattr(approx, "partition", None)
    grid = grid if grid is not None else getattr(approx, "grid", None)
    if partition is not None:
        pts = probe_points(partition, grid, probe_count)
    else:
        a, b = grid.a, grid.b
        pts = np.unique(np.concatenate([np.linspace(a, b, probe_count), grid.nodes]))
    return float(np.max(np.abs(np.asarray(approx(pts)) - np.asarray(exact(pts)))))


def eoc(e_coarse: float, e_fine: float) -> Optional[float]:
    """``log2(e_coarse / e_fine)``; ``None`` when either error is not positive."""
    if not (e_coarse > 0 and e_fine > 0) or not np.isfinite([e_coarse, e_fine]).all():
        return None
    return float(np.log2(e_coarse) - np.log2(e_fine))


def rate_fit(h_list, e_list) -> float:
    """Least-squares slope of ``log e`` against ``log h``."""
    h = np.asarray(h_list, dtype=float)
    e = np.asarray(e_list, dtype=float)
    if h.shape != e.shape or h.size < 2:
        raise ValueError("need two or more (h, e) pairs of equal length")
    if np.any(h <= 0) or np.any(e <= 0):
        raise ValueError("h and e must be positive")
    if np.ptp(np.log(h)) == 0:
        raise ValueError("all h are equal; slope undefined")
    slope, _ = np.polyfit(np.log(h), np.log(e), 1)
    return float(slope)


def lemma31_residual(r: int, p: int, rule: BasicRule, j: int) -> float:
    """Composite-rule moment ``sum_nu sum_i w_i t^j Psi(t)`` at ``t = (nu-1+mu_i)/p``.

    Vanishes for ``j <= r-1`` whenever the rule has degree of precision at
    least ``2r - 1``.
    """
    q = make_partition(0.0, 1.0, 1, r).gauss
    t = ((np.arange(p)[:, None] + rule.nodes[None, :]) / p).ravel()
    w = np.tile(rule.weights, p)
    return float(np.sum(w * t**j * psi(q, t)))


@dataclass
class ConvergenceRow:
    n: int
    m: int
    method: str
    sup_error: float
    eoc: Optional[float] = None
    report: str = ""
    converged: bool = True
    label: Optional[int] = None


@dataclass
class ConvergenceTable:
    problem: str
    r: int
    quadrature: str
    m_rule: str
    rows: list = field(default_factory=list)

    @property
    def methods(self):
        seen = []
        for row in self.rows:
            if row.method not in seen:
                seen.append(row.method)
        return seen

    @property
    def failed(self) -> bool:
        return any(not row.converged for row in self.rows)

    def column(self, method, attr="sup_error"):
        return [getattr(row, attr) for row in self.rows if row.method == method]

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "m", "method", "sup_error", "eoc"])
        for row in self.rows:
            writer.writerow([
                row.n, row.m, row.method,
                f"{row.sup_error:.5e}",
                "" if row.eoc is None else f"{row.eoc:.5f}",
            ])
        return buf.getvalue()

    def to_markdown(self) -> str:
        methods = self.methods
        labelled = any(row.label is not None for row in self.rows)
        head = (["N"] if labelled else []) + ["n", "m"]
        for meth in methods:
            head += [f"{meth} error", "eoc"]
        lines = ["| " + " | ".join(head) + " |", "|" + "---|" * len(head)]
        keys = []
        for row in self.rows:
            if (row.n, row.m) not in keys:
                keys.append((row.n, row.m))
        for n, m in keys:
            cells = {row.method: row for row in self.rows if (row.n, row.m) == (n, m)}
            first = next(iter(cells.values()))
            line = ([str(first.label)] if labelled else []) + [str(n), str(m)]
            for meth in methods:
                row = cells.get(meth)
                if row is None:
                    line += ["", ""]
                    continue
                err = f"{row.sup_error:.2e}" if np.isfinite(row.sup_error) else "failed"
                line += [err, "" if row.eoc is None else f"{row.eoc:.2f}"]
            lines.append("| " + " | ".join(line) + " |")
        return "\n".join(lines) + "\n"
