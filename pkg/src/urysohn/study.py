"""Convergence studies over a doubling chain of partitions."""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, fields

import numpy as np
from sklearn.base import clone

from .analysis import ConvergenceRow, ConvergenceTable, eoc, sup_error
from .errors import ConvergenceError, NumericDomainError, SingularMatrixError
from .estimator import ProjectionSolver, resolve_m
from .problems import PROBLEMS, get_problem
from .quadrature import make_basic_rule
from .solvers import METHODS

log = logging.getLogger(__name__)


class ConfigError(ValueError):
    """Invalid study configuration."""


class QuadratureWarning(UserWarning):
    """The quadrature is too weak to expose the projection orders."""


# Layout behind the reference errors. Rows are labelled by N;
# piecewise constants used 2N cells with one Simpson panel per cell and
# merged breakpoint nodes, piecewise linears used N/2 cells with N^2/2
# two-point Gauss cells.
def reference_layout(label: int, r: int) -> dict:
    if r == 1:
        return dict(n=2 * label, m=2 * label, quad="simpson", rho=None, breakpoint="average")
    if r == 2:
        if label % 2:
            raise ConfigError(f"reference layout for r=2 needs even N, got {label}")
        return dict(n=label // 2, m=label * label // 2, quad="gauss", rho=2, breakpoint="cell")
    raise ConfigError("reference layout is only defined for r in {1, 2}")


@dataclass
class StudyConfig:
    problem: str = "reciprocal"
    c: float = 1.0
    methods: tuple = ("modified", "iterated_modified")
    r: int = 1
    ns: tuple = (2, 4, 8, 16, 32)
    quad: str = "simpson"
    rho: int | None = None
    m_rule: str = "p"
    p: int = 1
    layout: str = "direct"
    breakpoint: str = "cell"
    tol_residual: float = 1e-12
    tol_step: float = 1e-13
    max_iter: int = 50
    probe_count: int = 1000
    fmt: str = "csv"

    @classmethod
    def from_dict(cls, data: dict) -> "StudyConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("methods", "ns"):
            if key in data and not isinstance(data[key], (list, tuple)):
                data[key] = [data[key]]
            if key in data:
                data[key] = tuple(data[key])
        return cls(**data)

    def validate(self) -> "StudyConfig":
        if self.problem not in PROBLEMS:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {sorted(PROBLEMS)}")
        if self.problem == "reciprocal" and not self.c > 0:
            raise ConfigError(f"c must be positive so that 1/(t + c) is smooth on [0, 1]; got {self.c!r}")
        if int(self.probe_count) != self.probe_count or self.probe_count < 2:
            raise ConfigError(f"probe count must be an integer >= 2, got {self.probe_count!r}")
        if not self.ns:
            raise ConfigError("n list is empty")
        if any(int(n) != n or n < 1 for n in self.ns):
            raise ConfigError(f"n values must be positive integers, got {list(self.ns)}")
        for lo, hi in zip(self.ns, self.ns[1:]):
            if hi != 2 * lo:
                raise ConfigError(
                    f"n list must be a doubling chain (each n twice the previous); "
                    f"{lo} is followed by {hi}"
                )
        bad = [m for m in self.methods if m not in METHODS]
        if bad or not self.methods:
            raise ConfigError(f"unknown methods {bad}; choose from {list(METHODS)}")
        if int(self.r) != self.r or self.r < 1:
            raise ConfigError(f"r must be a positive integer, got {self.r!r}")
        if self.layout not in ("direct", "reference"):
            raise ConfigError(f"layout must be 'direct' or 'reference', got {self.layout!r}")
        if self.layout == "reference":
            for n in self.ns:
                reference_layout(n, self.r)
            return self
        if self.m_rule not in ("p", "square"):
            raise ConfigError(f"m-rule must be 'p' (m = p*n) or 'square' (m = n^2), got {self.m_rule!r}")
        if self.m_rule == "p" and (int(self.p) != self.p or self.p < 1):
            raise ConfigError(f"m = p*n needs a positive integer p so that n divides m; got p={self.p!r}")
        if self.quad not in ("gauss", "simpson"):
            raise ConfigError(f"quadrature must be 'gauss' or 'simpson', got {self.quad!r}")
        if self.breakpoint not in ("cell", "average"):
            raise ConfigError(f"breakpoint must be 'cell' or 'average', got {self.breakpoint!r}")
        if self.fmt not in ("csv", "markdown"):
            raise ConfigError(f"format must be 'csv' or 'markdown', got {self.fmt!r}")
        return self

    def layout_for(self, n: int) -> dict:
        if self.layout == "reference":
            return reference_layout(n, self.r)
        return dict(n=n, m=resolve_m(n, None, self.m_rule, self.p), quad=self.quad,
                    rho=self.rho, breakpoint=self.breakpoint)


def check_quadrature_balance(config: StudyConfig):
    """Warn when the quadrature violates ``d >= 2r`` or swamps ``h^(3r)``."""
    r = config.r
    for n in config.ns:
        lay = config.layout_for(n)
        rule = make_basic_rule(lay["quad"], lay["rho"] if lay["rho"] is not None else r)
        d = rule.error_order
        if d < 2 * r:
            warnings.warn(f"quadrature order d={d} is below 2r={2 * r}", QuadratureWarning, stacklevel=2)
            return
        h, ht = 1.0 / lay["n"], 1.0 / lay["m"]
        if ht**d > 10.0 * h ** (3 * r):
            warnings.warn(
                f"quadrature error htilde^d={ht ** d:.1e} dominates h^(3r)={h ** (3 * r):.1e} "
                f"at n={lay['n']}; projection orders will be masked",
                QuadratureWarning, stacklevel=2,
            )
            return


def run_study(config: StudyConfig) -> ConvergenceTable:
    config.validate()
    check_quadrature_balance(config)
    problem = get_problem(config.problem, config.c)
    base = ProjectionSolver(r=config.r, tol_residual=config.tol_residual,
                            tol_step=config.tol_step, max_iter=config.max_iter)
    first = config.layout_for(config.ns[0])
    rule = make_basic_rule(first["quad"], first["rho"] if first["rho"] is not None else config.r)
    m_desc = "reference" if config.layout == "reference" else (
        "m=n^2" if config.m_rule == "square" else f"m={config.p}n")
    table = ConvergenceTable(problem.name, config.r, rule.name, m_desc)
    previous = {}
    for label in config.ns:
        lay = config.layout_for(label)
        for method in config.methods:
            est = clone(base).set_params(method=method, **lay)
            row = ConvergenceRow(lay["n"], lay["m"], method, float("nan"),
                                 label=label if config.layout == "reference" else None)
            try:
                est.fit(problem)
            except (NumericDomainError, SingularMatrixError, ConvergenceError) as exc:
                row.converged = False
                row.report = f"{method}: error {exc}"
                log.warning("n=%d %s failed: %s", lay["n"], method, exc)
            else:
                row.converged = est.report_.converged
                row.report = est.report_.summary()
                row.sup_error = sup_error(est.solution_, problem.exact, config.probe_count)
                if not row.converged:
                    log.warning("n=%d %s did not converge: %s", lay["n"], method, est.report_.message)
            prev = previous.get(method)
            if prev is not None and np.isfinite(prev) and np.isfinite(row.sup_error):
                row.eoc = eoc(prev, row.sup_error)
            previous[method] = row.sup_error
            table.rows.append(row)
    return table
