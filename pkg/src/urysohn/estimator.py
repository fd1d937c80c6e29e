"""scikit-learn style front end.

``ProjectionSolver`` holds the discretisation as hyper-parameters, so the
usual ``clone`` / ``set_params`` machinery drives parameter sweeps::

    est = ProjectionSolver(method="iterated_modified", n=8, r=1, quad="simpson")
    est.fit(reciprocal_problem(1.0))
    est.predict([0.0, 0.5, 1.0])
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .errors import OutOfDomainError
from .projection import make_partition, transfer_matrix
from .quadrature import composite_grid, make_basic_rule
from .solvers import METHODS, NewtonConfig, solve


def resolve_m(n, m=None, m_rule="p", p=1) -> int:
    if m is not None:
        return int(m)
    if m_rule == "square":
        return n * n
    if m_rule == "p":
        if int(p) != p or p < 1:
            raise ValueError(f"p must be a positive integer, got {p!r}")
        return int(p) * n
    raise ValueError(f"unknown m_rule {m_rule!r}; expected 'p' or 'square'")


class ProjectionSolver(BaseEstimator):
    """Solve ``x - K(x) = f`` with one of the discrete methods.

    Parameters
    ----------
    method : str
        One of ``nystrom``, ``collocation``, ``iterated_collocation``,
        ``modified``, ``iterated_modified``.
    n, r : int
        Number of partition cells and Gauss points per cell.
    quad : {'gauss', 'simpson'}
    rho : int, optional
        Gauss points of the basic quadrature rule; defaults to ``r``.
    m : int, optional
        Quadrature cells. Overrides ``m_rule``/``p`` when given.
    m_rule : {'p', 'square'}
        ``m = p * n`` or ``m = n ** 2``.
    breakpoint : {'cell', 'average'}
        How quadrature slots on interior breakpoints see piecewise
        polynomials.
    """

    def __init__(self, method="iterated_modified", n=4, r=1, quad="gauss", rho=None,
                 m=None, m_rule="p", p=1, breakpoint="cell",
                 tol_residual=1e-12, tol_step=1e-13, max_iter=50):
        self.method = method
        self.n = n
        self.r = r
        self.quad = quad
        self.rho = rho
        self.m = m
        self.m_rule = m_rule
        self.p = p
        self.breakpoint = breakpoint
        self.tol_residual = tol_residual
        self.tol_step = tol_step
        self.max_iter = max_iter

    def _config(self):
        return NewtonConfig(self.tol_residual, self.tol_step, self.max_iter)

    def fit(self, problem, y=None):
        """Discretise and solve ``problem`` (a :class:`~urysohn.problems.Problem`)."""
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        rule = make_basic_rule(self.quad, self.rho if self.rho is not None else self.r)
        m = resolve_m(self.n, self.m, self.m_rule, self.p)
        self.partition_ = make_partition(problem.a, problem.b, self.n, self.r)
        self.grid_ = composite_grid(rule, problem.a, problem.b, m)
        self.transfer_ = None
        if self.method != "nystrom":
            self.transfer_ = transfer_matrix(self.partition_, self.grid_, self.breakpoint)
        self.solution_, self.report_ = solve(
            self.method, problem.kernel, self.grid_, self.partition_, problem.rhs,
            self._config(), E=self.transfer_,
        )
        self.problem_ = problem
        return self

    def predict(self, X):
        """Evaluate the fitted approximation at the points ``X``."""
        check_is_fitted(self, "solution_")
        s = check_array(X, ensure_2d=False, dtype=float).ravel()
        a, b = self.problem_.a, self.problem_.b
        if np.any((s < a) | (s > b)):
            raise OutOfDomainError(f"points must lie in [{a}, {b}]")
        return np.asarray(self.solution_(s), dtype=float)

    def score(self, X, y):
        """Negative sup-norm error against reference values ``y``."""
        return -float(np.max(np.abs(self.predict(X) - np.asarray(y, dtype=float))))
