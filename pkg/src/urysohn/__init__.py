"""Discrete projection methods for Urysohn and Fredholm integral equations
of the second kind on an interval."""

from .analysis import ConvergenceRow, ConvergenceTable, eoc, lemma31_residual, rate_fit, sup_error
from .errors import (
    CapabilityError,
    ConvergenceError,
    IncompatibleGridsError,
    NumericDomainError,
    OutOfDomainError,
    SingularMatrixError,
)
from .estimator import ProjectionSolver
from .operators import (
    KernelModel,
    km_apply,
    km_derivative_apply,
    km_second_derivative_apply,
    modified_apply,
)
from .problems import Problem, builtin_example_f, get_problem, linear_problem, reciprocal_problem
from .projection import (
    Partition,
    PiecewisePoly,
    TransferMatrix,
    evaluate_pp,
    interp_error_bound_check,
    interpolate,
    make_partition,
    transfer_matrix,
)
from .quadrature import BasicRule, CompositeGrid, composite_grid, gauss_legendre_points, integrate, make_basic_rule
from .solvers import (
    METHODS,
    MethodSolution,
    NewtonConfig,
    SolveReport,
    iterate_solution,
    lu_solve,
    newton_solve,
    solve,
    solve_collocation,
    solve_iterated_modified,
    solve_modified,
    solve_nystrom,
)
from .study import StudyConfig, reference_layout, run_study

__version__ = "0.1.0"
