"""Fully symmetric PCA learning rules (N2S, M2S and reference rules).

Integrate the rules on an exact covariance matrix, measure convergence, and
check fixed points and their stability.
"""

from .dynamics import (
    BackProjection,
    SimConfig,
    TraceRow,
    approx_backprojection,
    euler_step,
    exact_backprojection,
    integrate,
    model_from_seed,
    run_simulation,
)
from .errors import (
    ConfigurationError,
    ContractError,
    ConvergenceError,
    DivergenceError,
    SingularMatrixError,
)
from .metrics import e1, e2, e2_prime, eigenvalue_estimates, projection_error
from .model import CovarianceModel, desired_fixed_point, make_covariance, preset_eigenvalues
from .rules import (
    RuleSpec,
    compute_factors,
    grad_modified,
    m2s_form1_rhs,
    objective_modified,
    objective_original,
    rule_rhs,
)

__version__ = "0.1.0"
