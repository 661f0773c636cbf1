"""Simultaneous root refinement for algebraic, trigonometric and exponential
polynomials with known multiplicities, at configurable binary precision."""

from .convergence import (
    Clause,
    ConditionVerdict,
    ConvergenceParams,
    OrderEstimate,
    check_algebraic,
    check_conditions,
    check_exponential,
    check_trigonometric,
    estimate_order,
    feasible_point_trigonometric,
    max_feasible_c,
)
from .errors import (
    CollisionError,
    DegenerateDenominatorError,
    DegenerateDerivativeError,
    FamilyOverflowError,
    InsufficientDataError,
    InvalidConfigurationError,
    MultirootsError,
    SchemaError,
)
from .polynomials import (
    ALGEBRAIC,
    EXPONENTIAL,
    FAMILIES,
    TRIGONOMETRIC,
    AlgebraicPoly,
    ExpPoly,
    FactoredForm,
    RootConfiguration,
    TrigPoly,
    evaluate,
    evaluate_derivative,
    evaluation_noise,
    expand_from_roots,
    log_derivative_sum,
    magnitude_scale,
)
from .solver import (
    IterationState,
    SolveReport,
    SolveSettings,
    TraceEntry,
    initial_state,
    order_error_sequence,
    simple_root_reduction_residual,
    solve,
    step,
)
from .verification import (
    NewtonTrace,
    VerificationOutcome,
    classical_ehrlich_step,
    newton_with_multiplicity,
    verify_roots,
)

__version__ = "0.1.0"

__all__ = [
    "ALGEBRAIC",
    "EXPONENTIAL",
    "FAMILIES",
    "TRIGONOMETRIC",
    "AlgebraicPoly",
    "Clause",
    "CollisionError",
    "ConditionVerdict",
    "ConvergenceParams",
    "DegenerateDenominatorError",
    "DegenerateDerivativeError",
    "ExpPoly",
    "FactoredForm",
    "FamilyOverflowError",
    "InsufficientDataError",
    "InvalidConfigurationError",
    "IterationState",
    "MultirootsError",
    "NewtonTrace",
    "OrderEstimate",
    "RootConfiguration",
    "SchemaError",
    "SolveReport",
    "SolveSettings",
    "TraceEntry",
    "TrigPoly",
    "VerificationOutcome",
    "check_algebraic",
    "check_conditions",
    "check_exponential",
    "check_trigonometric",
    "classical_ehrlich_step",
    "estimate_order",
    "evaluate",
    "evaluate_derivative",
    "evaluation_noise",
    "expand_from_roots",
    "feasible_point_trigonometric",
    "initial_state",
    "log_derivative_sum",
    "magnitude_scale",
    "max_feasible_c",
    "newton_with_multiplicity",
    "order_error_sequence",
    "simple_root_reduction_residual",
    "solve",
    "step",
    "verify_roots",
]
