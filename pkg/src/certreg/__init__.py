"""certreg: certified regularization-parameter selection for linear classifiers.

Computes validation / cross-validation error lower-bound paths as functions of
the L2 regularization parameter and finds parameter values whose error is
provably within a chosen slack of the best achievable over a range.
"""

from .bounds import (
    BoundCoefficients,
    GuaranteeInterval,
    ScoreBoundLine,
    SolutionBounds,
    StaircaseBound,
    coefficients,
    correct_interval,
    lower_bound_path,
    misclassified_interval,
    point_bounds,
    score_bounds,
    upper_bound_path,
)
from .data import (
    Dataset,
    FeatureScaler,
    LabeledInstance,
    SplitSpec,
    parse_libsvm,
    serialize_libsvm,
    split,
    split_holdout,
    split_kfold,
    standardize,
)
from .errors import CertregError, ConfigError, DataError, ParseError, SolverError
from .loss import LossKind, ObjectiveState, loss_subgradient, loss_value, objective_and_subgradient
from .pathalg import (
    BreakpointSet,
    Certificate,
    CertifiedSearch,
    RegPath,
    SearchConfig,
    bound_guided_strategy,
    certify,
    cv_certify,
    find_approx_parameter,
    find_approx_parameter_tricked,
    grid_strategy,
    next_c,
    track_path,
)
from .solver import ApproxSolution, SolverConfig, solve

__version__ = "0.1.0"
