"""Structure-preserving integrators for isospectral and Lie-Poisson flows."""

from .errors import (
    AntipodalDegeneracyError,
    CollisionProximityError,
    ConfigError,
    DimensionMismatchError,
    DivergenceDetectedError,
    EigensolverError,
    IsoflowError,
    LinearSolveFailureError,
    NonConvergenceError,
    SingularMatrixError,
)
from .matrixcore import (
    as_square_matrix,
    cayley,
    commutator,
    conjugate_transpose,
    frobenius_inner,
    in_quadratic_algebra,
    spectrum_key,
)
from .scheme import (
    FlowProblem,
    StepReport,
    fixed_point_map,
    solve_stage,
    step,
    step_cayley_form,
    step_stage_form_oracle,
)
from .solvers import SolverConfig, SolverMethod, StepInfo
from .vec3 import (
    Vec3Field,
    as_chain,
    hat,
    step_classical_midpoint,
    step_min_midpoint_r3,
    step_spherical_midpoint,
    vee,
)
from .sl2 import (
    HypChainState,
    HypField,
    l_inner,
    l_product,
    m_correction,
    sl2_to_vec,
    step_hyperbolic_midpoint,
    vec_to_sl2,
)
from .diagnostics import (
    BenchRow,
    DriftSeries,
    OrderEstimate,
    TrajectoryRecord,
    bench_cost,
    estimate_order,
    run_trajectory,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
