"""Stick-slip dynamics of a friction-driven wheel on a turntable.

Event-driven simulation of the piecewise-smooth equations of motion,
two-fold singularity location and classification, design-condition
parameter scans, and seeded re-injection ensembles.
"""

__version__ = "0.1.0"

from .model import (
    ContactMode,
    SLIP_NEG,
    SLIP_POS,
    STICK,
    State,
    SystemParams,
    forced_field,
    friction_decomposition,
    friction_lever,
    lateral_velocity,
    lateral_velocity_gradient,
    normal_rate,
    normal_rate_gradient,
    rolling_velocity,
    rolling_velocity_gradient,
    slider_force,
    slip_field,
    to_physical_time,
    vector_field,
)
from .tyre import (
    COMPLETE_SLIP,
    NO_SLIP,
    PARTIAL_SLIP,
    TyreOutput,
    TyreParams,
    deformation_profile,
    force_moment_raw,
    force_moment_scaled,
    slip_angle_rescale,
    slip_boundary,
    specialized_params,
)
from .solver import (
    BLOWUP,
    CROSSING,
    ESCAPING,
    Event,
    IntegratorOptions,
    RegionClass,
    SINGULARITY_HIT,
    SLIDING,
    SLIDING_EXIT,
    STALL,
    SURFACE_HIT,
    TIME_LIMIT,
    TWO_FOLD,
    TrajectorySegment,
    TwoFoldProximityError,
    classify,
    integrate,
    lambda_star,
    sliding_field,
    tangency_curvature,
)
from .singularity import (
    CASE1,
    CASE2,
    CASE3,
    DEGENERATE,
    DesignResult,
    NOT_TEIXEIRA,
    SearchGrid,
    SingularityReport,
    design_singularity,
    eigensystem,
    find_singularities,
    normal_form,
    normal_form_flow,
    tangency_curvatures,
)
from .scan import MASK_NAMES, ScanResult, scan
from .ensemble import EnsembleConfig, EnsembleOutcome, inject, run_ensemble
