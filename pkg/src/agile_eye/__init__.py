"""Numerical kinematics toolkit for the orthogonal 3-RRR spherical
parallel wrist (Agile Eye): closed-form inverse and direct kinematics
with all degenerate branches, Jacobian-based singularity classification,
working/assembly mode correspondence, and joint-space sweeps."""

from .config import DEFAULT_CONFIG, ToolConfig, load_config
from .dk import (
    FAMILY_LABELS,
    CascadeIntermediates,
    DkResult,
    JointDegeneracy,
    cascade_intermediates,
    classify_joint_degeneracy,
    self_motion_family,
    solve_dk,
    trivial_orientations,
)
from .exceptions import (
    AgileEyeError,
    DegenerateJoints,
    DenominatorDegenerate,
    MalformedRotation,
    NoMatchingSolution,
    NoSuchMode,
    NotAssembled,
    SingularNoSignature,
    StartNotASolution,
    UnknownFamily,
)
from .ik import IkSolutionSet, LegIkOutcome, leg_ik, solve_ik
from .mechanism import (
    JointTriplet,
    LegAxes,
    base_axes,
    constraint_residuals,
    intermediate_axes,
    leg_axes,
    platform_axes_base,
    platform_axes_home,
    singular_legs,
)
from .modes import (
    SingularityCrossing,
    TrackResult,
    WorkingModeSignature,
    assembly_mode_for,
    assembly_mode_id,
    track_path,
    working_mode_signature,
)
from .singularity import (
    JacobianPair,
    SingularityClass,
    b_diag_closed_form,
    classify_configuration,
    det_a_closed_form,
    family_distance,
    jacobians,
)
from .so3 import (
    EulerFamily,
    EulerZyx,
    axis_angle_rotation,
    canonicalize_euler,
    euler_to_rotation,
    rotation_distance,
    rotation_to_euler,
    validate_rotation,
    wrap_angle,
)
from .sweep import SweepRecord, SweepResult, iter_records, joint_grid, run_sweep

__version__ = "0.1.0"

__all__ = [
    "AgileEyeError",
    "CascadeIntermediates",
    "DEFAULT_CONFIG",
    "DegenerateJoints",
    "DenominatorDegenerate",
    "DkResult",
    "EulerFamily",
    "EulerZyx",
    "FAMILY_LABELS",
    "IkSolutionSet",
    "JacobianPair",
    "JointDegeneracy",
    "JointTriplet",
    "LegAxes",
    "LegIkOutcome",
    "MalformedRotation",
    "NoMatchingSolution",
    "NoSuchMode",
    "NotAssembled",
    "SingularityClass",
    "SingularityCrossing",
    "SingularNoSignature",
    "StartNotASolution",
    "SweepRecord",
    "SweepResult",
    "ToolConfig",
    "TrackResult",
    "UnknownFamily",
    "WorkingModeSignature",
    "assembly_mode_for",
    "assembly_mode_id",
    "axis_angle_rotation",
    "b_diag_closed_form",
    "base_axes",
    "canonicalize_euler",
    "cascade_intermediates",
    "classify_configuration",
    "classify_joint_degeneracy",
    "constraint_residuals",
    "det_a_closed_form",
    "euler_to_rotation",
    "family_distance",
    "intermediate_axes",
    "iter_records",
    "jacobians",
    "joint_grid",
    "leg_axes",
    "leg_ik",
    "load_config",
    "platform_axes_base",
    "platform_axes_home",
    "rotation_distance",
    "rotation_to_euler",
    "run_sweep",
    "self_motion_family",
    "singular_legs",
    "solve_dk",
    "solve_ik",
    "track_path",
    "trivial_orientations",
    "validate_rotation",
    "working_mode_signature",
    "wrap_angle",
]
