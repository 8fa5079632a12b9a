"""Deterministic tabletop simulator for a rigid gripper with switchable
adhesive pads, plus teleoperation/shared/autonomous controllers."""

from .adhesion import (
    AdhesionMode,
    AdhesiveParams,
    ForceTrace,
    PressureState,
    SurfaceDescriptor,
    contact_area,
    compliance,
    fit_fracture_energy,
    force_capacity,
    simulate_indentation,
    switching_ratio,
)
from .control import (
    Belief,
    RationalityModel,
    assist_action,
    autonomous_policy,
    blend,
    choose_grasp,
    controller_step,
    likelihood,
    update_belief,
    weighted_goal_displacement,
)
from .gripper import (
    GraspOutcome,
    GraspType,
    GripperState,
    RIGID,
    RIGID_SOFT,
    attempt_rigid_grasp,
    attempt_soft_grasp,
    hold_check,
    parse_grasp,
    release_rigid,
    set_pad_state,
    soft,
)
from .operator_model import (
    MetricsRow,
    MetricsTable,
    OperatorProfile,
    SyntheticOperator,
    operator_action,
    run_episode,
    run_trials,
)
from .scenario import (
    ScenarioError,
    load_scenario,
    resolve_scenario,
    validate_scenario,
)
from .world import (
    ActionTwist,
    EpisodeResult,
    ObjectState,
    ObjectStatus,
    StepRecord,
    WorldState,
    episode_result,
    nearest_on_table,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "AdhesionMode", "AdhesiveParams", "ForceTrace", "PressureState",
    "SurfaceDescriptor", "contact_area", "compliance", "fit_fracture_energy",
    "force_capacity", "simulate_indentation", "switching_ratio",
    "Belief", "RationalityModel", "assist_action", "autonomous_policy",
    "blend", "choose_grasp", "controller_step", "likelihood", "update_belief",
    "weighted_goal_displacement",
    "GraspOutcome", "GraspType", "GripperState", "RIGID", "RIGID_SOFT",
    "attempt_rigid_grasp", "attempt_soft_grasp", "hold_check", "parse_grasp",
    "release_rigid", "set_pad_state", "soft",
    "MetricsRow", "MetricsTable", "OperatorProfile", "SyntheticOperator",
    "operator_action", "run_episode", "run_trials",
    "ScenarioError", "load_scenario", "resolve_scenario", "validate_scenario",
    "ActionTwist", "EpisodeResult", "ObjectState", "ObjectStatus",
    "StepRecord", "WorldState", "episode_result", "nearest_on_table", "step",
    "__version__",
]
