"""Deterministic kinematic tabletop world stepped at a fixed 20 Hz.

The end effector is velocity-controlled and kinematic; objects either rest
on the table plane (z = 0), track the gripper rigidly while held, sit in
the bin, or are flagged dropped after a failed hold check.  step() is a
pure function: the same state and action always produce the same state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Mapping, Optional, Sequence

from .adhesion import PressureState, SurfaceDescriptor
from .gripper import (
    Binding,
    GraspType,
    GripperState,
    attempt_rigid_grasp,
    attempt_soft_grasp,
    complete_pad_transitions,
    hold_check,
    release_rigid,
    set_pad_state,
    CONTACT_TOLERANCE,
    STRADDLE_TOLERANCE,
)

DT = 0.05  # s, one control tick
V_MAX = 0.25  # m/s, end-effector speed limit
EPISODE_TIMEOUT_STEPS = 2400  # 2 minutes of simulated time

WORKSPACE_MIN = (-0.6, -0.45, 0.0)
WORKSPACE_MAX = (0.6, 0.45, 0.4)

GRASP_COMMANDS = ("close_rigid", "open_rigid", "pad_inflate", "pad_neutral", "pad_vacuum")

_PAD_TARGETS = {
    "pad_inflate": PressureState.POSITIVE,
    "pad_neutral": PressureState.NEUTRAL,
    "pad_vacuum": PressureState.NEGATIVE,
}


class ObjectStatus(Enum):
    ON_TABLE = "on_table"
    HELD = "held"
    IN_BIN = "in_bin"
    DROPPED = "dropped"


@dataclass(frozen=True)
class ObjectState:
    object_id: str
    position: tuple[float, float, float]  # base-center
    surface: SurfaceDescriptor
    status: ObjectStatus = ObjectStatus.ON_TABLE

    @property
    def top_point(self) -> tuple[float, float, float]:
        x, y, z = self.position
        return (x, y, z + self.surface.height)


@dataclass(frozen=True)
class ActionTwist:
    """One tick of commanded end-effector velocity plus an optional grasp
    command.  Speeds above V_MAX are scaled back at construction."""

    v: tuple[float, float, float] = (0.0, 0.0, 0.0)
    grasp_cmd: Optional[str] = None

    def __post_init__(self) -> None:
        if self.grasp_cmd is not None and self.grasp_cmd not in GRASP_COMMANDS:
            raise ValueError(f"unknown grasp command {self.grasp_cmd!r}")
        speed = math.sqrt(self.v[0] ** 2 + self.v[1] ** 2 + self.v[2] ** 2)
        if speed > V_MAX:
            s = V_MAX / speed
            object.__setattr__(self, "v", (self.v[0] * s, self.v[1] * s, self.v[2] * s))

    @property
    def is_active(self) -> bool:
        return self.v != (0.0, 0.0, 0.0) or self.grasp_cmd is not None


@dataclass(frozen=True)
class WorldState:
    time: float
    ee_pose: tuple[float, float, float]
    ee_vel: tuple[float, float, float]
    gripper: GripperState
    objects: Mapping[str, ObjectState]
    bin_min: tuple[float, float, float]
    bin_max: tuple[float, float, float]
    rng_seed: int = 0
    path_length: float = 0.0

    def in_bin(self, point: tuple[float, float, float]) -> bool:
        return (self.bin_min[0] <= point[0] <= self.bin_max[0]
                and self.bin_min[1] <= point[1] <= self.bin_max[1])

    @property
    def bin_center(self) -> tuple[float, float, float]:
        return (
            0.5 * (self.bin_min[0] + self.bin_max[0]),
            0.5 * (self.bin_min[1] + self.bin_max[1]),
            0.0,
        )

    def on_table(self) -> tuple[ObjectState, ...]:
        return tuple(o for o in self.objects.values() if o.status is ObjectStatus.ON_TABLE)


def nearest_on_table(world: WorldState, point: tuple[float, float, float]
                     ) -> Optional[ObjectState]:
    """Closest tabled object by horizontal distance; ties break by id."""
    best: Optional[tuple[float, str]] = None
    for o in world.objects.values():
        if o.status is not ObjectStatus.ON_TABLE:
            continue
        d = math.hypot(o.position[0] - point[0], o.position[1] - point[1])
        key = (d, o.object_id)
        if best is None or key < best:
            best = key
    return world.objects[best[1]] if best else None


def _clamp_workspace(p: tuple[float, float, float]) -> tuple[float, float, float]:
    return (
        min(max(p[0], WORKSPACE_MIN[0]), WORKSPACE_MAX[0]),
        min(max(p[1], WORKSPACE_MIN[1]), WORKSPACE_MAX[1]),
        min(max(p[2], WORKSPACE_MIN[2]), WORKSPACE_MAX[2]),
    )


def _settle(world_bin_test, obj: ObjectState) -> ObjectState:
    """Rest a freed object on the plane; inside the bin region it is binned."""
    x, y, _ = obj.position
    status = ObjectStatus.IN_BIN if world_bin_test((x, y, 0.0)) else ObjectStatus.ON_TABLE
    return replace(obj, position=(x, y, 0.0), status=status)


def _soft_candidate(gripper: GripperState, pad: int,
                    objects: Mapping[str, ObjectState]) -> Optional[ObjectState]:
    """Tabled object whose top face sits under the pad within tolerance."""
    pad_face = gripper.pad_center(pad)
    best: Optional[tuple[float, str]] = None
    for o in objects.values():
        if o.status is not ObjectStatus.ON_TABLE:
            continue
        if abs(pad_face[2] - o.surface.height) > CONTACT_TOLERANCE:
            continue
        d = math.hypot(pad_face[0] - o.position[0], pad_face[1] - o.position[1])
        if d > gripper.params.pad_radius:
            continue
        key = (d, o.object_id)
        if best is None or key < best:
            best = key
    return objects[best[1]] if best else None


def _rigid_candidate(gripper: GripperState,
                     objects: Mapping[str, ObjectState]) -> Optional[ObjectState]:
    """Tabled object straddled by the jaw at the current pose."""
    best: Optional[tuple[float, str]] = None
    for o in objects.values():
        if o.status is not ObjectStatus.ON_TABLE:
            continue
        d = math.hypot(gripper.pose[0] - o.position[0], gripper.pose[1] - o.position[1])
        if d > STRADDLE_TOLERANCE or gripper.pose[2] > o.surface.height:
            continue
        key = (d, o.object_id)
        if best is None or key < best:
            best = key
    return objects[best[1]] if best else None


def step(world: WorldState, action: ActionTwist) -> WorldState:
    """Advance the world one tick under the given action.

    Sub-step order (fixed, for determinism): move the end effector; complete
    due pad transitions (releases, then grasp checks on newly vacuumed
    pads); dispatch the grasp command; carry held objects; hold-check under
    the finite-difference vertical acceleration; settle freed objects.
    """
    t = world.time + DT
    old_pose = world.ee_pose
    new_pose = _clamp_workspace((
        old_pose[0] + action.v[0] * DT,
        old_pose[1] + action.v[1] * DT,
        old_pose[2] + action.v[2] * DT,
    ))
    actual_v = (
        (new_pose[0] - old_pose[0]) / DT,
        (new_pose[1] - old_pose[1]) / DT,
        (new_pose[2] - old_pose[2]) / DT,
    )
    accel_z = (actual_v[2] - world.ee_vel[2]) / DT

    gripper = replace(world.gripper, pose=new_pose)
    objects = dict(world.objects)
    freed: list[str] = []

    # Pad transitions commanded on earlier ticks come due.
    gripper, released, armed = complete_pad_transitions(gripper, t)
    freed.extend(released)
    for pad, mode in armed:
        candidate = _soft_candidate(gripper, pad, objects)
        if candidate is None:
            continue
        outcome = attempt_soft_grasp(gripper, pad, candidate.surface, mode,
                                     object_position=candidate.position)
        if outcome.held:
            offset = (
                candidate.position[0] - new_pose[0],
                candidate.position[1] - new_pose[1],
                candidate.position[2] - new_pose[2],
            )
            binding = Binding(candidate.object_id, outcome.grasp, outcome.capacity,
                              candidate.surface.mass, offset)
            gripper = replace(gripper, bindings=gripper.bindings + (binding,))
            objects[candidate.object_id] = replace(candidate, status=ObjectStatus.HELD)

    cmd = action.grasp_cmd
    if cmd == "close_rigid":
        if gripper.rigid_binding() is None:
            candidate = _rigid_candidate(gripper, objects)
            if candidate is None:
                gripper = replace(gripper, aperture=0.0)
            else:
                outcome = attempt_rigid_grasp(gripper, candidate.surface,
                                              object_position=candidate.position)
                if outcome.held:
                    offset = (
                        candidate.position[0] - new_pose[0],
                        candidate.position[1] - new_pose[1],
                        candidate.position[2] - new_pose[2],
                    )
                    binding = Binding(candidate.object_id, outcome.grasp,
                                      outcome.capacity, candidate.surface.mass, offset)
                    width = 2.0 * candidate.surface.contact_radius
                    gripper = replace(gripper, bindings=gripper.bindings + (binding,),
                                      aperture=min(width, gripper.max_aperture))
                    objects[candidate.object_id] = replace(candidate,
                                                           status=ObjectStatus.HELD)
                else:
                    gripper = replace(gripper, aperture=0.0)
    elif cmd == "open_rigid":
        gripper, released = release_rigid(gripper)
        freed.extend(released)
    elif cmd in _PAD_TARGETS:
        target = _PAD_TARGETS[cmd]
        for pad in range(len(gripper.pads)):
            gripper = set_pad_state(gripper, pad, target, t)

    # Held objects track the gripper rigidly.
    for b in gripper.bindings:
        obj = objects[b.object_id]
        objects[b.object_id] = replace(obj, position=(
            new_pose[0] + b.grab_offset[0],
            new_pose[1] + b.grab_offset[1],
            new_pose[2] + b.grab_offset[2],
        ), status=ObjectStatus.HELD)

    gripper, dropped = hold_check(gripper, accel_z)
    for oid in dropped:
        obj = objects[oid]
        objects[oid] = replace(obj, position=(obj.position[0], obj.position[1], 0.0),
                               status=ObjectStatus.DROPPED)

    for oid in freed:
        objects[oid] = _settle(world.in_bin, objects[oid])

    moved = math.dist(new_pose, old_pose)
    return replace(world, time=t, ee_pose=new_pose, ee_vel=actual_v, gripper=gripper,
                   objects=objects, path_length=world.path_length + moved)


@dataclass(frozen=True)
class StepRecord:
    """One tick of the episode log used for metrics."""

    ee_pose: tuple[float, float, float]
    moved: float  # |delta ee_pose| this tick
    human_active: bool
    target_grasp: Optional[GraspType] = None


@dataclass(frozen=True)
class EpisodeResult:
    success: bool
    human_input_steps: int
    trajectory_length: float
    wall_steps: int
    grasp_type_used: Optional[GraspType]


def episode_result(world: WorldState, log: Sequence[StepRecord],
                   target: str) -> EpisodeResult:
    """Summarize one episode for the given target object."""
    if target not in world.objects:
        raise KeyError(f"unknown target object {target!r}")
    trajectory = 0.0
    grasp_used: Optional[GraspType] = None
    inputs = 0
    for rec in log:
        trajectory += rec.moved
        if rec.human_active:
            inputs += 1
        if grasp_used is None and rec.target_grasp is not None:
            grasp_used = rec.target_grasp
    return EpisodeResult(
        success=world.objects[target].status is ObjectStatus.IN_BIN,
        human_input_steps=inputs,
        trajectory_length=trajectory,
        wall_steps=len(log),
        grasp_type_used=grasp_used,
    )
