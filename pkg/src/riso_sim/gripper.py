"""RISO gripper state machine: a rigid pinch jaw plus switchable soft pads.

The two grasp families are decoupled — a pad can adhere to one object while
the jaw pinches another.  All operations are pure: they take a GripperState
and return a new one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

from .adhesion import (
    AdhesionMode,
    AdhesiveParams,
    PressureState,
    SurfaceDescriptor,
    force_capacity,
)

GRAVITY = 9.81  # m/s^2

PINCH_FRICTION = 0.6  # jaw-face friction coefficient
SAFETY_FACTOR = 1.5  # required capacity / weight margin at grasp time
CONTACT_TOLERANCE = 0.002  # m, pad face to object top face
MIN_PINCH_WIDTH = 0.003  # m, thinnest object the jaw can hold
MIN_PINCH_HEIGHT = 0.005  # m, finger reach clearance above the table
STRADDLE_TOLERANCE = 0.005  # m, jaw centerline to object centerline


@dataclass(frozen=True)
class GraspType:
    """Family of a grasp: rigid pinch, soft pad (by index), or both."""

    kind: str  # "rigid" | "soft" | "rigid_soft"
    pad: Optional[int] = None

    def __post_init__(self) -> None:
        if self.kind not in ("rigid", "soft", "rigid_soft"):
            raise ValueError(f"unknown grasp kind {self.kind!r}")
        if self.kind == "soft" and (self.pad is None or self.pad < 0):
            raise ValueError("soft grasps need a pad index")
        if self.kind != "soft" and self.pad is not None:
            raise ValueError(f"{self.kind} grasps carry no pad index")

    @property
    def wire_tag(self) -> str:
        if self.kind == "soft":
            return f"soft{self.pad}"
        return self.kind


RIGID = GraspType("rigid")
RIGID_SOFT = GraspType("rigid_soft")


def soft(pad: int = 0) -> GraspType:
    return GraspType("soft", pad)


def parse_grasp(tag: str) -> GraspType:
    if tag == "rigid":
        return RIGID
    if tag == "rigid_soft":
        return RIGID_SOFT
    if tag.startswith("soft"):
        return soft(int(tag[4:] or 0))
    raise ValueError(f"unknown grasp tag {tag!r}")


@dataclass(frozen=True)
class GraspOutcome:
    """Result of a grasp attempt: Held(grasp, capacity) or Failed(reason)."""

    held: bool
    grasp: Optional[GraspType] = None
    capacity: float = 0.0
    reason: Optional[str] = None

    @classmethod
    def held_with(cls, grasp: GraspType, capacity: float) -> "GraspOutcome":
        return cls(held=True, grasp=grasp, capacity=capacity)

    @classmethod
    def failed(cls, reason: str) -> "GraspOutcome":
        return cls(held=False, reason=reason)


@dataclass(frozen=True)
class Binding:
    """One held object: grasp family, recorded capacity, and grip offset."""

    object_id: str
    grasp: GraspType
    capacity: float
    mass: float
    grab_offset: tuple[float, float, float]


@dataclass(frozen=True)
class GripperState:
    aperture: float
    max_aperture: float
    pinch_force: float
    pads: tuple[PressureState, ...]
    # Per-pad pending transition: (target state, simulated completion time).
    pad_pending: tuple[Optional[tuple[PressureState, float]], ...]
    bindings: tuple[Binding, ...]
    pose: tuple[float, float, float]
    pad_offsets: tuple[tuple[float, float, float], ...]
    params: AdhesiveParams

    def __post_init__(self) -> None:
        if not 0.0 <= self.aperture <= self.max_aperture:
            raise ValueError(
                f"aperture {self.aperture} outside [0, {self.max_aperture}]"
            )
        if len(self.pads) != len(self.pad_offsets) or len(self.pads) != len(self.pad_pending):
            raise ValueError("pads, pad_pending and pad_offsets must align")
        for b in self.bindings:
            if b.grasp.kind == "soft" and self.pads[b.grasp.pad] is PressureState.POSITIVE:
                raise ValueError("a pad in the positive state holds nothing via adhesion")

    @classmethod
    def create(cls, n_pads: int = 1, pinch_force: float = 60.0,
               max_aperture: float = 0.08,
               pose: tuple[float, float, float] = (0.0, 0.0, 0.2),
               pad_offsets: Optional[tuple[tuple[float, float, float], ...]] = None,
               params: Optional[AdhesiveParams] = None) -> "GripperState":
        if pad_offsets is None:
            pad_offsets = tuple((0.03 * (i + 1), 0.0, 0.0) for i in range(n_pads))
        return cls(
            aperture=max_aperture,
            max_aperture=max_aperture,
            pinch_force=pinch_force,
            pads=(PressureState.NEUTRAL,) * n_pads,
            pad_pending=(None,) * n_pads,
            bindings=(),
            pose=pose,
            pad_offsets=pad_offsets,
            params=params if params is not None else AdhesiveParams.calibrated(),
        )

    @property
    def held(self) -> tuple[tuple[str, GraspType], ...]:
        return tuple((b.object_id, b.grasp) for b in self.bindings)

    def pad_center(self, pad: int) -> tuple[float, float, float]:
        off = self.pad_offsets[pad]
        return (self.pose[0] + off[0], self.pose[1] + off[1], self.pose[2] + off[2])

    def soft_binding(self, pad: int) -> Optional[Binding]:
        for b in self.bindings:
            if b.grasp.kind == "soft" and b.grasp.pad == pad:
                return b
        return None

    def rigid_binding(self) -> Optional[Binding]:
        for b in self.bindings:
            if b.grasp.kind == "rigid":
                return b
        return None


def set_pad_state(state: GripperState, pad: int, target: PressureState,
                  clock: float) -> GripperState:
    """Command a pad toward a pressure state; completes after switch_latency.

    Commanding the current state cancels any pending transition and is
    otherwise a no-op.  The latest command wins.
    """
    if not 0 <= pad < len(state.pads):
        raise ValueError(f"pad index {pad} out of range for {len(state.pads)} pads")
    pending = list(state.pad_pending)
    if state.pads[pad] is target:
        if pending[pad] is None:
            return state
        pending[pad] = None
        return replace(state, pad_pending=tuple(pending))
    if pending[pad] is not None and pending[pad][0] is target:
        return state  # already in flight; re-commanding must not reset the clock
    pending[pad] = (target, clock + state.params.switch_latency)
    return replace(state, pad_pending=tuple(pending))


def complete_pad_transitions(
    state: GripperState, clock: float
) -> tuple[GripperState, tuple[str, ...], tuple[tuple[int, AdhesionMode], ...]]:
    """Apply pending pad transitions that are due at the given clock.

    Returns (new state, released object ids, armed pads).  A transition to
    positive releases the pad's object; a transition to negative arms the
    pad for a grasp check whose mode is set by the state it came from.
    """
    pads = list(state.pads)
    pending = list(state.pad_pending)
    bindings = list(state.bindings)
    released: list[str] = []
    armed: list[tuple[int, AdhesionMode]] = []
    changed = False
    for i, entry in enumerate(pending):
        if entry is None or entry[1] > clock:
            continue
        target, _ = entry
        prev = pads[i]
        pads[i] = target
        pending[i] = None
        changed = True
        if target is PressureState.POSITIVE:
            for b in list(bindings):
                if b.grasp.kind == "soft" and b.grasp.pad == i:
                    bindings.remove(b)
                    released.append(b.object_id)
        elif target is PressureState.NEGATIVE:
            if prev is PressureState.NEUTRAL:
                armed.append((i, AdhesionMode.NEUTRAL_TO_NEGATIVE))
            elif prev is PressureState.POSITIVE:
                armed.append((i, AdhesionMode.POSITIVE_TO_NEGATIVE))
    if not changed:
        return state, (), ()
    new_state = replace(state, pads=tuple(pads), pad_pending=tuple(pending),
                        bindings=tuple(bindings))
    return new_state, tuple(released), tuple(armed)


def attempt_soft_grasp(state: GripperState, pad: int, surface: SurfaceDescriptor,
                       approach: AdhesionMode,
                       object_position: Optional[tuple[float, float, float]] = None,
                       ) -> GraspOutcome:
    """Adhesion grasp check for one pad against one face.

    The pad must be free, in the approach mode's start state (or already
    switched to its loaded state), and its face within the contact
    tolerance of the object's top face.  Held iff the mode's capacity
    clears the object weight by the safety factor.
    """
    if approach is AdhesionMode.POSITIVE_TO_POSITIVE:
        raise ValueError("the off state cannot initiate a grasp")
    if not 0 <= pad < len(state.pads):
        raise ValueError(f"pad index {pad} out of range for {len(state.pads)} pads")
    if state.soft_binding(pad) is not None:
        raise ValueError(f"pad {pad} is already holding an object")
    if state.pads[pad] not in (approach.start_state, approach.load_state):
        raise ValueError(
            f"pad {pad} is {state.pads[pad].value}, not in the "
            f"{approach.value} start state"
        )
    pad_face = state.pad_center(pad)
    if abs(pad_face[2] - surface.height) > CONTACT_TOLERANCE:
        raise ValueError(
            f"pad face is {abs(pad_face[2] - surface.height):.4f} m from the "
            f"object top face, outside the {CONTACT_TOLERANCE} m contact tolerance"
        )
    if object_position is not None:
        dx = pad_face[0] - object_position[0]
        dy = pad_face[1] - object_position[1]
        if math.hypot(dx, dy) > state.params.pad_radius:
            raise ValueError("object face is not under the pad footprint")
    capacity = force_capacity(surface, approach, state.params)
    if capacity >= surface.mass * GRAVITY * SAFETY_FACTOR:
        return GraspOutcome.held_with(soft(pad), capacity)
    return GraspOutcome.failed("insufficient_capacity")


def attempt_rigid_grasp(state: GripperState, surface: SurfaceDescriptor,
                        object_position: Optional[tuple[float, float, float]] = None,
                        ) -> GraspOutcome:
    """Friction pinch check for the rigid jaw against one object.

    Width is taken as the face diameter.  Held iff friction capacity
    mu * pinch_force clears the object weight by the safety factor.
    """
    if state.rigid_binding() is not None:
        raise ValueError("the rigid jaw is already holding an object")
    if object_position is not None:
        dx = state.pose[0] - object_position[0]
        dy = state.pose[1] - object_position[1]
        if math.hypot(dx, dy) > STRADDLE_TOLERANCE or state.pose[2] > surface.height:
            raise ValueError("fingers are not straddling the object")
    width = 2.0 * surface.contact_radius
    if width > state.max_aperture:
        return GraspOutcome.failed("too_wide")
    if width < MIN_PINCH_WIDTH or surface.height < MIN_PINCH_HEIGHT:
        return GraspOutcome.failed("too_small")
    capacity = PINCH_FRICTION * state.pinch_force
    if capacity >= surface.mass * GRAVITY * SAFETY_FACTOR:
        return GraspOutcome.held_with(RIGID, capacity)
    return GraspOutcome.failed("insufficient_capacity")


def hold_check(state: GripperState, vertical_accel: float
               ) -> tuple[GripperState, tuple[str, ...]]:
    """Drop any binding whose load under the current vertical acceleration
    exceeds its recorded capacity."""
    dropped = tuple(
        b.object_id for b in state.bindings
        if b.mass * (GRAVITY + abs(vertical_accel)) > b.capacity
    )
    if not dropped:
        return state, ()
    kept = tuple(b for b in state.bindings if b.object_id not in dropped)
    return replace(state, bindings=kept), dropped


def release_rigid(state: GripperState) -> tuple[GripperState, tuple[str, ...]]:
    """Open the jaw, releasing any pinched object."""
    released = tuple(b.object_id for b in state.bindings if b.grasp.kind == "rigid")
    kept = tuple(b for b in state.bindings if b.grasp.kind != "rigid")
    return replace(state, aperture=state.max_aperture, bindings=kept), released
