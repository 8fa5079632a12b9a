"""Controllers: Bayesian intent inference, blended assistance, autonomy.

The shared controller maintains a belief over (object, grasp-family)
hypotheses, scores each tick of human velocity against the direction from
the hypothesis' grasp point to the object, assists toward the belief-
weighted goal, and blends by confidence.  The autonomous controller runs
the same approach geometry with a height rule choosing the grasp family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Mapping, Optional

import numpy as np

from .gripper import GraspType, GripperState, RIGID, RIGID_SOFT, soft, CONTACT_TOLERANCE
from .world import (
    ActionTwist,
    DT,
    ObjectState,
    ObjectStatus,
    V_MAX,
    WorldState,
    nearest_on_table,
    step,
)

BETA_DEFAULT = 5.0
EPSILON_FLOOR = 1e-4
ALPHA_MAX = 0.7  # assistance never fully overrides the human
ALIGN_TOLERANCE = 0.01  # m, horizontal alignment before descending
APPROACH_PRESSURE_HEIGHT = 0.03  # m, inflate the pad above this gap
SOFT_INTENT_CONFIDENCE = 0.5  # belief needed before pressure automation acts
AUTONOMOUS_RIGID_HEIGHT = 0.075  # m, strictly taller objects get the rigid jaw
CARRY_HEIGHT = 0.20  # m, transport altitude
V_VERTICAL_MAX = 0.15  # m/s comfort cap; keeps carried loads inside hold margins
RIGID_READY_TOLERANCE = 0.004  # m, jaw centering before closing


def _icosphere_directions(subdivisions: int = 3) -> np.ndarray:
    """Unit vectors of a subdivided icosahedron (642 for 3 subdivisions)."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]

    def norm(v):
        m = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
        return (v[0] / m, v[1] / m, v[2] / m)

    verts = [norm(v) for v in verts]
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(a: int, b: int) -> int:
            key = (a, b) if a < b else (b, a)
            if key not in midpoint:
                va, vb = verts[a], verts[b]
                verts.append(norm(((va[0] + vb[0]) / 2, (va[1] + vb[1]) / 2,
                                   (va[2] + vb[2]) / 2)))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        new_faces = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new_faces += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new_faces
    return np.array(verts, dtype=float)


SPHERE_DIRECTIONS = _icosphere_directions(3)
SPHERE_WEIGHT = 4.0 * math.pi / len(SPHERE_DIRECTIONS)


@dataclass(frozen=True)
class RationalityModel:
    """Boltzmann rationality of the modeled operator."""

    beta: float = BETA_DEFAULT

    def __post_init__(self) -> None:
        if not (self.beta >= 0.0 and math.isfinite(self.beta)):
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")


@dataclass(frozen=True)
class Belief:
    """Probability table over (object_id, grasp) hypotheses.

    Entries are fixed at construction; updates renormalize and then raise
    any entry below EPSILON_FLOOR to the floor, rescaling the rest.
    """

    entries: tuple[tuple[str, GraspType], ...]
    probs: np.ndarray

    @classmethod
    def uniform(cls, world: WorldState, include_rigid_soft: bool = False) -> "Belief":
        grasps: list[GraspType] = [RIGID]
        grasps += [soft(i) for i in range(len(world.gripper.pads))]
        if include_rigid_soft:
            grasps.append(RIGID_SOFT)
        entries = tuple(
            (o.object_id, g)
            for o in sorted(world.on_table(), key=lambda o: o.object_id)
            for g in grasps
        )
        if not entries:
            raise ValueError("no tabled objects to form a belief over")
        return cls(entries=entries, probs=np.full(len(entries), 1.0 / len(entries)))

    @property
    def table(self) -> dict[tuple[str, GraspType], float]:
        return {e: float(p) for e, p in zip(self.entries, self.probs)}

    @property
    def confidence(self) -> float:
        return float(self.probs.max())

    @property
    def argmax(self) -> tuple[str, GraspType]:
        return self.entries[int(self.probs.argmax())]


def goal_displacement(world: WorldState, object_id: str, grasp: GraspType
                      ) -> tuple[float, float, float]:
    """Wrist displacement that completes the hypothesis' grasp.

    For a soft grasp this equals object-top minus pad-face (the pad offset
    cancels); for a rigid grasp it targets the straddle depth, since the
    jaw legitimately travels below the top face.
    """
    goal = grasp_goal(world, world.objects[object_id], grasp)
    ee = world.ee_pose
    return (goal[0] - ee[0], goal[1] - ee[1], goal[2] - ee[2])


def _hypothesis_directions(belief: Belief, world: WorldState) -> np.ndarray:
    dirs = np.empty((len(belief.entries), 3))
    for i, (oid, grasp) in enumerate(belief.entries):
        dirs[i] = goal_displacement(world, oid, grasp)
    norms = np.linalg.norm(dirs, axis=1)
    nonzero = norms > 0.0
    dirs[nonzero] /= norms[nonzero, None]
    return dirs


def likelihood(a_h: ActionTwist, world: WorldState, object_id: str,
               grasp: GraspType, model: RationalityModel) -> float:
    """Density of the observed motion direction under one hypothesis,
    normalized over the fixed unit-sphere quadrature.  Zero velocity is
    uninformative and returns the uniform density."""
    v = np.array(a_h.v)
    speed = float(np.linalg.norm(v))
    if speed == 0.0:
        return 1.0 / (4.0 * math.pi)
    d = np.array(goal_displacement(world, object_id, grasp))
    dn = float(np.linalg.norm(d))
    if dn > 0.0:
        d /= dn
    else:
        d[:] = 0.0
    cos = float(v @ d) / speed
    z = SPHERE_WEIGHT * float(np.exp(model.beta * (SPHERE_DIRECTIONS @ d)).sum())
    return math.exp(model.beta * cos) / z


def update_belief(belief: Belief, world: WorldState, a_h: ActionTwist,
                  model: RationalityModel) -> Belief:
    """Bayes step: posterior ∝ likelihood × prior, floored and renormalized.

    Zero-velocity input carries no direction information and leaves the
    belief unchanged.
    """
    v = np.array(a_h.v)
    speed = float(np.linalg.norm(v))
    if speed == 0.0:
        return belief
    a_hat = v / speed
    dirs = _hypothesis_directions(belief, world)
    cos = dirs @ a_hat
    z = SPHERE_WEIGHT * np.exp(model.beta * (SPHERE_DIRECTIONS @ dirs.T)).sum(axis=0)
    like = np.exp(model.beta * cos) / z
    post = like * belief.probs
    total = post.sum()
    if total <= 0.0:
        return belief
    post = post / total
    below = post < EPSILON_FLOOR
    if below.any():
        post = post.copy()
        post[below] = EPSILON_FLOOR
        rest = ~below
        post[rest] *= (1.0 - EPSILON_FLOOR * below.sum()) / post[rest].sum()
    return replace(belief, probs=post)


def weighted_goal_displacement(belief: Belief, world: WorldState) -> np.ndarray:
    """Belief-weighted sum of the hypotheses' goal displacements — the raw
    assistance vector before shaping."""
    total = np.zeros(3)
    for (oid, grasp), p in zip(belief.entries, belief.probs):
        total += p * np.array(goal_displacement(world, oid, grasp))
    return total


def _shape_velocity(disp: tuple[float, float, float]) -> tuple[float, float, float]:
    """Proportional velocity toward a displacement, descend-last: downward
    motion waits until horizontal alignment is within ALIGN_TOLERANCE."""
    dx, dy, dz = disp
    if math.hypot(dx, dy) > ALIGN_TOLERANCE and dz < 0.0:
        dz = 0.0
    vz = max(-V_VERTICAL_MAX, min(V_VERTICAL_MAX, dz / DT))
    return (dx / DT, dy / DT, vz)


def assist_action(belief: Belief, world: WorldState) -> ActionTwist:
    """Velocity toward the belief-weighted goal (clamped, descend-last).

    Once something is held the intent is delivery: the assist switches to
    the ascend-first transport toward the bin.
    """
    if world.gripper.bindings:
        binding = world.gripper.bindings[0]
        return ActionTwist(_carry_velocity(world, carry_goal(world, binding)))
    raw = weighted_goal_displacement(belief, world)
    return ActionTwist(_shape_velocity((raw[0], raw[1], raw[2])))


def blend(a_h: ActionTwist, a_r: ActionTwist, belief: Belief) -> ActionTwist:
    """Confidence-weighted velocity blend; the human grasp command always
    wins (assistance never issues one through the blend)."""
    alpha = max(0.0, min(belief.confidence, ALPHA_MAX))
    v = (
        (1.0 - alpha) * a_h.v[0] + alpha * a_r.v[0],
        (1.0 - alpha) * a_h.v[1] + alpha * a_r.v[1],
        (1.0 - alpha) * a_h.v[2] + alpha * a_r.v[2],
    )
    return ActionTwist(v, a_h.grasp_cmd)


def _pad_is(gripper: GripperState, pad: int, state) -> bool:
    pending = gripper.pad_pending[pad]
    if pending is not None:
        return pending[0] is state
    return gripper.pads[pad] is state


def auto_pressure(world: WorldState, belief: Optional[Belief] = None,
                  target: Optional[tuple[str, GraspType]] = None) -> Optional[str]:
    """Pressure command automation for an active soft intent.

    Inflate on approach (pad more than APPROACH_PRESSURE_HEIGHT above the
    face), vacuum at contact, inflate again once the held object is over
    the bin.  Under a belief the intent must be soft with confidence at
    least SOFT_INTENT_CONFIDENCE; an explicit target bypasses the gate.
    """
    from .adhesion import PressureState  # local alias for readability

    if target is None:
        if belief is None or belief.confidence < SOFT_INTENT_CONFIDENCE:
            return None
        target = belief.argmax
    oid, grasp = target
    if grasp.kind != "soft" or oid not in world.objects:
        return None
    pad = grasp.pad
    gripper = world.gripper
    binding = gripper.soft_binding(pad)
    if binding is not None:
        held_obj = world.objects[binding.object_id]
        if world.in_bin(held_obj.position) and not _pad_is(gripper, pad, PressureState.POSITIVE):
            return "pad_inflate"
        return None
    obj = world.objects[oid]
    if obj.status is not ObjectStatus.ON_TABLE:
        return None
    pad_face = gripper.pad_center(pad)
    gap = pad_face[2] - obj.surface.height
    if gap > APPROACH_PRESSURE_HEIGHT:
        if not _pad_is(gripper, pad, PressureState.POSITIVE):
            return "pad_inflate"
        return None
    under_pad = math.hypot(pad_face[0] - obj.position[0],
                           pad_face[1] - obj.position[1]) <= gripper.params.pad_radius
    if abs(gap) <= CONTACT_TOLERANCE and under_pad:
        if not _pad_is(gripper, pad, PressureState.NEGATIVE):
            return "pad_vacuum"
    return None


def choose_grasp(obj: ObjectState) -> GraspType:
    """Height rule: strictly taller than the threshold pinches, else adheres."""
    return RIGID if obj.surface.height > AUTONOMOUS_RIGID_HEIGHT else soft(0)


def grasp_goal(world: WorldState, obj: ObjectState, grasp: GraspType
               ) -> tuple[float, float, float]:
    """End-effector pose that puts the grasp point on the object."""
    ox, oy, _ = obj.position
    h = obj.surface.height
    if grasp.kind == "soft":
        off = world.gripper.pad_offsets[grasp.pad]
        return (ox - off[0], oy - off[1], h - off[2])
    return (ox, oy, max(h / 2.0, 0.0))


def carry_goal(world: WorldState, binding) -> tuple[float, float, float]:
    """End-effector pose that centers the held object over the bin."""
    cx, cy, _ = world.bin_center
    return (cx - binding.grab_offset[0], cy - binding.grab_offset[1], CARRY_HEIGHT)


def soft_contact_ready(world: WorldState, obj: ObjectState, pad: int) -> bool:
    pad_face = world.gripper.pad_center(pad)
    if abs(pad_face[2] - obj.surface.height) > CONTACT_TOLERANCE:
        return False
    return math.hypot(pad_face[0] - obj.position[0],
                      pad_face[1] - obj.position[1]) <= world.gripper.params.pad_radius


def rigid_ready(world: WorldState, obj: ObjectState) -> bool:
    ee = world.ee_pose
    if math.hypot(ee[0] - obj.position[0], ee[1] - obj.position[1]) > RIGID_READY_TOLERANCE:
        return False
    goal_z = grasp_goal(world, obj, RIGID)[2]
    return ee[2] <= obj.surface.height and abs(ee[2] - goal_z) <= 0.002


def _toward(world: WorldState, goal: tuple[float, float, float]) -> tuple[float, float, float]:
    ee = world.ee_pose
    return _shape_velocity((goal[0] - ee[0], goal[1] - ee[1], goal[2] - ee[2]))


def _carry_velocity(world: WorldState, goal: tuple[float, float, float]
                    ) -> tuple[float, float, float]:
    """Ascend-first transport: climb to carry height before traversing."""
    ee = world.ee_pose
    dz = goal[2] - ee[2]
    if dz > ALIGN_TOLERANCE:
        return (0.0, 0.0, min(V_VERTICAL_MAX, dz / DT))
    return _shape_velocity((goal[0] - ee[0], goal[1] - ee[1], dz))


def autonomous_policy(world: WorldState, target: Optional[str] = None) -> ActionTwist:
    """Pick-and-place autonomy: nearest tabled object (or a designated
    target), grasp family by the height rule, carry to the bin, release."""
    gripper = world.gripper
    if gripper.bindings:
        binding = next((b for b in gripper.bindings if b.object_id == target),
                       gripper.bindings[0])
        held_obj = world.objects[binding.object_id]
        if world.in_bin(held_obj.position):
            if binding.grasp.kind == "rigid":
                return ActionTwist(grasp_cmd="open_rigid")
            cmd = auto_pressure(world, target=(binding.object_id, binding.grasp))
            return ActionTwist(grasp_cmd=cmd)
        return ActionTwist(_carry_velocity(world, carry_goal(world, binding)))

    if target is not None:
        obj = world.objects[target]
        if obj.status is not ObjectStatus.ON_TABLE:
            return ActionTwist()
    else:
        obj = nearest_on_table(world, world.ee_pose)
        if obj is None:
            return ActionTwist()
    grasp = choose_grasp(obj)
    if grasp.kind == "soft":
        cmd = auto_pressure(world, target=(obj.object_id, grasp))
        if soft_contact_ready(world, obj, grasp.pad):
            return ActionTwist(grasp_cmd=cmd)
        return ActionTwist(_toward(world, grasp_goal(world, obj, grasp)), cmd)
    if rigid_ready(world, obj):
        return ActionTwist(grasp_cmd="close_rigid")
    return ActionTwist(_toward(world, grasp_goal(world, obj, grasp)))


def controller_step(world: WorldState, a_h: ActionTwist, controller: str,
                    belief: Optional[Belief] = None,
                    model: Optional[RationalityModel] = None,
                    target: Optional[str] = None,
                    ) -> tuple[WorldState, Optional[Belief], ActionTwist]:
    """One tick of the chosen controller; returns (world', belief', applied
    action).  The shared path updates belief from the human twist, blends
    assistance, and lets pressure automation fill a missing grasp command."""
    if controller == "autonomous":
        action = autonomous_policy(world, target=target)
    elif controller == "human":
        action = a_h
    elif controller == "shared":
        if belief is None:
            raise ValueError("shared controller needs a belief")
        model = model if model is not None else RationalityModel()
        belief = update_belief(belief, world, a_h, model)
        blended = blend(a_h, assist_action(belief, world), belief)
        cmd = a_h.grasp_cmd if a_h.grasp_cmd is not None else auto_pressure(world, belief=belief)
        action = ActionTwist(blended.v, cmd)
    else:
        raise ValueError(f"unknown controller {controller!r}")
    return step(world, action), belief, action
