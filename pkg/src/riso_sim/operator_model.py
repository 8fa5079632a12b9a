"""Scripted operator with Boltzmann-noisy steering, plus the trial harness.

The operator pursues one (object, grasp) target through the same approach
geometry the controllers use, sampling its commanded direction from a
softmax over the fixed sphere quadrature.  beta -> inf degenerates to the
exact direction; beta = 0 is a uniform random walk.  Under assistance the
operator watches rather than steers while the rig is already moving its
way (alignment-gated idling), and leaves pad pressure to the automation
with a lag-triggered fallback so a stalled automation cannot wedge an
episode.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .adhesion import PressureState
from .control import (
    APPROACH_PRESSURE_HEIGHT,
    Belief,
    RationalityModel,
    SPHERE_DIRECTIONS,
    _pad_is,
    carry_goal,
    choose_grasp,
    controller_step,
    grasp_goal,
    rigid_ready,
    soft_contact_ready,
    _shape_velocity,
)
from .gripper import GraspType
from .world import (
    ActionTwist,
    DT,
    EPISODE_TIMEOUT_STEPS,
    EpisodeResult,
    ObjectStatus,
    StepRecord,
    WorldState,
    episode_result,
)

NEAR_GOAL_EXACT = 0.02  # m, noise off for the final alignment
FALLBACK_LAG_TICKS = 10  # assisted operator waits this long before acting itself
IDLE_MIN_SPEED = 0.02  # m/s the rig must sustain for the operator to stay idle


@dataclass(frozen=True)
class OperatorProfile:
    """Tunable operator traits.

    beta_h: directional rationality (inf = perfect, 0 = uniform noise).
    reaction_delay: ticks of inaction at episode start.
    idle_threshold: assisted operator stops steering while the rig's actual
        motion stays within this cosine of the intended direction (and keeps
        moving); they re-engage the moment progress stalls or veers.
    """

    beta_h: float = 5.0
    reaction_delay: int = 0
    idle_threshold: float = 0.8

    def __post_init__(self) -> None:
        if self.beta_h < 0.0:
            raise ValueError("beta_h must be >= 0 (may be inf)")
        if self.reaction_delay < 0:
            raise ValueError("reaction_delay must be >= 0")
        if not -1.0 <= self.idle_threshold <= 1.0:
            raise ValueError("idle_threshold is a cosine, must be in [-1, 1]")


class SyntheticOperator:
    """Stateful scripted teleoperator for one episode."""

    def __init__(self, target_id: str, grasp: GraspType,
                 profile: Optional[OperatorProfile] = None,
                 rng: Optional[np.random.Generator] = None) -> None:
        self.target_id = target_id
        self.grasp = grasp
        self.profile = profile if profile is not None else OperatorProfile()
        self.rng = rng if rng is not None else np.random.default_rng(0)
        self._ticks = 0
        self._contact_lag = 0
        self._bin_lag = 0

    def _steer(self, disp: tuple[float, float, float]) -> tuple[float, float, float]:
        """Noisy velocity toward a displacement (descend-last shaped)."""
        shaped = _shape_velocity(disp)
        speed = math.sqrt(shaped[0] ** 2 + shaped[1] ** 2 + shaped[2] ** 2)
        if speed == 0.0:
            return (0.0, 0.0, 0.0)
        beta = self.profile.beta_h
        dist = math.sqrt(disp[0] ** 2 + disp[1] ** 2 + disp[2] ** 2)
        if math.isinf(beta) or (beta > 0.0 and dist < NEAR_GOAL_EXACT):
            return shaped
        d_hat = np.array(shaped) / speed
        logits = beta * (SPHERE_DIRECTIONS @ d_hat)
        w = np.exp(logits - logits.max())
        w /= w.sum()
        pick = SPHERE_DIRECTIONS[self.rng.choice(len(w), p=w)]
        v = pick * speed
        return (float(v[0]), float(v[1]), float(v[2]))

    def _tracking_intent(self, world: WorldState,
                         disp: tuple[float, float, float]) -> bool:
        """True while the rig's actual motion already serves the intent, so
        an assisted operator can watch instead of steering."""
        shaped = _shape_velocity(disp)
        want = math.sqrt(shaped[0] ** 2 + shaped[1] ** 2 + shaped[2] ** 2)
        if want == 0.0:
            return True
        v = world.ee_vel
        speed = math.sqrt(v[0] ** 2 + v[1] ** 2 + v[2] ** 2)
        if speed < IDLE_MIN_SPEED:
            return False
        cos = (v[0] * shaped[0] + v[1] * shaped[1] + v[2] * shaped[2]) / (speed * want)
        return cos >= self.profile.idle_threshold

    def action(self, world: WorldState, assisted: bool = False) -> ActionTwist:
        """Operator input for this tick."""
        self._ticks += 1
        if self._ticks <= self.profile.reaction_delay:
            return ActionTwist()
        obj = world.objects[self.target_id]
        gripper = world.gripper
        binding = next((b for b in gripper.bindings if b.object_id == self.target_id),
                       None)

        if binding is not None:
            if world.in_bin(world.objects[binding.object_id].position):
                return ActionTwist(grasp_cmd=self._release_cmd(gripper, assisted))
            self._bin_lag = 0
            goal = carry_goal(world, binding)
            ee = world.ee_pose
            dz = goal[2] - ee[2]
            # Ascend-first, mirroring the autonomy's transport profile.
            intent = (0.0, 0.0, dz) if dz > 0.01 else \
                (goal[0] - ee[0], goal[1] - ee[1], dz)
            if assisted and self._tracking_intent(world, intent):
                return ActionTwist()
            return ActionTwist(self._steer(intent))

        if obj.status is not ObjectStatus.ON_TABLE:
            return ActionTwist()

        goal = grasp_goal(world, obj, self.grasp)
        cmd: Optional[str] = None
        at_contact = (soft_contact_ready(world, obj, self.grasp.pad)
                      if self.grasp.kind == "soft" else rigid_ready(world, obj))
        if at_contact:
            if self.grasp.kind == "soft":
                cmd = self._vacuum_cmd(gripper, assisted)
            else:
                cmd = "close_rigid"
            return ActionTwist(grasp_cmd=cmd)
        self._contact_lag = 0

        if self.grasp.kind == "soft" and not assisted:
            pad_face = gripper.pad_center(self.grasp.pad)
            if (pad_face[2] - obj.surface.height > APPROACH_PRESSURE_HEIGHT
                    and not _pad_is(gripper, self.grasp.pad, PressureState.POSITIVE)):
                cmd = "pad_inflate"

        ee = world.ee_pose
        disp = (goal[0] - ee[0], goal[1] - ee[1], goal[2] - ee[2])
        if assisted and cmd is None and self._tracking_intent(world, disp):
            return ActionTwist()
        return ActionTwist(self._steer(disp), cmd)

    def _vacuum_cmd(self, gripper, assisted: bool) -> Optional[str]:
        pad = self.grasp.pad
        if _pad_is(gripper, pad, PressureState.NEGATIVE):
            return None
        if not assisted:
            return "pad_vacuum"
        self._contact_lag += 1
        return "pad_vacuum" if self._contact_lag > FALLBACK_LAG_TICKS else None

    def _release_cmd(self, gripper, assisted: bool) -> Optional[str]:
        if self.grasp.kind != "soft":
            return "open_rigid"
        pad = self.grasp.pad
        if _pad_is(gripper, pad, PressureState.POSITIVE):
            return None
        if not assisted:
            return "pad_inflate"
        self._bin_lag += 1
        return "pad_inflate" if self._bin_lag > FALLBACK_LAG_TICKS else None


def operator_action(world: WorldState, target_id: str,
                    profile: Optional[OperatorProfile] = None,
                    rng: Optional[np.random.Generator] = None) -> ActionTwist:
    """One-shot operator query (grasp family from the height rule)."""
    grasp = choose_grasp(world.objects[target_id])
    op = SyntheticOperator(target_id, grasp, profile, rng)
    op._ticks = int(round(world.time / DT))
    return op.action(world)


def run_episode(world: WorldState, controller: str, target_id: str,
                profile: Optional[OperatorProfile] = None,
                rng: Optional[np.random.Generator] = None,
                model: Optional[RationalityModel] = None,
                max_steps: int = EPISODE_TIMEOUT_STEPS,
                ) -> tuple[EpisodeResult, list[StepRecord]]:
    """Drive one episode to bin/drop/timeout; returns the result and the
    per-tick log."""
    if target_id not in world.objects:
        raise KeyError(f"unknown target {target_id!r}")
    grasp = choose_grasp(world.objects[target_id])
    operator = (SyntheticOperator(target_id, grasp, profile, rng)
                if controller in ("human", "shared") else None)
    belief = Belief.uniform(world) if controller == "shared" else None
    log: list[StepRecord] = []
    for _ in range(max_steps):
        a_h = operator.action(world, assisted=(controller == "shared")) \
            if operator is not None else ActionTwist()
        prev = world.ee_pose
        world, belief, _ = controller_step(world, a_h, controller,
                                           belief=belief, model=model,
                                           target=target_id)
        held = next((b.grasp for b in world.gripper.bindings
                     if b.object_id == target_id), None)
        log.append(StepRecord(
            ee_pose=world.ee_pose,
            moved=math.dist(prev, world.ee_pose),
            human_active=a_h.is_active if operator is not None else False,
            target_grasp=held,
        ))
        if world.objects[target_id].status in (ObjectStatus.IN_BIN,
                                               ObjectStatus.DROPPED):
            break
    return episode_result(world, log, target_id), log


@dataclass(frozen=True)
class MetricsRow:
    controller: str
    object_id: str
    trials: int
    successes: int
    mean_input_steps: float
    mean_traj_len_m: float


@dataclass
class MetricsTable:
    rows: list[MetricsRow] = field(default_factory=list)

    def to_csv_text(self) -> str:
        lines = ["controller,object_id,trials,successes,mean_input_steps,mean_traj_len_m"]
        for r in self.rows:
            lines.append(f"{r.controller},{r.object_id},{r.trials},{r.successes},"
                         f"{r.mean_input_steps!r},{r.mean_traj_len_m!r}")
        return "\n".join(lines) + "\n"

    def aggregate(self) -> dict[str, float]:
        trials = sum(r.trials for r in self.rows)
        if trials == 0:
            return {"success_rate": 0.0, "mean_input_steps": 0.0,
                    "mean_traj_len_m": 0.0}
        return {
            "success_rate": sum(r.successes for r in self.rows) / trials,
            "mean_input_steps": sum(r.mean_input_steps * r.trials
                                    for r in self.rows) / trials,
            "mean_traj_len_m": sum(r.mean_traj_len_m * r.trials
                                   for r in self.rows) / trials,
        }


def run_trials(scenario, controller: str, n_trials: int = 5, seed: int = 0,
               profile: Optional[OperatorProfile] = None,
               model: Optional[RationalityModel] = None,
               object_ids: Optional[Sequence[str]] = None) -> MetricsTable:
    """Seeded trial sweep: each (object, trial) pair gets an independent
    stream derived from (seed, object index, trial index), so tables are
    reproducible regardless of execution order."""
    from .scenario import load_scenario, resolve_scenario

    doc = resolve_scenario(scenario)
    ids = list(object_ids) if object_ids is not None \
        else [o["id"] for o in doc["objects"]]
    table = MetricsTable()
    for obj_idx, oid in enumerate(ids):
        successes = 0
        inputs: list[int] = []
        lengths: list[float] = []
        for trial in range(n_trials):
            rng = np.random.default_rng(np.random.SeedSequence((seed, obj_idx, trial)))
            world = load_scenario(doc, seed=seed)
            result, _ = run_episode(world, controller, oid,
                                    profile=profile, rng=rng, model=model)
            successes += int(result.success)
            inputs.append(result.human_input_steps)
            lengths.append(result.trajectory_length)
        table.rows.append(MetricsRow(
            controller=controller,
            object_id=oid,
            trials=n_trials,
            successes=successes,
            mean_input_steps=sum(inputs) / n_trials,
            mean_traj_len_m=sum(lengths) / n_trials,
        ))
    return table
