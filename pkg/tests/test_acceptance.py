"""Acceptance gate: the headline behaviors the package promises, each checked
at its stated tolerance and reported as a single pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest

from riso_sim import cli
from riso_sim.adhesion import (
    AdhesionMode,
    AdhesiveParams,
    POROUS_SERIES_RADIUS,
    SurfaceDescriptor,
    fit_fracture_energy,
    force_capacity,
    switching_ratio,
)
from riso_sim.control import (
    Belief,
    EPSILON_FLOOR,
    RationalityModel,
    controller_step,
    goal_displacement,
    grasp_goal,
    likelihood,
    update_belief,
    weighted_goal_displacement,
)
from riso_sim.gripper import GripperState, RIGID, attempt_rigid_grasp, attempt_soft_grasp, soft
from riso_sim.operator_model import run_episode, run_trials
from riso_sim.scenario import load_scenario
from riso_sim.world import ActionTwist, ObjectStatus, StepRecord, episode_result, step

NN = AdhesionMode.NEUTRAL_TO_NEGATIVE
PN = AdhesionMode.POSITIVE_TO_NEGATIVE

PARAMS = AdhesiveParams.calibrated()
BENCH = SurfaceDescriptor(contact_radius=0.0125)


def _report(idx: int, ok: bool, detail: str) -> None:
    line = f"ACCEPTANCE {idx}: {'PASS' if ok else 'FAIL'} — {detail}"
    print(line, flush=True)
    assert ok, line


# 1 ---------------------------------------------------------------------------


def test_criterion_1_dual_mode_bench_forces():
    f_nn = force_capacity(BENCH, NN, PARAMS)
    f_pn = force_capacity(BENCH, PN, PARAMS)
    ok = abs(f_nn - 18.0) / 18.0 <= 0.01 and abs(f_pn - 50.0) / 50.0 <= 0.01
    _report(1, ok, f"12.5 mm bench pull-off {f_nn:.3f} N adhesion-only / "
                   f"{f_pn:.3f} N with wrapping (targets 18 / 50 N, tol 1%)")


# 2 ---------------------------------------------------------------------------


def test_criterion_2_switching_ratio_series():
    radii_mm = (2.5, 5.0, 7.5, 10.0, 12.5)
    srs = [switching_ratio(SurfaceDescriptor(contact_radius=r * 1e-3), PARAMS)
           for r in radii_mm]
    increasing = all(a < b for a, b in zip(srs, srs[1:]))
    at_bench = abs(srs[-1] - 187.0) / 187.0 <= 0.02
    ok = increasing and at_bench
    _report(2, ok, f"switching ratio {srs[-1]:.2f} at 12.5 mm (target 187, tol 2%), "
                   f"strictly increasing over {radii_mm} mm: {increasing}")


# 3 ---------------------------------------------------------------------------


def test_criterion_3_energy_recovery_from_capacity_data():
    areas = np.linspace(2e-5, 4.9e-4, 20)
    x = np.sqrt(areas / PARAMS.c_negative)
    worst_clean = 0.0
    for g_true in (PARAMS.g_c_adhesion, PARAMS.g_c_wrapping):
        y = np.sqrt(g_true) * x
        g_hat = fit_fracture_energy(list(zip(x, y)))
        worst_clean = max(worst_clean, abs(g_hat - g_true) / g_true)

    worst_noisy = 0.0
    t0 = time.perf_counter()
    for key, g_true in enumerate((PARAMS.g_c_adhesion, PARAMS.g_c_wrapping)):
        y = np.sqrt(g_true) * x
        for s in range(1000):
            rng = np.random.default_rng(np.random.SeedSequence((913, key, s)))
            noisy = y * (1.0 + 0.01 * rng.standard_normal(20))
            g_hat = fit_fracture_energy(list(zip(x, noisy)))
            worst_noisy = max(worst_noisy, abs(g_hat - g_true) / g_true)
    elapsed = time.perf_counter() - t0

    ok = worst_clean <= 1e-9 and worst_noisy <= 0.02 and elapsed < 5.0
    _report(3, ok, f"energy fit: clean rel err {worst_clean:.2e} (tol 1e-9), "
                   f"worst over 2000 noisy fits {worst_noisy:.2%} (tol 2%), "
                   f"{elapsed:.2f}s (limit 5s)")


# 4 ---------------------------------------------------------------------------


def test_criterion_4_surface_property_trends():
    curved = [force_capacity(SurfaceDescriptor(contact_radius=7.5e-3, curvature=k),
                             NN, PARAMS) for k in (0.0, 50.0, 100.0, 150.0)]
    curvature_ok = all(a > b for a, b in zip(curved, curved[1:]))

    smooth = force_capacity(SurfaceDescriptor(contact_radius=7.5e-3), NN, PARAMS)
    rough = [force_capacity(
        SurfaceDescriptor(contact_radius=7.5e-3, roughness_spacing=d), NN, PARAMS)
        for d in (0.5e-3, 2e-3)]
    roughness_ok = rough[0] < rough[1] < smooth

    porous = [force_capacity(
        SurfaceDescriptor(contact_radius=POROUS_SERIES_RADIUS, porosity=p), NN, PARAMS)
        for p in (0.0, 0.2, 0.4, 0.6, 0.8)]
    porosity_ok = all(a > b for a, b in zip(porous, porous[1:]))
    endpoint_ok = abs(porous[-1] - 0.9) / 0.9 <= 0.20

    ok = curvature_ok and roughness_ok and porosity_ok and endpoint_ok
    _report(4, ok, f"capacity falls with curvature ({curvature_ok}), roughness "
                   f"({roughness_ok}), porosity ({porosity_ok}); 80% porous face "
                   f"holds {porous[-1]:.3f} N (target 0.9 N, tol 20%)")


# 5 ---------------------------------------------------------------------------


def test_criterion_5_mass_range_extremes():
    t0 = time.perf_counter()
    results = {}
    for target in ("candy_sprinkle", "weight_2kg"):
        world = load_scenario("household15_extended")
        result, _ = run_episode(world, "autonomous", target)
        results[target] = result
    elapsed = time.perf_counter() - t0

    sprinkle, weight = results["candy_sprinkle"], results["weight_2kg"]
    ok = (sprinkle.success and sprinkle.grasp_type_used.kind == "soft"
          and weight.success and weight.grasp_type_used.kind == "rigid"
          and elapsed < 10.0)
    _report(5, ok, f"2 mg sprinkle binned via {sprinkle.grasp_type_used.wire_tag} "
                   f"({sprinkle.success}), 2 kg weight via "
                   f"{weight.grasp_type_used.wire_tag} ({weight.success}), "
                   f"{elapsed:.2f}s (limit 10s)")


# 6 ---------------------------------------------------------------------------


def test_criterion_6_intent_inference():
    world = load_scenario("household15")
    belief = Belief.uniform(world)
    model = RationalityModel(beta=5.0)
    a_h = ActionTwist((0.2, -0.1, -0.05))

    post = update_belief(belief, world, a_h, model)
    raw = [p * likelihood(a_h, world, oid, g, model)
           for (oid, g), p in zip(belief.entries, belief.probs)]
    total = sum(raw)
    raw = [r / total for r in raw]
    below = [i for i, r in enumerate(raw) if r < EPSILON_FLOOR]
    if below:
        free = 1.0 - EPSILON_FLOOR * len(below)
        hi = sum(raw[i] for i in range(len(raw)) if i not in below)
        raw = [EPSILON_FLOOR if i in below else r * free / hi
               for i, r in enumerate(raw)]
    bayes_err = max(abs(a - b) / b for a, b in zip(post.probs, raw))

    assist = weighted_goal_displacement(post, world)
    manual = [0.0, 0.0, 0.0]
    for (oid, g), p in zip(post.entries, post.probs):
        d = goal_displacement(world, oid, g)
        for k in range(3):
            manual[k] += p * d[k]
    sum_err = max(abs(a - m) for a, m in zip(assist, manual))

    # convergence: steady decisive steering must lock on within 60 ticks
    world = load_scenario("household15")
    belief = Belief.uniform(world)
    target = world.objects["glue_stick"]
    locked = None
    for tick in range(60):
        goal = grasp_goal(world, target, soft(0))
        ee = world.ee_pose
        disp = (goal[0] - ee[0], goal[1] - ee[1], goal[2] - ee[2])
        n = math.sqrt(sum(c * c for c in disp))
        act = ActionTwist(tuple(0.25 * c / n for c in disp)) if n > 1e-6 else ActionTwist()
        belief = update_belief(belief, world, act, model)
        world = step(world, act)
        if belief.table[("glue_stick", soft(0))] > 0.9:
            locked = tick
            break

    ok = bayes_err <= 1e-12 and sum_err <= 1e-12 and locked is not None
    _report(6, ok, f"posterior matches Bayes oracle to {bayes_err:.2e} (tol 1e-12), "
                   f"assist vector matches double sum to {sum_err:.2e} (tol 1e-12), "
                   f"belief >0.9 after {locked} ticks (limit 60)")


# 7 ---------------------------------------------------------------------------


def test_criterion_7_shared_control_study():
    t0 = time.perf_counter()
    tables = {c: run_trials("household15", c, n_trials=7, seed=0)
              for c in ("autonomous", "human", "shared")}
    elapsed = time.perf_counter() - t0

    episodes = {c: sum(r.trials for r in t.rows) for c, t in tables.items()}
    agg = {c: t.aggregate() for c, t in tables.items()}
    reduction = 1.0 - (agg["shared"]["mean_input_steps"]
                       / agg["human"]["mean_input_steps"])
    gap_points = abs(agg["shared"]["success_rate"] - agg["human"]["success_rate"]) * 100

    ok = (all(n >= 105 for n in episodes.values())
          and reduction >= 0.20 and gap_points <= 5.0 and elapsed < 60.0)
    _report(7, ok, f"{episodes['shared']} episodes/controller: shared cuts human "
                   f"inputs by {reduction:.1%} (floor 20%) with success gap "
                   f"{gap_points:.1f} points (limit 5); study took {elapsed:.1f}s "
                   f"(limit 60s)")


# 8 ---------------------------------------------------------------------------


def test_criterion_8_reproducible_batch_runs(tmp_path):
    outs = [tmp_path / "a", tmp_path / "b"]
    for out in outs:
        rc = cli.main([
            "run", "--scenario", "household15", "--controller", "shared",
            "--trials", "1", "--seed", "123", "--out", str(out),
        ])
        assert rc == 0
    same_metrics = (outs[0] / "metrics.csv").read_bytes() == (outs[1] / "metrics.csv").read_bytes()
    same_summary = (outs[0] / "summary.json").read_bytes() == (outs[1] / "summary.json").read_bytes()
    ok = same_metrics and same_summary
    _report(8, ok, f"repeated `run --seed 123` produced byte-identical metrics.csv "
                   f"({same_metrics}) and summary.json ({same_summary})")


# 9 ---------------------------------------------------------------------------


def _forced_family_episode(target: str, grasp) -> bool:
    """Drive a human-mode episode that may only use the given grasp family."""
    from riso_sim.operator_model import OperatorProfile, SyntheticOperator

    world = load_scenario("household15_extended")
    op = SyntheticOperator(target, grasp, OperatorProfile(beta_h=math.inf),
                           np.random.default_rng(0))
    log: list[StepRecord] = []
    for _ in range(600):
        act = op.action(world)
        prev = world.ee_pose
        world, _, _ = controller_step(world, act, "human")
        held = next((b.grasp for b in world.gripper.bindings
                     if b.object_id == target), None)
        log.append(StepRecord(world.ee_pose, math.dist(prev, world.ee_pose),
                              act.is_active, held))
        if world.objects[target].status in (ObjectStatus.IN_BIN, ObjectStatus.DROPPED):
            break
    return episode_result(world, log, target).success


def test_criterion_9_grasp_family_necessity():
    world = load_scenario("household15")
    quarter = world.objects["quarter"].surface
    weight = world.objects["weight_2kg"].surface

    rigid_on_quarter = attempt_rigid_grasp(GripperState.create(), quarter)
    g = GripperState.create()
    from dataclasses import replace
    g_soft = replace(g, pose=(g.pose[0], g.pose[1], quarter.height))
    soft_on_quarter = attempt_soft_grasp(g_soft, 0, quarter, NN)

    from riso_sim.adhesion import PressureState
    g_wrap = replace(g, pose=(g.pose[0], g.pose[1], weight.height),
                     pads=(PressureState.POSITIVE,))
    soft_on_weight = attempt_soft_grasp(g_wrap, 0, weight, PN)
    rigid_on_weight = attempt_rigid_grasp(GripperState.create(), weight)

    attempts_ok = (not rigid_on_quarter.held and rigid_on_quarter.reason == "too_small"
                   and soft_on_quarter.held
                   and not soft_on_weight.held
                   and soft_on_weight.reason == "insufficient_capacity"
                   and rigid_on_weight.held)

    episodes_ok = (not _forced_family_episode("quarter", RIGID)
                   and _forced_family_episode("quarter", soft(0))
                   and not _forced_family_episode("weight_2kg", soft(0))
                   and _forced_family_episode("weight_2kg", RIGID))

    ok = attempts_ok and episodes_ok
    _report(9, ok, f"quarter: rigid fails ({rigid_on_quarter.reason}) / pad holds "
                   f"({soft_on_quarter.held}); 2 kg weight: strongest pad mode fails "
                   f"({soft_on_weight.reason}) / rigid holds ({rigid_on_weight.held}); "
                   f"forced-family episodes agree ({episodes_ok})")
