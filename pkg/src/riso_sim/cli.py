"""Command-line front end: bench characterization sweeps, batch trial runs,
scenario validation, and the interactive session server."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional, Sequence

from .adhesion import (
    AdhesionMode,
    AdhesiveParams,
    POROUS_SERIES_RADIUS,
    SurfaceDescriptor,
    force_capacity,
    switching_ratio,
)
from .control import RationalityModel
from .operator_model import OperatorProfile, run_trials
from .scenario import BUNDLED_SCENARIOS, ScenarioError, resolve_scenario, validate_scenario

log = logging.getLogger("riso_sim.cli")

CONTROLLERS = ("autonomous", "human", "shared")

# Default sweep grids.  Radius and roughness spacing are entered in mm,
# curvature in 1/m, porosity as a fraction; the x column echoes the input.
SWEEP_DEFAULTS = {
    "radius": (2.5, 5.0, 7.5, 10.0, 12.5),
    "curvature": (0.0, 33.3, 66.7, 100.0, 133.3),
    "roughness": (0.25, 0.5, 1.0, 2.0, 4.0),
    "porosity": (0.0, 0.2, 0.4, 0.6, 0.8),
}

CSV_HEADER = "x,f_c_neutral_neg,f_c_pos_neg,f_c_pos_pos,sr"


def _sweep_surface(sweep: str, value: float) -> SurfaceDescriptor:
    if sweep == "radius":
        return SurfaceDescriptor(contact_radius=value * 1e-3)
    if sweep == "curvature":
        return SurfaceDescriptor(contact_radius=7.5e-3, curvature=value)
    if sweep == "roughness":
        return SurfaceDescriptor(contact_radius=7.5e-3, roughness_spacing=value * 1e-3)
    if sweep == "porosity":
        return SurfaceDescriptor(contact_radius=POROUS_SERIES_RADIUS, porosity=value)
    raise ValueError(f"unknown sweep {sweep!r}")


def characterize_csv_text(sweep: str, values: Sequence[float]) -> str:
    """Capacity table for one bench sweep, as CSV text."""
    params = AdhesiveParams.calibrated()
    lines = [CSV_HEADER]
    for v in values:
        surf = _sweep_surface(sweep, v)
        f_nn = force_capacity(surf, AdhesionMode.NEUTRAL_TO_NEGATIVE, params)
        f_pn = force_capacity(surf, AdhesionMode.POSITIVE_TO_NEGATIVE, params)
        f_pp = force_capacity(surf, AdhesionMode.POSITIVE_TO_POSITIVE, params)
        sr = switching_ratio(surf, params)
        lines.append(f"{v!r},{f_nn!r},{f_pn!r},{f_pp!r},{sr!r}")
    return "\n".join(lines) + "\n"


def _parse_values(text: str) -> list[float]:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad value list {text!r}: {exc}")
    if not vals:
        raise argparse.ArgumentTypeError("empty value list")
    return vals


def cmd_characterize(args: argparse.Namespace) -> int:
    values = args.values if args.values is not None else SWEEP_DEFAULTS[args.sweep]
    text = characterize_csv_text(args.sweep, values)
    if args.out:
        Path(args.out).write_text(text)
        log.info("wrote %s (%d rows)", args.out, len(values))
    else:
        sys.stdout.write(text)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    try:
        doc = resolve_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    problems = validate_scenario(doc)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return 1

    model = RationalityModel(beta=args.beta)
    profile = OperatorProfile(beta_h=args.beta_human)
    table = run_trials(
        doc,
        args.controller,
        n_trials=args.trials,
        seed=args.seed,
        profile=profile,
        model=model,
    )

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "metrics.csv").write_text(table.to_csv_text())
    summary = {
        "scenario": args.scenario if isinstance(args.scenario, str) else "<inline>",
        "controller": args.controller,
        "seed": args.seed,
        "trials": args.trials,
        "beta": args.beta,
        "beta_human": args.beta_human,
        "aggregate": table.aggregate(),
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    agg = summary["aggregate"]
    print(
        f"{args.controller}: success_rate={agg['success_rate']:.3f} "
        f"mean_input_steps={agg['mean_input_steps']:.1f} "
        f"mean_traj_len_m={agg['mean_traj_len_m']:.2f}"
    )
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        doc = resolve_scenario(args.scenario)
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    problems = validate_scenario(doc)
    if problems:
        for p in problems:
            print(f"error: {p}", file=sys.stderr)
        return 1
    n = len(doc.get("objects", []))
    print(f"OK: {n} objects")
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .server import serve  # deferred: pulls in asyncio machinery

    try:
        serve(
            port=args.port,
            scenario=args.scenario,
            controller=args.controller,
            seed=args.seed,
            log_path=args.out,
        )
    except ScenarioError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riso-sim",
        description="Deterministic tabletop grasping simulator for a rigid-soft gripper.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("characterize", help="bench capacity sweeps as CSV")
    p.add_argument("--sweep", choices=sorted(SWEEP_DEFAULTS), default="radius")
    p.add_argument("--values", type=_parse_values, default=None,
                   help="comma-separated sweep values (radius/roughness in mm, "
                        "curvature in 1/m, porosity as a fraction)")
    p.add_argument("--out", default=None, help="output CSV path (default: stdout)")
    p.set_defaults(func=cmd_characterize)

    p = sub.add_parser("run", help="batch trials over every object in a scenario")
    p.add_argument("--scenario", default="household15",
                   help=f"bundled name {BUNDLED_SCENARIOS} or a JSON file path")
    p.add_argument("--controller", choices=CONTROLLERS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--beta", type=float, default=5.0,
                   help="assistance rationality for the shared controller")
    p.add_argument("--beta-human", type=float, default=5.0,
                   help="synthetic operator steering sharpness")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("validate", help="check a scenario document and exit")
    p.add_argument("scenario", help="bundled name or JSON file path")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("serve", help="run the interactive session server")
    p.add_argument("--port", type=int, default=8901)
    p.add_argument("--scenario", default="household15")
    p.add_argument("--controller", choices=CONTROLLERS, default="shared")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="episode log CSV path")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    level = os.environ.get("RISO_SIM_LOG")
    if level:
        logging.basicConfig(level=getattr(logging, level.upper(), logging.INFO))
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
