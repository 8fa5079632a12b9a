"""Scenario documents: JSON schema validation and world construction.

A scenario lists the tabled objects, the bin box, and the gripper build.
Object positions are [x, y] on the table plane.  See docs/scenario-schema.md
for the full field reference.
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Any, Mapping

from .adhesion import AdhesiveParams, SurfaceDescriptor
from .gripper import GripperState
from .world import ObjectState, ObjectStatus, WorldState

DEFAULT_START_POSE = (0.05, 0.0, 0.18)

BUNDLED_SCENARIOS = ("household15", "household15_extended")

_OBJECT_FIELDS = {
    "id": str,
    "position": list,
    "mass_kg": (int, float),
    "height_m": (int, float),
    "contact_radius_m": (int, float),
    "curvature_per_m": (int, float),
    "roughness_spacing_m": None,  # number or "smooth"
    "porosity": (int, float),
}


class ScenarioError(ValueError):
    """Scenario document failed validation; message lists field diagnostics."""


def validate_scenario(doc: Any) -> list[str]:
    """Collect field-level diagnostics; an empty list means the document is valid."""
    errors: list[str] = []
    if not isinstance(doc, dict):
        return [f"document: expected a JSON object, got {type(doc).__name__}"]

    objects = doc.get("objects")
    if not isinstance(objects, list) or not objects:
        errors.append("objects: expected a non-empty array")
        objects = []
    seen: set[str] = set()
    for i, obj in enumerate(objects):
        where = f"objects[{i}]"
        if not isinstance(obj, dict):
            errors.append(f"{where}: expected an object entry")
            continue
        for name, kind in _OBJECT_FIELDS.items():
            if name not in obj:
                errors.append(f"{where}.{name}: missing required field")
                continue
            value = obj[name]
            if name == "roughness_spacing_m":
                if value == "smooth":
                    continue
                if not isinstance(value, (int, float)) or isinstance(value, bool):
                    errors.append(f'{where}.{name}: expected a number or "smooth"')
                elif value <= 0:
                    errors.append(f"{where}.{name}: expected a positive spacing, got {value}")
                continue
            if kind is not None and (not isinstance(value, kind) or isinstance(value, bool)):
                errors.append(f"{where}.{name}: expected {getattr(kind, '__name__', 'number')}")
        oid = obj.get("id")
        if isinstance(oid, str):
            if oid in seen:
                errors.append(f"{where}.id: duplicate object id {oid!r}")
            seen.add(oid)
        pos = obj.get("position")
        if isinstance(pos, list) and (
            len(pos) != 2 or not all(isinstance(c, (int, float)) and not isinstance(c, bool)
                                     for c in pos)
        ):
            errors.append(f"{where}.position: expected [x, y] on the table plane")
        for name, low, high in (("porosity", 0.0, 1.0),):
            v = obj.get(name)
            if isinstance(v, (int, float)) and not isinstance(v, bool) and not low <= v <= high:
                errors.append(f"{where}.{name}: expected value in [{low}, {high}], got {v}")
        for name in ("mass_kg", "height_m", "curvature_per_m"):
            v = obj.get(name)
            if isinstance(v, (int, float)) and not isinstance(v, bool) and v < 0:
                errors.append(f"{where}.{name}: expected value >= 0, got {v}")
        v = obj.get("contact_radius_m")
        if isinstance(v, (int, float)) and not isinstance(v, bool) and v <= 0:
            errors.append(f"{where}.contact_radius_m: expected value > 0, got {v}")

    bin_box = doc.get("bin")
    if not isinstance(bin_box, dict):
        errors.append("bin: expected an object with min/max corners")
    else:
        corners = {}
        for corner in ("min", "max"):
            c = bin_box.get(corner)
            if (not isinstance(c, list) or len(c) != 3
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool)
                               for v in c)):
                errors.append(f"bin.{corner}: expected [x, y, z]")
            else:
                corners[corner] = c
        if len(corners) == 2 and any(a >= b for a, b in zip(corners["min"], corners["max"])):
            errors.append("bin: min corner must be strictly below max corner")

    grip = doc.get("gripper")
    if not isinstance(grip, dict):
        errors.append("gripper: expected an object")
    else:
        n = grip.get("n_pads")
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            errors.append(f"gripper.n_pads: expected an integer >= 1, got {n!r}")
        for name in ("pinch_force_n", "max_aperture_m"):
            v = grip.get(name)
            if not isinstance(v, (int, float)) or isinstance(v, bool) or v <= 0:
                errors.append(f"gripper.{name}: expected a positive number, got {v!r}")

    start = doc.get("start_pose_m")
    if start is not None and (
        not isinstance(start, list) or len(start) != 3
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in start)
    ):
        errors.append("start_pose_m: expected [x, y, z]")
    return errors


def _bundled_path(name: str):
    return resources.files("riso_sim").joinpath("scenarios", f"{name}.json")


def resolve_scenario(source: str | Mapping[str, Any]) -> dict:
    """Accept a parsed document, a bundled scenario name, or a file path."""
    if isinstance(source, Mapping):
        return dict(source)
    if source in BUNDLED_SCENARIOS:
        return json.loads(_bundled_path(source).read_text())
    path = Path(source)
    if not path.exists():
        raise ScenarioError(
            f"scenario: {source!r} is neither a bundled scenario "
            f"{BUNDLED_SCENARIOS} nor an existing file"
        )
    try:
        return json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario {source!r}: invalid JSON ({e})") from None


def load_scenario(source: str | Mapping[str, Any], seed: int = 0) -> WorldState:
    """Validate a scenario and build its initial world state."""
    doc = resolve_scenario(source)
    errors = validate_scenario(doc)
    if errors:
        raise ScenarioError("invalid scenario:\n  " + "\n  ".join(errors))

    objects: dict[str, ObjectState] = {}
    for entry in doc["objects"]:
        spacing = entry["roughness_spacing_m"]
        surface = SurfaceDescriptor(
            contact_radius=float(entry["contact_radius_m"]),
            curvature=float(entry["curvature_per_m"]),
            roughness_spacing=None if spacing == "smooth" else float(spacing),
            porosity=float(entry["porosity"]),
            mass=float(entry["mass_kg"]),
            height=float(entry["height_m"]),
        )
        objects[entry["id"]] = ObjectState(
            object_id=entry["id"],
            position=(float(entry["position"][0]), float(entry["position"][1]), 0.0),
            surface=surface,
            status=ObjectStatus.ON_TABLE,
        )

    grip_doc = doc["gripper"]
    start = tuple(float(v) for v in doc.get("start_pose_m", DEFAULT_START_POSE))
    gripper = GripperState.create(
        n_pads=int(grip_doc["n_pads"]),
        pinch_force=float(grip_doc["pinch_force_n"]),
        max_aperture=float(grip_doc["max_aperture_m"]),
        pose=start,
        params=AdhesiveParams.calibrated(),
    )
    return WorldState(
        time=0.0,
        ee_pose=start,
        ee_vel=(0.0, 0.0, 0.0),
        gripper=gripper,
        objects=objects,
        bin_min=tuple(float(v) for v in doc["bin"]["min"]),
        bin_max=tuple(float(v) for v in doc["bin"]["max"]),
        rng_seed=seed,
    )
