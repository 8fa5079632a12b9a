"""Contact mechanics of the pneumatically switchable soft adhesive pad.

The soft pad is an elastomeric membrane over a foam backing.  Its pneumatic
state sets both the contact geometry and the compliance seen by the load
path, and pull-off capacity follows the fracture-mechanics scaling

    F_c = sqrt(G_c * A / C)

with G_c the interfacial fracture energy of the engaged mode, A the contact
area and C the compliance of the loaded state.  Two bench measurements on a
12.5 mm smooth flat indenter (18 N for a neutral->negative grasp, 50 N for a
positive->negative wrapping grasp, switching ratio 187 against the off
state) pin every calibrated constant below; everything else is geometry.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

# Pneumatic set points of the pad (Pa, gauge).
POSITIVE_PRESSURE_PA = 1_500.0
NEUTRAL_PRESSURE_PA = 0.0
NEGATIVE_PRESSURE_PA = -85_000.0

# Characterization bench: smooth flat indenter at the full pad radius.
PAD_RADIUS = 0.0125  # m
ADHESION_BENCH_FORCE = 18.0  # N, neutral->negative at the bench indenter
WRAPPING_BENCH_FORCE = 50.0  # N, positive->negative at the bench indenter
BENCH_SWITCHING_RATIO = 187.0  # on/off capacity ratio at the bench indenter

# Interfacial fracture energies of the two engaged grasp modes (J/m^2).
G_C_ADHESION = 4.2
G_C_WRAPPING = 44.7

# Area-model shape constants.
#
# The inflated membrane presents a dome: a flat face only touches a fraction
# of the nominal footprint, and the constricted membrane wraps the object's
# side.  The side-wrap coefficient is calibrated so the wrapping-mode bench
# endpoint is hit exactly given the shared stiffened compliance:
#   MEMBRANE_CONTACT_FRACTION + WRAP_SIDE_COEFFICIENT
#     = (50^2 * 4.2) / (18^2 * 44.7) = 0.725
MEMBRANE_CONTACT_FRACTION = 0.5
WRAP_SIDE_COEFFICIENT = (
    WRAPPING_BENCH_FORCE**2 * G_C_ADHESION
) / (ADHESION_BENCH_FORCE**2 * G_C_WRAPPING) - MEMBRANE_CONTACT_FRACTION

# Off state (positive->positive): the inflated dome touches only near its
# apex.  The apex patch is a property of the pad — 5% of the pad base area,
# capped by the object's own face — which is what makes the switching ratio
# grow with indenter radius.
OFF_APEX_AREA_FRACTION = 0.05

# Engraved-surface spacing at which the usable area halves.
ROUGHNESS_HALF_SPACING = 1.0e-3  # m

# Porous test series: contact concentrates in the ligaments between holes,
# so the series carries a small effective contact radius, fixed so the
# neutral->negative capacity at 80% porosity is the measured 0.9 N.
POROSITY_BENCH_FORCE = 0.9  # N
POROSITY_BENCH_POROSITY = 0.8
POROUS_SERIES_RADIUS = (
    POROSITY_BENCH_FORCE
    / (ADHESION_BENCH_FORCE * math.sqrt(1.0 - POROSITY_BENCH_POROSITY))
    * PAD_RADIUS
)


class PressureState(Enum):
    """Pneumatic state of one pad channel."""

    POSITIVE = "positive"
    NEUTRAL = "neutral"
    NEGATIVE = "negative"

    @property
    def pressure_pa(self) -> float:
        return _PRESSURES[self]


_PRESSURES = {
    PressureState.POSITIVE: POSITIVE_PRESSURE_PA,
    PressureState.NEUTRAL: NEUTRAL_PRESSURE_PA,
    PressureState.NEGATIVE: NEGATIVE_PRESSURE_PA,
}


class AdhesionMode(Enum):
    """Pressure trajectory of a grasp: approach state -> loaded state."""

    NEUTRAL_TO_NEGATIVE = "neutral_to_negative"
    POSITIVE_TO_NEGATIVE = "positive_to_negative"
    POSITIVE_TO_POSITIVE = "positive_to_positive"

    @property
    def start_state(self) -> PressureState:
        if self is AdhesionMode.NEUTRAL_TO_NEGATIVE:
            return PressureState.NEUTRAL
        return PressureState.POSITIVE

    @property
    def load_state(self) -> PressureState:
        if self is AdhesionMode.POSITIVE_TO_POSITIVE:
            return PressureState.POSITIVE
        return PressureState.NEGATIVE


@dataclass(frozen=True)
class SurfaceDescriptor:
    """Grasp-relevant properties of one object face.

    contact_radius    radius of the graspable top face (m)
    curvature         convex curvature of the face, 1/m (0 = flat)
    roughness_spacing spacing of engraved features (m); None means smooth
    porosity          open-area fraction of the face, in [0, 1]
    mass              object mass (kg)
    height            object height when resting on the table (m)
    """

    contact_radius: float
    curvature: float = 0.0
    roughness_spacing: float | None = None
    porosity: float = 0.0
    mass: float = 0.0
    height: float = 0.0

    def __post_init__(self) -> None:
        if not self.contact_radius > 0.0:
            raise ValueError(f"contact_radius must be positive, got {self.contact_radius}")
        if self.curvature < 0.0:
            raise ValueError(f"curvature must be >= 0 (convex faces), got {self.curvature}")
        if self.roughness_spacing is not None and not self.roughness_spacing > 0.0:
            raise ValueError(
                f"roughness_spacing must be positive or None, got {self.roughness_spacing}"
            )
        if not 0.0 <= self.porosity <= 1.0:
            raise ValueError(f"porosity must be within [0, 1], got {self.porosity}")
        if self.mass < 0.0:
            raise ValueError(f"mass must be >= 0, got {self.mass}")
        if self.height < 0.0:
            raise ValueError(f"height must be >= 0, got {self.height}")


@dataclass(frozen=True)
class AdhesiveParams:
    """Fracture energies and load-path compliances of one pad build."""

    g_c_adhesion: float
    g_c_wrapping: float
    g_c_off: float
    c_negative: float
    c_neutral: float
    c_positive: float
    pad_radius: float = PAD_RADIUS
    switch_latency: float = 0.05  # s

    def __post_init__(self) -> None:
        for name in ("g_c_adhesion", "g_c_wrapping", "g_c_off", "c_negative",
                     "c_neutral", "c_positive", "pad_radius"):
            if not getattr(self, name) > 0.0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.c_negative < self.c_neutral < self.c_positive:
            raise ValueError(
                "compliances must satisfy c_negative < c_neutral < c_positive, got "
                f"{self.c_negative}, {self.c_neutral}, {self.c_positive}"
            )
        if not self.g_c_off < self.g_c_adhesion < self.g_c_wrapping:
            raise ValueError(
                "fracture energies must satisfy g_c_off < g_c_adhesion < g_c_wrapping, got "
                f"{self.g_c_off}, {self.g_c_adhesion}, {self.g_c_wrapping}"
            )
        if not 0.0 < self.switch_latency <= 0.1:
            raise ValueError(f"switch_latency must be in (0, 0.1] s, got {self.switch_latency}")

    @classmethod
    def calibrated(cls, pad_radius: float = PAD_RADIUS,
                   switch_latency: float = 0.05) -> "AdhesiveParams":
        """Parameters pinned by the bench endpoints at the given pad radius.

        The stiffened compliance comes from the neutral->negative endpoint,
        the off-state fracture energy from the bench switching ratio; the
        neutral and positive compliances are fixed multiples of c_negative
        (the inflated membrane is the most compliant state).
        """
        bench_area = math.pi * pad_radius**2
        c_negative = G_C_ADHESION * bench_area / ADHESION_BENCH_FORCE**2
        c_positive = 10.0 * c_negative
        f_low = WRAPPING_BENCH_FORCE / BENCH_SWITCHING_RATIO
        g_c_off = f_low**2 * c_positive / (OFF_APEX_AREA_FRACTION * bench_area)
        return cls(
            g_c_adhesion=G_C_ADHESION,
            g_c_wrapping=G_C_WRAPPING,
            g_c_off=g_c_off,
            c_negative=c_negative,
            c_neutral=3.0 * c_negative,
            c_positive=c_positive,
            pad_radius=pad_radius,
            switch_latency=switch_latency,
        )


@dataclass(frozen=True)
class ForceTrace:
    """Indentation record: (time, displacement, force) samples plus pull-off.

    Force is positive in compression, negative in tension; f_c is the
    magnitude of the tensile peak at pull-off.
    """

    samples: tuple[tuple[float, float, float], ...]
    f_c: float


def roughness_factor(roughness_spacing: float | None) -> float:
    """Usable-area fraction of an engraved face; smooth surfaces keep 1."""
    if roughness_spacing is None:
        return 1.0
    return roughness_spacing / (roughness_spacing + ROUGHNESS_HALF_SPACING)


def curvature_factor(curvature: float, effective_radius: float) -> float:
    """Flat-contact area loss on a convex face."""
    return 1.0 / (1.0 + curvature * effective_radius)


def contact_area(surface: SurfaceDescriptor, mode: AdhesionMode,
                 pad_radius: float = PAD_RADIUS) -> float:
    """Engaged contact area (m^2) for a grasp of the given mode.

    The effective radius is min(contact_radius, pad_radius).  Porosity and
    engraving reduce every mode.  Curvature reduces flat-on-flat contact
    only: a wrapping (positive->negative) grasp conforms around the face,
    trading flat contact for side contact independently of curvature.
    """
    r = min(surface.contact_radius, pad_radius)
    shared = (1.0 - surface.porosity) * roughness_factor(surface.roughness_spacing)
    base = math.pi * r * r
    if mode is AdhesionMode.NEUTRAL_TO_NEGATIVE:
        return base * shared * curvature_factor(surface.curvature, r)
    if mode is AdhesionMode.POSITIVE_TO_NEGATIVE:
        embed_depth = 0.5 * min(surface.contact_radius, pad_radius)
        side = WRAP_SIDE_COEFFICIENT * 2.0 * math.pi * r * embed_depth
        return (MEMBRANE_CONTACT_FRACTION * base + side) * shared
    # Off state: apex patch of the inflated dome, capped by the object face.
    apex_radius = min(r, math.sqrt(OFF_APEX_AREA_FRACTION) * pad_radius)
    return (math.pi * apex_radius**2 * shared
            * curvature_factor(surface.curvature, r))


def compliance(params: AdhesiveParams, mode: AdhesionMode) -> float:
    """Load-path compliance (m/N): the state actually carrying the load."""
    if mode is AdhesionMode.POSITIVE_TO_POSITIVE:
        return params.c_positive
    return params.c_negative


def _fracture_energy(params: AdhesiveParams, mode: AdhesionMode) -> float:
    if mode is AdhesionMode.NEUTRAL_TO_NEGATIVE:
        return params.g_c_adhesion
    if mode is AdhesionMode.POSITIVE_TO_NEGATIVE:
        return params.g_c_wrapping
    return params.g_c_off


def force_capacity(surface: SurfaceDescriptor, mode: AdhesionMode,
                   params: AdhesiveParams) -> float:
    """Peak normal pull-off force (N) of one pad on the given face."""
    area = contact_area(surface, mode, params.pad_radius)
    return math.sqrt(_fracture_energy(params, mode) * area / compliance(params, mode))


def switching_ratio(surface: SurfaceDescriptor, params: AdhesiveParams,
                    on_mode: AdhesionMode = AdhesionMode.POSITIVE_TO_NEGATIVE) -> float:
    """On/off capacity ratio F_high / F_low for one face."""
    if on_mode is AdhesionMode.POSITIVE_TO_POSITIVE:
        raise ValueError("on_mode must be an engaged mode, not the off state")
    f_low = force_capacity(surface, AdhesionMode.POSITIVE_TO_POSITIVE, params)
    if f_low == 0.0:
        raise ValueError(
            "off-state capacity is zero for this surface; switching ratio is undefined"
        )
    return force_capacity(surface, on_mode, params) / f_low


def fit_fracture_energy(points: Sequence[tuple[float, float]]) -> float:
    """Recover G_c from (sqrt(A/C), F_c) pairs by through-origin least squares.

    The model F = sqrt(G_c) * x is linear through the origin, so the slope
    estimate is sum(x*y)/sum(x^2) and G_c is its square.  Exact on
    noise-free data.
    """
    if len(points) < 2:
        raise ValueError(f"need at least 2 points to fit, got {len(points)}")
    sxx = 0.0
    sxy = 0.0
    for x, y in points:
        if not x > 0.0:
            raise ValueError(f"all sqrt(A/C) abscissae must be positive, got {x}")
        sxx += x * x
        sxy += x * y
    slope = sxy / sxx
    return slope * slope


# Indentation bench protocol.
PRELOAD_PRESSURE_PA = 25_000.0
PRELOAD_HOLD_S = 5.0
RETRACTION_SPEED = 10e-3 / 60.0  # 10 mm/min

_START_COMPLIANCE = {
    PressureState.NEUTRAL: "c_neutral",
    PressureState.POSITIVE: "c_positive",
}


def simulate_indentation(surface: SurfaceDescriptor, mode: AdhesionMode,
                         params: AdhesiveParams,
                         sample_dt: float = 0.1) -> ForceTrace:
    """Deterministic flat-punch indentation cycle for one mode.

    Press in the mode's start state to a 25 kPa preload over the pad
    footprint, hold 5 s (the pressure switch happens during the hold),
    then retract at 10 mm/min.  Unloading runs linearly through the loaded
    state's compliance down to -force_capacity, where the interface
    releases and the force drops to zero.
    """
    if sample_dt <= 0.0:
        raise ValueError("sample_dt must be positive")
    f_pre = PRELOAD_PRESSURE_PA * math.pi * params.pad_radius**2
    c_start = getattr(params, _START_COMPLIANCE[mode.start_state])
    c_load = compliance(params, mode)
    f_c = force_capacity(surface, mode, params)

    samples: list[tuple[float, float, float]] = []

    def emit(t: float, d: float, f: float) -> None:
        if samples and t <= samples[-1][0]:
            return
        samples.append((t, d, f))

    # Approach: displacement ramp in the start state up to the preload.
    d_pre = f_pre * c_start
    t_pre = d_pre / RETRACTION_SPEED
    t = 0.0
    while t < t_pre:
        d = RETRACTION_SPEED * t
        emit(t, d, d / c_start)
        t += sample_dt
    emit(t_pre, d_pre, f_pre)

    # Hold at preload while the pad switches to the loaded state.
    t_hold_end = t_pre + PRELOAD_HOLD_S
    t = t_pre + sample_dt
    while t < t_hold_end:
        emit(t, d_pre, f_pre)
        t += sample_dt
    emit(t_hold_end, d_pre, f_pre)

    # Retraction: linear unloading through the loaded compliance.
    t_pull = t_hold_end + (f_pre + f_c) * c_load / RETRACTION_SPEED
    t = t_hold_end + sample_dt
    while t < t_pull:
        d = d_pre - RETRACTION_SPEED * (t - t_hold_end)
        emit(t, d, f_pre - (RETRACTION_SPEED * (t - t_hold_end)) / c_load)
        t += sample_dt
    d_pull = d_pre - RETRACTION_SPEED * (t_pull - t_hold_end)
    emit(t_pull, d_pull, -f_c)
    emit(t_pull + sample_dt, d_pull - RETRACTION_SPEED * sample_dt, 0.0)

    return ForceTrace(samples=tuple(samples), f_c=f_c)
