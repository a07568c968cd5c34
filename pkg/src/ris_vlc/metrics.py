"""Field maps over the receiver plane and the statistics derived from them.

Per-point illuminance and achievable rate follow the same link model as the
scalar helpers in :mod:`ris_vlc.optics`; ``compute_field`` evaluates them
vectorized over the whole sensing grid.  Per-cell arithmetic is independent
of how rows are chunked across worker threads, and the sum over emitters is
taken in fixed list order, so the output is bit-identical for any degree of
parallelism.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .optics import (
    ConcentratorConfig,
    LcRisConfig,
    Photometry,
    ReceiverModel,
    amplification_factor,
    concentrator_gain,
    lc_transmission,
    los_gain,
    rate_from_received_power,
    receiver_concentrator_gain,
)
from .scene import Emitter, GridSpec, Room, Vec3, cell_centers, link_geometry

THREADS_ENV_VAR = "RIS_VLC_THREADS"

RECEIVER_NORMAL = Vec3(0.0, 0.0, 1.0)  # upward-facing desk device


class Quantity(str, Enum):
    ILLUMINANCE = "illuminance"
    RATE = "rate"

    @property
    def units(self) -> str:
        return "lux" if self is Quantity.ILLUMINANCE else "bit/s"


@dataclass(eq=False)
class FieldMap:
    """Scalar samples over the sensing grid, row-major with x varying fastest."""

    nx: int
    ny: int
    xs: tuple[float, ...]
    ys: tuple[float, ...]
    values: np.ndarray
    quantity: Quantity
    scheme: str
    units: str

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.nx * self.ny,):
            raise ValueError(
                f"values must be a flat array of {self.nx * self.ny} samples, "
                f"got shape {self.values.shape}"
            )
        if len(self.xs) != self.nx or len(self.ys) != self.ny:
            raise ValueError("coordinate axes do not match the grid dimensions")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field values must be finite")
        if np.any(self.values < 0.0):
            raise ValueError("field values must be >= 0")

    @property
    def grid(self) -> np.ndarray:
        """Samples reshaped to (ny, nx)."""
        return self.values.reshape(self.ny, self.nx)


@dataclass(frozen=True)
class UniformityReport:
    min: float
    max: float
    avg: float
    uniformity: float  # min / avg, 0 for an all-zero field


@dataclass(frozen=True)
class ZoneSpec:
    """Lighting zones: central task square, surrounding band, background."""

    task_side_m: float = 2.5
    band_m: float = 0.5
    task_lux: float = 400.0
    immediate_lux: float = 500.0
    background_lux: float = 200.0

    def __post_init__(self) -> None:
        if self.task_side_m <= 0.0 or self.band_m < 0.0:
            raise ValueError("task_side_m must be > 0 and band_m >= 0")
        for name in ("task_lux", "immediate_lux", "background_lux"):
            if getattr(self, name) < 0.0:
                raise ValueError(f"{name} must be >= 0")


@dataclass(frozen=True)
class ZoneVerdict:
    min_lux: float | None  # None when no grid cell falls in the zone
    required_lux: float
    passed: bool


@dataclass(frozen=True)
class ComplianceReport:
    task: ZoneVerdict
    immediate: ZoneVerdict
    background: ZoneVerdict
    area_fraction_at_or_above_400_lux: float

    @property
    def zones(self) -> dict[str, ZoneVerdict]:
        return {"task": self.task, "immediate": self.immediate,
                "background": self.background}


def illuminance_at(emitters: list[Emitter], ris: LcRisConfig | None,
                   photometry: Photometry,
                   concentrator: ConcentratorConfig | None,
                   point: Vec3) -> float:
    """Illuminance (lux) at one point, summed over emitters.

    Plain schemes reduce to the bare Lambertian expression (unit
    amplification, transmission, and concentrator gain).
    """
    total = 0.0
    for e in emitters:
        geom = link_geometry(e, point, RECEIVER_NORMAL)
        cos_irr = math.cos(geom.irradiance_angle_rad)
        if cos_irr <= 0.0:
            continue
        cos_inc = math.cos(geom.incidence_angle_rad)
        if cos_inc <= 0.0:
            continue
        lumens_per_w = 1.0 / photometry.delta_w_per_lm
        term = (e.power_w * (e.lambertian_order + 1.0)
                / (2.0 * math.pi * geom.distance_m ** 2) * lumens_per_w
                * cos_irr ** e.lambertian_order * cos_inc)
        if ris is not None:
            term *= amplification_factor(ris) * lc_transmission(ris)
            if concentrator is not None:
                term *= concentrator_gain(geom.incidence_angle_rad, concentrator)
        total += term
    return total


def rate_at(emitters: list[Emitter], ris: LcRisConfig | None,
            rx: ReceiverModel, point: Vec3) -> float:
    """Achievable rate (bit/s) at one point from the summed received power."""
    received = 0.0
    for e in emitters:
        geom = link_geometry(e, point, RECEIVER_NORMAL)
        power = e.power_w
        if ris is not None:
            power *= amplification_factor(ris) * lc_transmission(ris)
        received += power * los_gain(geom, e.lambertian_order, rx)
    return rate_from_received_power(received, rx)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR, "1")
        try:
            threads = int(raw)
        except ValueError as exc:
            raise ValueError(
                f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
            ) from exc
    if threads < 0:
        raise ValueError(f"thread count must be >= 0, got {threads}")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def _field_rows(emitters: list[Emitter], xs: np.ndarray, ys: np.ndarray,
                plane_z: float, quantity: Quantity,
                ris: LcRisConfig | None, photometry: Photometry,
                concentrator: ConcentratorConfig | None,
                rx: ReceiverModel) -> np.ndarray:
    """Evaluate one block of grid rows; returns shape (len(ys), len(xs))."""
    X = xs[np.newaxis, :]
    Y = ys[:, np.newaxis]
    out = np.zeros((len(ys), len(xs)))

    if ris is not None:
        boost = amplification_factor(ris) * lc_transmission(ris)
    else:
        boost = 1.0

    if quantity is Quantity.ILLUMINANCE:
        lumens_per_w = 1.0 / photometry.delta_w_per_lm
    else:
        cos_fov = math.cos(math.radians(rx.fov_semi_angle_deg))
        rx_gain = rx.area_m2 * rx.filter_gain * receiver_concentrator_gain(rx)

    for e in emitters:
        dx = X - e.position.x
        dy = Y - e.position.y
        dz = plane_z - e.position.z
        dist_sq = dx * dx + dy * dy + dz * dz
        dist = np.sqrt(dist_sq)
        cos_irr = (dx * e.normal.x + dy * e.normal.y + dz * e.normal.z) / dist
        cos_inc = -dz / dist  # receiver normal is +z
        visible = (cos_irr > 0.0) & (cos_inc > 0.0)
        cos_pow = np.where(visible, cos_irr, 1.0) ** e.lambertian_order
        base = (e.power_w * (e.lambertian_order + 1.0) / (2.0 * math.pi * dist_sq)
                * cos_pow * cos_inc)

        if quantity is Quantity.ILLUMINANCE:
            term = base * lumens_per_w * boost
            if ris is not None and concentrator is not None:
                accept = math.radians(concentrator.accept_semi_angle_deg)
                inside = cos_inc >= math.cos(accept)
                if concentrator.angle_dependent_gain:
                    phi = np.arccos(np.clip(cos_inc, -1.0, 1.0))
                    phi = np.maximum(phi, math.radians(1.0))
                    gain = concentrator.refr_index_f ** 2 / np.sin(phi) ** 2
                else:
                    gain = concentrator.refr_index_f ** 2 / math.sin(accept) ** 2
                term = term * np.where(inside, gain, 0.0)
            out += np.where(visible, term, 0.0)
        else:
            in_fov = visible & (cos_inc >= cos_fov)
            out += np.where(in_fov, base * rx_gain * boost, 0.0)

    if quantity is Quantity.RATE:
        snr = (rx.responsivity_a_per_w * out) ** 2 / (
            rx.noise_psd_a2_per_hz * rx.bandwidth_hz
        )
        if rx.rate_model == "lower_bound":
            snr *= math.e / (2.0 * math.pi)
        out = rx.bandwidth_hz * np.log2(1.0 + snr)
    return out


def compute_field(emitters: list[Emitter], room: Room, spec: GridSpec,
                  quantity: Quantity, *,
                  photometry: Photometry | None = None,
                  receiver: ReceiverModel | None = None,
                  ris: LcRisConfig | None = None,
                  concentrator: ConcentratorConfig | None = None,
                  scheme: str = "", threads: int | None = None) -> FieldMap:
    """Evaluate a quantity at every sensing point of the grid."""
    quantity = Quantity(quantity)
    photometry = photometry if photometry is not None else Photometry()
    receiver = receiver if receiver is not None else ReceiverModel()
    xs_list, ys_list = cell_centers(room, spec)
    xs = np.array(xs_list)
    ys = np.array(ys_list)

    n_threads = _resolve_threads(threads)
    kwargs = dict(quantity=quantity, ris=ris, photometry=photometry,
                  concentrator=concentrator, rx=receiver)
    if n_threads == 1 or spec.ny < 2 * n_threads:
        values = _field_rows(emitters, xs, ys, spec.plane_height_m, **kwargs)
    else:
        bounds = np.linspace(0, spec.ny, n_threads + 1, dtype=int)
        chunks = [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            blocks = list(pool.map(
                lambda ab: _field_rows(emitters, xs, ys[ab[0]:ab[1]],
                                       spec.plane_height_m, **kwargs),
                chunks,
            ))
        values = np.vstack(blocks)

    return FieldMap(nx=spec.nx, ny=spec.ny, xs=tuple(xs_list), ys=tuple(ys_list),
                    values=values.reshape(-1), quantity=quantity,
                    scheme=scheme, units=quantity.units)


def uniformity(fmap: FieldMap) -> UniformityReport:
    """Min, max, mean, and min/avg ratio over all cells."""
    values = fmap.values
    if values.size == 0:
        raise ValueError("cannot compute uniformity of an empty field map")
    vmin = float(values.min())
    vmax = float(values.max())
    # summation rounding can push the mean an ulp outside [min, max] for
    # near-constant fields; the true mean always lies inside
    vavg = min(max(float(values.mean()), vmin), vmax)
    ratio = vmin / vavg if vavg > 0.0 else 0.0
    return UniformityReport(min=vmin, max=vmax, avg=vavg, uniformity=ratio)


def gain_percent(new_value: float, baseline: float) -> float:
    """Relative gain of ``new_value`` over ``baseline`` in percent."""
    if baseline <= 0.0:
        raise ValueError(f"baseline must be > 0, got {baseline}")
    return (new_value / baseline - 1.0) * 100.0


def _zone_masks(fmap: FieldMap, zones: ZoneSpec) -> dict[str, np.ndarray]:
    xs = np.array(fmap.xs)
    ys = np.array(fmap.ys)
    cx = (xs[0] + xs[-1]) / 2.0
    cy = (ys[0] + ys[-1]) / 2.0
    X = np.tile(xs, fmap.ny)
    Y = np.repeat(ys, fmap.nx)
    half = zones.task_side_m / 2.0
    outer = half + zones.band_m
    in_task = (np.abs(X - cx) <= half) & (np.abs(Y - cy) <= half)
    in_outer = (np.abs(X - cx) <= outer) & (np.abs(Y - cy) <= outer)
    return {
        "task": in_task,
        "immediate": in_outer & ~in_task,
        "background": ~in_outer,
    }


def classify_compliance(fmap: FieldMap, zones: ZoneSpec | None = None) -> ComplianceReport:
    """Check zone minima against the lighting thresholds.

    A zone with no grid cells passes vacuously with ``min_lux`` None.
    """
    if fmap.quantity is not Quantity.ILLUMINANCE:
        raise ValueError("compliance is defined for illuminance maps only")
    zones = zones if zones is not None else ZoneSpec()
    masks = _zone_masks(fmap, zones)
    required = {"task": zones.task_lux, "immediate": zones.immediate_lux,
                "background": zones.background_lux}
    verdicts = {}
    for name, mask in masks.items():
        if not mask.any():
            verdicts[name] = ZoneVerdict(min_lux=None, required_lux=required[name],
                                         passed=True)
            continue
        zone_min = float(fmap.values[mask].min())
        verdicts[name] = ZoneVerdict(min_lux=zone_min, required_lux=required[name],
                                     passed=zone_min >= required[name])
    fraction = float(np.count_nonzero(fmap.values >= 400.0)) / fmap.values.size
    return ComplianceReport(task=verdicts["task"], immediate=verdicts["immediate"],
                            background=verdicts["background"],
                            area_fraction_at_or_above_400_lux=fraction)
