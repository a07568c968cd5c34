"""Room geometry, transmitter layouts, and receiver-plane sampling."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .optics import LcRisConfig, lambertian_order, steering_deviation

_UNIT_NORM_TOL = 1e-12


@dataclass(frozen=True)
class Vec3:
    x: float
    y: float
    z: float

    def __add__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x + other.x, self.y + other.y, self.z + other.z)

    def __sub__(self, other: "Vec3") -> "Vec3":
        return Vec3(self.x - other.x, self.y - other.y, self.z - other.z)

    def dot(self, other: "Vec3") -> float:
        return self.x * other.x + self.y * other.y + self.z * other.z

    def norm(self) -> float:
        return math.sqrt(self.dot(self))

    def normalized(self) -> "Vec3":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return Vec3(self.x / n, self.y / n, self.z / n)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class Room:
    length_m: float = 5.0
    width_m: float = 5.0
    height_m: float = 3.0

    def __post_init__(self) -> None:
        for name in ("length_m", "width_m", "height_m"):
            value = getattr(self, name)
            if value <= 0.0:
                raise ValueError(f"{name} must be > 0, got {value}")

    @property
    def center_xy(self) -> tuple[float, float]:
        return (self.length_m / 2.0, self.width_m / 2.0)


@dataclass(frozen=True)
class Emitter:
    """Point-source LED array: position, boresight, optical power, beam width."""

    position: Vec3
    normal: Vec3
    power_w: float
    semi_angle_deg: float
    lambertian_order: float | None = None

    def __post_init__(self) -> None:
        if self.power_w < 0.0:
            raise ValueError(f"power_w must be >= 0, got {self.power_w}")
        if not 0.0 < self.semi_angle_deg < 90.0:
            raise ValueError(
                f"semi_angle_deg must be in (0, 90), got {self.semi_angle_deg}"
            )
        if abs(self.normal.norm() - 1.0) > _UNIT_NORM_TOL:
            object.__setattr__(self, "normal", self.normal.normalized())
        m = lambertian_order(self.semi_angle_deg)
        if self.lambertian_order is None:
            object.__setattr__(self, "lambertian_order", m)
        elif not math.isclose(self.lambertian_order, m, rel_tol=1e-12, abs_tol=1e-12):
            raise ValueError(
                f"lambertian_order {self.lambertian_order} inconsistent with "
                f"semi_angle_deg {self.semi_angle_deg} (expected {m})"
            )


@dataclass(frozen=True)
class Centralized:
    array_count: int = 4
    name = "centralized"


@dataclass(frozen=True)
class Distributed:
    array_count: int = 4
    name = "distributed"


@dataclass(frozen=True)
class Adt:
    """Angle-diversity transmitter: co-located arrays tilted outward."""

    tau_deg: float = 45.0
    array_count: int = 4
    name = "adt"

    def __post_init__(self) -> None:
        if not 0.0 < self.tau_deg < 90.0:
            raise ValueError(f"tau_deg must be in (0, 90), got {self.tau_deg}")


@dataclass(frozen=True)
class RisCentralized:
    """Centralized array with a liquid-crystal cell at its front end."""

    ris: LcRisConfig
    array_count: int = 4
    name = "ris"


LayoutScheme = Centralized | Distributed | Adt | RisCentralized


@dataclass(frozen=True)
class GridSpec:
    nx: int = 100
    ny: int = 100
    plane_height_m: float = 0.85

    def __post_init__(self) -> None:
        if self.nx < 1 or self.ny < 1:
            raise ValueError(f"nx and ny must be >= 1, got {self.nx} x {self.ny}")
        if self.plane_height_m < 0.0:
            raise ValueError(
                f"plane_height_m must be >= 0, got {self.plane_height_m}"
            )


@dataclass(frozen=True)
class LinkGeometry:
    distance_m: float
    irradiance_angle_rad: float  # off the emitter boresight
    incidence_angle_rad: float   # off the receiver normal


def adt_normals(tau_deg: float) -> list[Vec3]:
    """Four unit boresights tilted by tau toward the diagonal azimuths."""
    if not 0.0 < tau_deg < 90.0:
        raise ValueError(f"tau_deg must be in (0, 90), got {tau_deg}")
    tau = math.radians(tau_deg)
    sin_tau, cos_tau = math.sin(tau), math.cos(tau)
    normals = []
    for k in range(4):
        psi = math.radians(45.0 + 90.0 * k)
        v = Vec3(sin_tau * math.cos(psi), sin_tau * math.sin(psi), -cos_tau)
        normals.append(v.normalized())
    return normals


def build_layout(scheme: LayoutScheme, room: Room, total_power_w: float,
                 semi_angle_deg: float) -> list[Emitter]:
    """Place the emitters of one transmitter scheme on the ceiling.

    Total optical power is conserved exactly across schemes so the
    comparison stays at equal input power; any LC front-end effects are
    applied downstream of the layout.
    """
    if total_power_w < 0.0:
        raise ValueError(f"total_power_w must be >= 0, got {total_power_w}")
    down = Vec3(0.0, 0.0, -1.0)
    cx, cy = room.center_xy
    ceiling = room.height_m

    if isinstance(scheme, (Centralized, RisCentralized)):
        return [Emitter(Vec3(cx, cy, ceiling), down, total_power_w, semi_angle_deg)]

    if scheme.array_count != 4:
        raise ValueError(
            f"{scheme.name} layout is defined for 4 arrays, got {scheme.array_count}"
        )
    share = total_power_w / 4.0

    if isinstance(scheme, Distributed):
        quadrants = [
            (room.length_m / 4.0, room.width_m / 4.0),
            (3.0 * room.length_m / 4.0, room.width_m / 4.0),
            (room.length_m / 4.0, 3.0 * room.width_m / 4.0),
            (3.0 * room.length_m / 4.0, 3.0 * room.width_m / 4.0),
        ]
        return [Emitter(Vec3(x, y, ceiling), down, share, semi_angle_deg)
                for x, y in quadrants]

    if isinstance(scheme, Adt):
        return [Emitter(Vec3(cx, cy, ceiling), n, share, semi_angle_deg)
                for n in adt_normals(scheme.tau_deg)]

    raise TypeError(f"unknown layout scheme: {scheme!r}")


def steered_normal(normal: Vec3, cfg: LcRisConfig) -> Vec3:
    """Tilt a boresight by the prism deviation toward the configured azimuth."""
    dev = steering_deviation(cfg)
    if dev == 0.0:
        return normal
    psi = math.radians(cfg.steer_azimuth_deg)
    # Rodrigues rotation about the horizontal axis perpendicular to the
    # steering azimuth; leans a downward boresight toward the azimuth.
    kx, ky, kz = math.sin(psi), -math.cos(psi), 0.0
    cos_d, sin_d = math.cos(dev), math.sin(dev)
    vx, vy, vz = normal.x, normal.y, normal.z
    crossx = ky * vz - kz * vy
    crossy = kz * vx - kx * vz
    crossz = kx * vy - ky * vx
    kdotv = kx * vx + ky * vy + kz * vz
    rotated = Vec3(
        vx * cos_d + crossx * sin_d + kx * kdotv * (1.0 - cos_d),
        vy * cos_d + crossy * sin_d + ky * kdotv * (1.0 - cos_d),
        vz * cos_d + crossz * sin_d + kz * kdotv * (1.0 - cos_d),
    )
    return rotated.normalized()


def apply_steering(emitters: list[Emitter], cfg: LcRisConfig) -> list[Emitter]:
    """Apply the LC prism tilt to every emitter boresight."""
    return [replace(e, normal=steered_normal(e.normal, cfg)) for e in emitters]


def cell_centers(room: Room, spec: GridSpec) -> tuple[list[float], list[float]]:
    """Cell-center coordinates of the sensing grid along x and y."""
    if spec.plane_height_m >= room.height_m:
        raise ValueError(
            f"plane_height_m {spec.plane_height_m} must be below the "
            f"room height {room.height_m}"
        )
    xs = [(i + 0.5) * room.length_m / spec.nx for i in range(spec.nx)]
    ys = [(j + 0.5) * room.width_m / spec.ny for j in range(spec.ny)]
    return xs, ys


def grid_points(room: Room, spec: GridSpec) -> list[Vec3]:
    """Sensing points in row-major order (x varies fastest)."""
    xs, ys = cell_centers(room, spec)
    z = spec.plane_height_m
    return [Vec3(x, y, z) for y in ys for x in xs]


def link_geometry(e: Emitter, p: Vec3, receiver_normal: Vec3) -> LinkGeometry:
    """Distance and angle pair of one emitter-to-point link."""
    delta = p - e.position
    dist = delta.norm()
    if dist == 0.0:
        raise ValueError("receiver point coincides with the emitter position")
    cos_irr = delta.dot(e.normal) / dist
    cos_inc = (e.position - p).dot(receiver_normal) / dist
    clamp = lambda c: min(1.0, max(-1.0, c))
    return LinkGeometry(
        distance_m=dist,
        irradiance_angle_rad=math.acos(clamp(cos_irr)),
        incidence_angle_rad=math.acos(clamp(cos_inc)),
    )
