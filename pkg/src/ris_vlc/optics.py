"""Physical-layer formulas for the optical link.

Everything here is a pure function of immutable config values: Lambertian
emission order, line-of-sight channel gain, non-imaging concentrator gain,
the liquid-crystal front end (Fresnel transmission, stimulated-emission
amplification, prism steering), and the IM/DD achievable-rate mapping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import mpmath

if TYPE_CHECKING:  # geometry types only; avoids a runtime import cycle
    from .scene import LinkGeometry

_MAX_WEDGE_RAD = math.radians(15.0)
# Floor for the angle-dependent concentrator form, which diverges as the
# incidence angle approaches zero.
_CONCENTRATOR_FLOOR_RAD = math.radians(1.0)

RATE_MODELS = ("shannon", "lower_bound")


class TotalInternalReflection(ValueError):
    """Refraction is impossible: the transmitted-angle sine exceeds 1."""


@dataclass(frozen=True)
class LcRisConfig:
    """Liquid-crystal cell placed at the front end of an LED array.

    The cell transmits passively (Fresnel losses only) until the drive
    voltage exceeds the threshold voltage, at which point the reoriented
    molecules amplify the traversing beam by exp(gamma * thickness) and a
    wedge profile can steer the boresight.
    """

    n_air: float = 1.0
    n_lc: float = 1.55
    thickness_m: float = 7.5e-4
    gamma_per_m: float = 4694.0  # calibrated; exp(gamma*d) ~ 33.8
    drive_voltage_v: float = 2.1
    threshold_voltage_v: float = 1.34
    wedge_angle_rad: float = 0.0
    steer_azimuth_deg: float = 0.0  # direction the steered boresight leans toward

    def __post_init__(self) -> None:
        if self.n_air < 1.0:
            raise ValueError(f"n_air must be >= 1, got {self.n_air}")
        if self.n_lc < self.n_air:
            raise ValueError(f"n_lc must be >= n_air, got {self.n_lc} < {self.n_air}")
        if self.thickness_m <= 0.0:
            raise ValueError(f"thickness_m must be > 0, got {self.thickness_m}")
        if self.gamma_per_m < 0.0:
            raise ValueError(f"gamma_per_m must be >= 0, got {self.gamma_per_m}")
        if self.threshold_voltage_v <= 0.0:
            raise ValueError(
                f"threshold_voltage_v must be > 0, got {self.threshold_voltage_v}"
            )
        if abs(self.wedge_angle_rad) > _MAX_WEDGE_RAD:
            raise ValueError(
                "wedge_angle_rad outside the thin-prism regime "
                f"(|angle| <= 15 deg), got {self.wedge_angle_rad}"
            )


@dataclass(frozen=True)
class ConcentratorConfig:
    """Non-imaging concentrator between the LED array and the LC cell.

    The standard form is a constant gain f^2 / sin^2(acceptance angle)
    inside the acceptance cone.  ``angle_dependent_gain`` switches to the
    divergent f^2 / sin^2(phi) variant (floored at 1 degree) for
    sensitivity studies.
    """

    refr_index_f: float = 1.0
    accept_semi_angle_deg: float = 90.0
    angle_dependent_gain: bool = False

    def __post_init__(self) -> None:
        if self.refr_index_f < 1.0:
            raise ValueError(f"refr_index_f must be >= 1, got {self.refr_index_f}")
        if not 0.0 < self.accept_semi_angle_deg <= 90.0:
            raise ValueError(
                "accept_semi_angle_deg must be in (0, 90], "
                f"got {self.accept_semi_angle_deg}"
            )


@dataclass(frozen=True)
class ReceiverModel:
    """Photodetector parameters for the achievable-rate calculation."""

    area_m2: float = 1e-4
    fov_semi_angle_deg: float = 60.0
    responsivity_a_per_w: float = 0.4
    noise_psd_a2_per_hz: float = 5.5e-23
    bandwidth_hz: float = 2e8
    filter_gain: float = 1.0
    concentrator: ConcentratorConfig | None = None
    rate_model: str = "shannon"

    def __post_init__(self) -> None:
        for name in ("area_m2", "responsivity_a_per_w", "noise_psd_a2_per_hz",
                     "bandwidth_hz", "filter_gain"):
            value = getattr(self, name)
            if value <= 0.0:
                raise ValueError(f"{name} must be > 0, got {value}")
        if not 0.0 < self.fov_semi_angle_deg <= 90.0:
            raise ValueError(
                f"fov_semi_angle_deg must be in (0, 90], got {self.fov_semi_angle_deg}"
            )
        if self.rate_model not in RATE_MODELS:
            raise ValueError(
                f"rate_model must be one of {RATE_MODELS}, got {self.rate_model!r}"
            )


@dataclass(frozen=True)
class Photometry:
    """Optical-to-luminous conversion at the operating wavelength."""

    delta_w_per_lm: float = 1.0 / (683.0 * 0.503)
    wavelength_nm: float = 510.0
    luminosity_v: float = 0.503

    def __post_init__(self) -> None:
        if self.delta_w_per_lm <= 0.0:
            raise ValueError(f"delta_w_per_lm must be > 0, got {self.delta_w_per_lm}")
        if not 0.0 < self.luminosity_v <= 1.0:
            raise ValueError(f"luminosity_v must be in (0, 1], got {self.luminosity_v}")


def lambertian_order(semi_angle_deg: float) -> float:
    """Emission order m = -1 / log2(cos(semi-angle)).

    Evaluated in extended precision so the landmark values come out exact
    in double precision (60 deg -> 1.0, 45 deg -> 2.0).
    """
    if not 0.0 < semi_angle_deg < 90.0:
        raise ValueError(f"semi_angle_deg must be in (0, 90), got {semi_angle_deg}")
    with mpmath.workdps(40):
        cos_half = mpmath.cos(mpmath.radians(mpmath.mpf(semi_angle_deg)))
        return float(-1 / mpmath.log(cos_half, 2))


def fresnel_transmittance(n_from: float, n_to: float) -> float:
    """Normal-incidence power transmittance 4*n1*n2 / (n1+n2)^2 at one face.

    Squared via multiplication (libm pow can be an ulp off) and capped at 1,
    where the true value sits whenever the indices match.
    """
    total = n_from + n_to
    return min(4.0 * n_from * n_to / (total * total), 1.0)


def lc_transmission(cfg: LcRisConfig) -> float:
    """Transmission coefficient of the LC cell: Fresnel loss at entry and exit."""
    return fresnel_transmittance(cfg.n_air, cfg.n_lc) ** 2


def ris_active(cfg: LcRisConfig) -> bool:
    """True once the drive voltage strictly exceeds the reorientation threshold."""
    return cfg.drive_voltage_v > cfg.threshold_voltage_v


def amplification_factor(cfg: LcRisConfig) -> float:
    """Stimulated-emission gain exp(gamma*d); a biased-off cell does not amplify."""
    if not ris_active(cfg):
        return 1.0
    return math.exp(cfg.gamma_per_m * cfg.thickness_m)


def snell_angle(theta_in_rad: float, n_from: float, n_to: float) -> float:
    """Refracted angle at an interface, raising on total internal reflection."""
    if not 0.0 <= theta_in_rad <= math.pi / 2:
        raise ValueError(f"theta_in_rad must be in [0, pi/2], got {theta_in_rad}")
    sin_out = n_from * math.sin(theta_in_rad) / n_to
    if sin_out > 1.0:
        raise TotalInternalReflection(
            f"sin(theta_out) = {sin_out:.6f} > 1 for "
            f"theta_in = {math.degrees(theta_in_rad):.3f} deg, "
            f"n {n_from} -> {n_to}"
        )
    return math.asin(min(max(sin_out, -1.0), 1.0))


def steering_deviation(cfg: LcRisConfig) -> float:
    """Boresight tilt of the thin-prism cell: (n_lc/n_air - 1) * wedge angle.

    Zero when the cell is biased off or has no wedge.
    """
    if cfg.wedge_angle_rad == 0.0 or not ris_active(cfg):
        return 0.0
    return (cfg.n_lc / cfg.n_air - 1.0) * cfg.wedge_angle_rad


def effective_emitted_power(p_in_w: float, cfg: LcRisConfig | None) -> float:
    """Optical power leaving the LC cell; identity when no cell is fitted."""
    if p_in_w < 0.0:
        raise ValueError(f"p_in_w must be >= 0, got {p_in_w}")
    if cfg is None:
        return p_in_w
    return amplification_factor(cfg) * lc_transmission(cfg) * p_in_w


def concentrator_gain(phi_rad: float, c: ConcentratorConfig) -> float:
    """Concentrator gain at incidence angle phi; zero outside the acceptance cone."""
    if phi_rad < 0.0:
        raise ValueError(f"phi_rad must be >= 0, got {phi_rad}")
    accept_rad = math.radians(c.accept_semi_angle_deg)
    if phi_rad > accept_rad:
        return 0.0
    if c.angle_dependent_gain:
        phi_eff = max(phi_rad, _CONCENTRATOR_FLOOR_RAD)
        return c.refr_index_f ** 2 / math.sin(phi_eff) ** 2
    return c.refr_index_f ** 2 / math.sin(accept_rad) ** 2


def receiver_concentrator_gain(rx: ReceiverModel) -> float:
    """Constant gain of an optional receiver-side concentrator over the FOV cone."""
    if rx.concentrator is None:
        return 1.0
    fov_rad = math.radians(rx.fov_semi_angle_deg)
    return rx.concentrator.refr_index_f ** 2 / math.sin(fov_rad) ** 2


def los_gain(geom: "LinkGeometry", m: float, rx: ReceiverModel) -> float:
    """DC gain of the line-of-sight link.

    (m+1) A / (2 pi l^2) * cos^m(Phi) * T_f * g * cos(phi) inside the
    receiver FOV and the emitter's forward hemisphere, zero beyond either.
    """
    cos_irr = math.cos(geom.irradiance_angle_rad)
    if cos_irr < 0.0:
        return 0.0
    if geom.incidence_angle_rad > math.radians(rx.fov_semi_angle_deg):
        return 0.0
    cos_inc = math.cos(geom.incidence_angle_rad)
    if cos_inc < 0.0:
        return 0.0
    geometry = (m + 1.0) * rx.area_m2 / (2.0 * math.pi * geom.distance_m ** 2)
    return (geometry * cos_irr ** m * rx.filter_gain
            * receiver_concentrator_gain(rx) * cos_inc)


def rate_from_received_power(p_r_w: float, rx: ReceiverModel) -> float:
    """Achievable rate of an IM/DD link from the received optical power.

    Electrical SNR = (responsivity * P_r)^2 / (N0 * B); the default maps it
    through B*log2(1+SNR), the lower-bound model scales the SNR by e/(2*pi).
    """
    snr = (rx.responsivity_a_per_w * p_r_w) ** 2 / (
        rx.noise_psd_a2_per_hz * rx.bandwidth_hz
    )
    if rx.rate_model == "lower_bound":
        snr *= math.e / (2.0 * math.pi)
    return rx.bandwidth_hz * math.log2(1.0 + snr)
