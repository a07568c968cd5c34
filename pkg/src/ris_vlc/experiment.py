"""Scenario orchestration: scheme comparisons and transmit-power sweeps."""

from __future__ import annotations

from dataclasses import dataclass, field

from .metrics import (
    ComplianceReport,
    FieldMap,
    Quantity,
    UniformityReport,
    ZoneSpec,
    classify_compliance,
    compute_field,
    gain_percent,
    uniformity,
)
from .optics import ConcentratorConfig, LcRisConfig, Photometry, ReceiverModel
from .scene import (
    Adt,
    Centralized,
    Distributed,
    GridSpec,
    LayoutScheme,
    RisCentralized,
    Room,
    apply_steering,
    build_layout,
)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one comparison run."""

    room: Room = Room()
    grid: GridSpec = GridSpec()
    schemes: tuple[LayoutScheme, ...] = ()
    total_power_w: float = 1.0
    semi_angle_deg: float = 47.75  # calibrated beam half-width
    ris: LcRisConfig = LcRisConfig()
    concentrator: ConcentratorConfig = ConcentratorConfig()
    receiver: ReceiverModel = ReceiverModel()
    photometry: Photometry = Photometry()
    zones: ZoneSpec = ZoneSpec()
    baseline: str = "centralized"

    def __post_init__(self) -> None:
        if not self.schemes:
            object.__setattr__(self, "schemes", default_schemes(self.ris))
        if self.total_power_w <= 0.0:
            raise ValueError(f"total_power_w must be > 0, got {self.total_power_w}")
        names = [s.name for s in self.schemes]
        if len(set(names)) != len(names):
            raise ValueError(f"schemes must be distinct, got {names}")
        if self.baseline not in names:
            raise ValueError(
                f"baseline {self.baseline!r} is not among the schemes {names}"
            )


def default_schemes(ris: LcRisConfig, tau_deg: float = 45.0) -> tuple[LayoutScheme, ...]:
    """The four-way comparison in its canonical order."""
    return (Centralized(), Distributed(), Adt(tau_deg=tau_deg), RisCentralized(ris=ris))


@dataclass(frozen=True)
class SweepSpec:
    parameter: str = "power_w"
    start: float = 0.5
    stop: float = 8.0
    step: float = 0.5

    def __post_init__(self) -> None:
        if self.parameter != "power_w":
            raise ValueError(f"unsupported sweep parameter {self.parameter!r}")
        if self.start > self.stop:
            raise ValueError(f"start {self.start} must be <= stop {self.stop}")
        if self.step <= 0.0:
            raise ValueError(f"step must be > 0, got {self.step}")

    def values(self) -> list[float]:
        out = []
        k = 0
        while True:
            v = self.start + k * self.step
            if v > self.stop + 1e-9 * max(1.0, abs(self.stop)):
                return out
            out.append(v)
            k += 1


@dataclass(frozen=True)
class SchemeResult:
    name: str
    illuminance: FieldMap
    rate: FieldMap
    illuminance_uniformity: UniformityReport
    rate_uniformity: UniformityReport
    compliance: ComplianceReport


@dataclass(frozen=True)
class ComparisonReport:
    baseline: str
    results: tuple[SchemeResult, ...]
    # per non-baseline scheme: metric name -> percent gain over the baseline
    gains: dict[str, dict[str, float]] = field(default_factory=dict)

    def result(self, name: str) -> SchemeResult:
        for r in self.results:
            if r.name == name:
                return r
        raise KeyError(name)


@dataclass(frozen=True)
class SweepRow:
    power_w: float
    min_rate: dict[str, float]
    min_illuminance: dict[str, float]


@dataclass(frozen=True)
class SweepReport:
    parameter: str
    rows: tuple[SweepRow, ...]
    # power intervals where the adt and ris min-rate curves cross, reported
    # as an observation only
    min_rate_crossovers: tuple[tuple[float, float], ...] = ()


def build_emitters(scenario: Scenario, scheme: LayoutScheme,
                   power_w: float | None = None):
    """Emitter set of one scheme, with any LC prism steering applied."""
    power = scenario.total_power_w if power_w is None else power_w
    emitters = build_layout(scheme, scenario.room, power, scenario.semi_angle_deg)
    if isinstance(scheme, RisCentralized):
        emitters = apply_steering(emitters, scheme.ris)
    return emitters


def _scheme_fields(scenario: Scenario, scheme: LayoutScheme,
                   power_w: float | None = None,
                   threads: int | None = None) -> tuple[FieldMap, FieldMap]:
    emitters = build_emitters(scenario, scheme, power_w)
    ris = scheme.ris if isinstance(scheme, RisCentralized) else None
    conc = scenario.concentrator if ris is not None else None
    illum = compute_field(emitters, scenario.room, scenario.grid,
                          Quantity.ILLUMINANCE, photometry=scenario.photometry,
                          receiver=scenario.receiver, ris=ris, concentrator=conc,
                          scheme=scheme.name, threads=threads)
    rate = compute_field(emitters, scenario.room, scenario.grid, Quantity.RATE,
                         photometry=scenario.photometry,
                         receiver=scenario.receiver, ris=ris, concentrator=conc,
                         scheme=scheme.name, threads=threads)
    return illum, rate


def run_scenario(scenario: Scenario, threads: int | None = None) -> ComparisonReport:
    """Compute both field maps plus statistics for every scheme."""
    results = []
    for scheme in scenario.schemes:
        illum, rate = _scheme_fields(scenario, scheme, threads=threads)
        results.append(SchemeResult(
            name=scheme.name,
            illuminance=illum,
            rate=rate,
            illuminance_uniformity=uniformity(illum),
            rate_uniformity=uniformity(rate),
            compliance=classify_compliance(illum, scenario.zones),
        ))

    by_name = {r.name: r for r in results}
    base = by_name[scenario.baseline]
    gains: dict[str, dict[str, float]] = {}
    for r in results:
        if r.name == scenario.baseline:
            continue
        gains[r.name] = {
            "min_illuminance_pct": gain_percent(
                r.illuminance_uniformity.min, base.illuminance_uniformity.min),
            "avg_illuminance_pct": gain_percent(
                r.illuminance_uniformity.avg, base.illuminance_uniformity.avg),
            "max_illuminance_pct": gain_percent(
                r.illuminance_uniformity.max, base.illuminance_uniformity.max),
            "min_rate_pct": gain_percent(
                r.rate_uniformity.min, base.rate_uniformity.min),
            "avg_rate_pct": gain_percent(
                r.rate_uniformity.avg, base.rate_uniformity.avg),
            "max_rate_pct": gain_percent(
                r.rate_uniformity.max, base.rate_uniformity.max),
        }
    return ComparisonReport(baseline=scenario.baseline, results=tuple(results),
                            gains=gains)


def power_sweep(scenario: Scenario, sweep: SweepSpec,
                threads: int | None = None) -> SweepReport:
    """Minimum rate and illuminance per scheme across transmit powers."""
    rows = []
    for power in sweep.values():
        min_rate: dict[str, float] = {}
        min_illum: dict[str, float] = {}
        for scheme in scenario.schemes:
            illum, rate = _scheme_fields(scenario, scheme, power_w=power,
                                         threads=threads)
            min_rate[scheme.name] = float(rate.values.min())
            min_illum[scheme.name] = float(illum.values.min())
        rows.append(SweepRow(power_w=power, min_rate=min_rate,
                             min_illuminance=min_illum))

    crossovers = []
    names = {s.name for s in scenario.schemes}
    if {"adt", "ris"} <= names:
        for a, b in zip(rows[:-1], rows[1:]):
            d0 = a.min_rate["ris"] - a.min_rate["adt"]
            d1 = b.min_rate["ris"] - b.min_rate["adt"]
            if d0 == 0.0 or (d0 > 0.0) != (d1 > 0.0):
                crossovers.append((a.power_w, b.power_w))
    return SweepReport(parameter=sweep.parameter, rows=tuple(rows),
                       min_rate_crossovers=tuple(crossovers))
