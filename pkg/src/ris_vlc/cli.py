"""Command-line front end.

Scenario configs are JSON; every field has a default, so ``{}`` reproduces
the standard 5 m x 5 m x 3 m four-scheme comparison.  Outputs under
``--out`` use deterministic names: ``<scheme>_<quantity>.csv``,
``<scheme>_<quantity>.ppm``, and ``report.json``.

Exit codes: 0 success, 2 config error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .experiment import (
    ComparisonReport,
    Scenario,
    SweepReport,
    SweepSpec,
    power_sweep,
    run_scenario,
)
from .metrics import FieldMap, Quantity, ZoneSpec
from .optics import ConcentratorConfig, LcRisConfig, Photometry, ReceiverModel
from .scene import Adt, Centralized, Distributed, GridSpec, RisCentralized, Room


class ConfigError(ValueError):
    """A scenario config failed validation; the message names the field path."""


_SCHEME_NAMES = ("centralized", "distributed", "adt", "ris")


# ---------------------------------------------------------------------------
# config parsing

def _check_type(value, f: dataclasses.Field, path: str):
    name = f"{path}.{f.name}" if path else f.name
    if f.type in ("float", "float | None"):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{name}: expected a number, got {value!r}")
        return float(value)
    if f.type == "int":
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(f"{name}: expected an integer, got {value!r}")
        return value
    if f.type == "bool":
        if not isinstance(value, bool):
            raise ConfigError(f"{name}: expected true/false, got {value!r}")
        return value
    if f.type == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{name}: expected a string, got {value!r}")
        return value
    raise ConfigError(f"{name}: unsupported value {value!r}")


def _build_section(cls, data, path: str, skip: tuple[str, ...] = ()):
    """Instantiate a config dataclass from a dict, naming bad fields."""
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path or cls.__name__}: expected an object, got {data!r}")
    known = {f.name: f for f in dataclasses.fields(cls) if f.name not in skip}
    unknown = sorted(set(data) - set(known))
    if unknown:
        raise ConfigError(
            f"unknown field(s) in {path or 'config'}: {', '.join(unknown)}"
        )
    kwargs = {name: _check_type(data[name], known[name], path) for name in data}
    try:
        return cls(**kwargs)
    except ValueError as exc:
        message = str(exc)
        for name in known:
            if message.startswith(name):
                message = f"{path}.{message}" if path else message
                break
        else:
            message = f"{path}: {message}" if path else message
        raise ConfigError(message) from exc


def _build_receiver(data, path: str) -> ReceiverModel:
    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected an object, got {data!r}")
    conc_data = data.pop("concentrator", None)
    rx = _build_section(ReceiverModel, data, path, skip=("concentrator",))
    if conc_data is not None:
        conc = _build_section(ConcentratorConfig, conc_data, f"{path}.concentrator")
        rx = dataclasses.replace(rx, concentrator=conc)
    return rx


def build_scenario(config: dict) -> Scenario:
    """Validated Scenario from a config dict, applying defaults throughout."""
    if not isinstance(config, dict):
        raise ConfigError(f"top-level config must be an object, got {config!r}")
    top_level = {"room", "grid", "schemes", "baseline", "total_power_w",
                 "semi_angle_deg", "adt", "ris", "concentrator", "receiver",
                 "photometry", "zones"}
    unknown = sorted(set(config) - top_level)
    if unknown:
        raise ConfigError(f"unknown field(s) in config: {', '.join(unknown)}")

    room = _build_section(Room, config.get("room"), "room")
    grid = _build_section(GridSpec, config.get("grid"), "grid")
    ris = _build_section(LcRisConfig, config.get("ris"), "ris")
    concentrator = _build_section(ConcentratorConfig, config.get("concentrator"),
                                  "concentrator")
    receiver_data = config.get("receiver")
    if receiver_data is not None and not isinstance(receiver_data, dict):
        raise ConfigError(f"receiver: expected an object, got {receiver_data!r}")
    receiver = _build_receiver(dict(receiver_data or {}), "receiver")
    photometry = _build_section(Photometry, config.get("photometry"), "photometry")
    zones = _build_section(ZoneSpec, config.get("zones"), "zones")
    adt_cfg = _build_section(Adt, config.get("adt"), "adt")

    names = config.get("schemes", list(_SCHEME_NAMES))
    if (not isinstance(names, list) or not names
            or not all(isinstance(n, str) for n in names)):
        raise ConfigError("schemes: expected a non-empty list of scheme names")
    bad = sorted(set(names) - set(_SCHEME_NAMES))
    if bad:
        raise ConfigError(
            f"schemes: unknown scheme(s) {', '.join(bad)}; "
            f"valid names are {', '.join(_SCHEME_NAMES)}"
        )
    schemes = tuple(_make_scheme(n, adt_cfg.tau_deg, ris) for n in names)

    baseline = config.get("baseline", "centralized")
    if not isinstance(baseline, str):
        raise ConfigError(f"baseline: expected a string, got {baseline!r}")

    power = config.get("total_power_w", 1.0)
    semi = config.get("semi_angle_deg", 47.75)
    for key, value in (("total_power_w", power), ("semi_angle_deg", semi)):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{key}: expected a number, got {value!r}")

    try:
        if grid.plane_height_m >= room.height_m:
            raise ConfigError(
                f"grid.plane_height_m: {grid.plane_height_m} must be below "
                f"room.height_m {room.height_m}"
            )
        return Scenario(room=room, grid=grid, schemes=schemes,
                        total_power_w=float(power), semi_angle_deg=float(semi),
                        ris=ris, concentrator=concentrator, receiver=receiver,
                        photometry=photometry, zones=zones, baseline=baseline)
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _make_scheme(name: str, tau_deg: float, ris: LcRisConfig):
    if name == "centralized":
        return Centralized()
    if name == "distributed":
        return Distributed()
    if name == "adt":
        return Adt(tau_deg=tau_deg)
    return RisCentralized(ris=ris)


def parse_config(path: str | Path) -> Scenario:
    """Load and validate a scenario config file."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        config = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    return build_scenario(config)


def scenario_to_config(s: Scenario) -> dict:
    """Config dict that parses back to an identical Scenario."""
    adt_tau = next((sc.tau_deg for sc in s.schemes if isinstance(sc, Adt)), 45.0)
    receiver = dataclasses.asdict(s.receiver)
    return {
        "room": dataclasses.asdict(s.room),
        "grid": dataclasses.asdict(s.grid),
        "schemes": [sc.name for sc in s.schemes],
        "baseline": s.baseline,
        "total_power_w": s.total_power_w,
        "semi_angle_deg": s.semi_angle_deg,
        "adt": {"tau_deg": adt_tau},
        "ris": dataclasses.asdict(s.ris),
        "concentrator": dataclasses.asdict(s.concentrator),
        "receiver": receiver,
        "photometry": dataclasses.asdict(s.photometry),
        "zones": dataclasses.asdict(s.zones),
    }


def default_scenario() -> Scenario:
    return build_scenario({})


# ---------------------------------------------------------------------------
# outputs

def write_field_csv(fmap: FieldMap, path: str | Path) -> None:
    """Row-major CSV with 9-significant-digit values and LF line endings."""
    if not str(path):
        raise ValueError("output path must not be empty")
    with open(path, "w", newline="\n") as f:
        f.write("x_m,y_m,value,unit\n")
        for j, y in enumerate(fmap.ys):
            base = j * fmap.nx
            for i, x in enumerate(fmap.xs):
                value = float(fmap.values[base + i])
                f.write(f"{x!r},{y!r},{value:#.9g},{fmap.units}\n")


_RAMP_ANCHORS = (  # dark-to-bright perceptual ramp
    (68, 1, 84), (59, 82, 139), (33, 145, 140), (94, 201, 98), (253, 231, 37),
)


def _color_lut() -> bytes:
    lut = bytearray()
    segments = len(_RAMP_ANCHORS) - 1
    for idx in range(256):
        pos = idx / 255.0 * segments
        seg = min(int(pos), segments - 1)
        frac = pos - seg
        lo, hi = _RAMP_ANCHORS[seg], _RAMP_ANCHORS[seg + 1]
        lut.extend(int(round(l + (h - l) * frac)) for l, h in zip(lo, hi))
    return bytes(lut)


_LUT = _color_lut()


def render_heatmap(fmap: FieldMap, path: str | Path) -> None:
    """Binary PPM (P6) heatmap normalized to the field's [min, max]."""
    if not str(path):
        raise ValueError("output path must not be empty")
    values = fmap.values
    vmin = float(values.min())
    span = float(values.max()) - vmin
    body = bytearray()
    for v in values:
        t = 0.0 if span == 0.0 else (float(v) - vmin) / span
        idx = int(round(t * 255.0))
        body.extend(_LUT[3 * idx:3 * idx + 3])
    with open(path, "wb") as f:
        f.write(f"P6\n{fmap.nx} {fmap.ny}\n255\n".encode("ascii"))
        f.write(bytes(body))


def _uniformity_dict(report) -> dict:
    return {"min": report.min, "max": report.max, "avg": report.avg,
            "uniformity": report.uniformity}


def _compliance_dict(report) -> dict:
    out = {}
    for name, verdict in report.zones.items():
        out[name] = {"min_lux": verdict.min_lux,
                     "required_lux": verdict.required_lux,
                     "passed": verdict.passed}
    out["area_fraction_at_or_above_400_lux"] = report.area_fraction_at_or_above_400_lux
    return out


def report_to_dict(report: ComparisonReport | SweepReport) -> dict:
    if isinstance(report, SweepReport):
        return {
            "kind": "sweep",
            "parameter": report.parameter,
            "rows": [
                {"power_w": row.power_w, "min_rate": row.min_rate,
                 "min_illuminance": row.min_illuminance}
                for row in report.rows
            ],
            "min_rate_crossovers": [list(c) for c in report.min_rate_crossovers],
        }
    schemes = []
    for r in report.results:
        entry = {
            "name": r.name,
            "illuminance": _uniformity_dict(r.illuminance_uniformity),
            "rate": _uniformity_dict(r.rate_uniformity),
            "compliance": _compliance_dict(r.compliance),
        }
        if r.name in report.gains:
            entry["gains_vs_baseline"] = report.gains[r.name]
        schemes.append(entry)
    return {"kind": "comparison", "baseline": report.baseline, "schemes": schemes}


def write_report(report: ComparisonReport | SweepReport, path: str | Path) -> None:
    """Machine-readable report document (JSON)."""
    if not str(path):
        raise ValueError("output path must not be empty")
    with open(path, "w", newline="\n") as f:
        json.dump(report_to_dict(report), f, indent=2)
        f.write("\n")


# ---------------------------------------------------------------------------
# commands

def _write_comparison(report: ComparisonReport, out_dir: Path,
                      quantities: tuple[Quantity, ...]) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in report.results:
        for quantity in quantities:
            fmap = r.illuminance if quantity is Quantity.ILLUMINANCE else r.rate
            stem = f"{r.name}_{quantity.value}"
            write_field_csv(fmap, out_dir / f"{stem}.csv")
            render_heatmap(fmap, out_dir / f"{stem}.ppm")
    write_report(report, out_dir / "report.json")


def _print_summary(report: ComparisonReport) -> None:
    for r in report.results:
        iu, ru = r.illuminance_uniformity, r.rate_uniformity
        print(f"{r.name:12s} illuminance {iu.min:10.3f}..{iu.max:10.3f} lux "
              f"(uniformity {iu.uniformity:.4f})  rate "
              f"{ru.min / 1e6:9.2f}..{ru.max / 1e6:9.2f} Mbit/s "
              f"(uniformity {ru.uniformity:.4f})")


def _cmd_simulate(args) -> int:
    scenario = parse_config(args.config)
    quantities = ((Quantity(args.quantity),) if args.quantity
                  else (Quantity.ILLUMINANCE, Quantity.RATE))
    report = run_scenario(scenario)
    _write_comparison(report, Path(args.out), quantities)
    _print_summary(report)
    return 0


def _cmd_compare(args) -> int:
    config = _load_config_dict(args.config)
    if args.schemes:
        config["schemes"] = [s.strip() for s in args.schemes.split(",") if s.strip()]
    if args.baseline:
        config["baseline"] = args.baseline
    scenario = build_scenario(config)
    report = run_scenario(scenario)
    _write_comparison(report, Path(args.out),
                      (Quantity.ILLUMINANCE, Quantity.RATE))
    _print_summary(report)
    return 0


def _cmd_sweep(args) -> int:
    scenario = parse_config(args.config)
    try:
        spec = SweepSpec(parameter=args.param, start=args.start, stop=args.stop,
                         step=args.step)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    report = power_sweep(scenario, spec)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report(report, out_dir / "report.json")
    for row in report.rows:
        mins = " ".join(f"{k}={v / 1e6:9.2f}M" for k, v in row.min_rate.items())
        print(f"P={row.power_w:5.2f} W  min rate: {mins}")
    if report.min_rate_crossovers:
        print(f"adt/ris min-rate crossover within: {report.min_rate_crossovers}")
    return 0


def _cmd_validate(args) -> int:
    scenario = parse_config(args.config)
    names = ", ".join(s.name for s in scenario.schemes)
    print(f"ok: {scenario.grid.nx}x{scenario.grid.ny} grid, "
          f"P={scenario.total_power_w} W, schemes: {names}")
    return 0


def _load_config_dict(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config file not found: {p}")
    try:
        config = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{p}: invalid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise ConfigError(f"top-level config must be an object, got {config!r}")
    return config


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ris-vlc",
        description="Indoor VLC coverage simulator: illuminance and "
                    "achievable-rate maps for LED array layouts with an "
                    "optional liquid-crystal front end.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the configured scenario")
    sim.add_argument("--config", required=True)
    sim.add_argument("--out", required=True)
    sim.add_argument("--quantity", choices=[q.value for q in Quantity])
    sim.set_defaults(func=_cmd_simulate)

    cmp_ = sub.add_parser("compare", help="compare selected schemes")
    cmp_.add_argument("--config", required=True)
    cmp_.add_argument("--schemes", help="comma-separated scheme names")
    cmp_.add_argument("--baseline")
    cmp_.add_argument("--out", required=True)
    cmp_.set_defaults(func=_cmd_compare)

    swp = sub.add_parser("sweep", help="sweep the transmit power")
    swp.add_argument("--config", required=True)
    swp.add_argument("--param", default="power_w", choices=["power_w"])
    swp.add_argument("--from", dest="start", type=float, required=True)
    swp.add_argument("--to", dest="stop", type=float, required=True)
    swp.add_argument("--step", type=float, required=True)
    swp.add_argument("--out", required=True)
    swp.set_defaults(func=_cmd_sweep)

    val = sub.add_parser("validate", help="check a config file")
    val.add_argument("--config", required=True)
    val.set_defaults(func=_cmd_validate)
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
