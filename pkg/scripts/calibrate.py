#!/usr/bin/env python3
"""Calibration sweep behind the shipped defaults.

The room, grid, transmit power, bandwidth, LC voltages/thickness/index, and
tilt angle are fixed inputs.  The remaining free parameters (LED semi-angle,
receiver noise density, stimulated-emission gain, field of view, concentrator)
are swept here against the selection constraints:

  * illumination uniformity: centralized below distributed and adt, < 0.40
  * rate uniformity: all plain schemes < 0.5, amplified scheme >= 0.7
  * min-illuminance gain centralized -> amplified within [1000%, 3000%]
  * centralized has the lowest min rate, the amplified scheme the highest

The winner (maximum worst-case margin) is what ships as the package default:
semi-angle 47.75 deg, gamma 4694 /m (exp(gamma*d) ~ 33.8), N0 5.5e-23 A^2/Hz,
FOV 60 deg, neutral concentrator (f=1, 90 deg acceptance).

The second part of the report quantifies why the eight reference uniformity
targets cannot all be matched within +/-0.15 by any configuration: the
amplified field is an exact scalar multiple of the centralized field, so
their illumination uniformities are identical, and the centralized ratio
never exceeds ~0.30 on this grid for any beam width.

Usage: python scripts/calibrate.py [--fast]
"""

import argparse
import math
import sys

from ris_vlc import build_scenario, run_scenario
from ris_vlc.metrics import gain_percent

TARGETS = {
    "centralized": (0.2371, 0.3535),
    "distributed": (0.4378, 0.3937),
    "adt": (0.4755, 0.4379),
    "ris": (0.4628, 0.8168),
}

LC_THICKNESS_M = 7.5e-4


def evaluate(semi, gamma, n0, fov, nx):
    config = {
        "grid": {"nx": nx, "ny": nx},
        "semi_angle_deg": semi,
        "ris": {"gamma_per_m": gamma},
        "receiver": {"noise_psd_a2_per_hz": n0, "fov_semi_angle_deg": fov},
    }
    report = run_scenario(build_scenario(config), threads=0)
    u_il = {r.name: r.illuminance_uniformity.uniformity for r in report.results}
    u_r = {r.name: r.rate_uniformity.uniformity for r in report.results}
    min_il = {r.name: r.illuminance_uniformity.min for r in report.results}
    min_r = {r.name: r.rate_uniformity.min for r in report.results}
    gain = gain_percent(min_il["ris"], min_il["centralized"])
    margins = [
        u_il["distributed"] - u_il["centralized"],
        u_il["adt"] - u_il["centralized"],
        0.40 - u_il["centralized"],
        0.5 - u_r["centralized"],
        0.5 - u_r["distributed"],
        0.5 - u_r["adt"],
        u_r["ris"] - 0.7,
        (gain - 1000.0) / 2000.0,
        (3000.0 - gain) / 2000.0,
        min(min_r[n] / min_r["centralized"] - 1.0
            for n in ("distributed", "adt", "ris")),
        min_r["ris"] / max(min_r[n] for n in ("centralized", "distributed", "adt"))
        - 1.0,
    ]
    return {"u_il": u_il, "u_r": u_r, "gain": gain, "margin": min(margins)}


def selection_sweep(nx, fast):
    # margins are grid-dependent (coarser grids sample further from the true
    # corners), so the sweep always runs on the production grid and --fast
    # only trims the scan extent
    if fast:
        semis = (45.0, 47.75, 48.0)
        exp_targets = (10.0, 28.0, 33.8)
        noise = (5.5e-24, 5.5e-23, 5.5e-22)
    else:
        semis = (44.0, 45.0, 46.0, 47.0, 47.5, 47.75, 48.0)
        exp_targets = (10.0, 20.0, 28.0, 32.0, 33.8, 34.0)
        noise = (5.5e-24, 1.75e-23, 5.5e-23, 1.75e-22, 5.5e-22)
    rows = []
    for semi in semis:
        for target in exp_targets:
            gamma = math.log(target) / LC_THICKNESS_M
            for n0 in noise:
                res = evaluate(semi, gamma, n0, 60.0, nx)
                rows.append((res["margin"], semi, target, n0, res))
    rows.sort(key=lambda r: r[0], reverse=True)
    print(f"selection sweep over {len(rows)} configurations "
          f"({nx}x{nx} grid); top candidates by worst-case margin:")
    for margin, semi, target, n0, res in rows[:8]:
        u_r = res["u_r"]
        print(f"  margin={margin:+.4f} semi={semi:5.2f} exp(gd)={target:5.1f} "
              f"N0={n0:.2e}  rate-unif c/d/a/r = "
              f"{u_r['centralized']:.3f}/{u_r['distributed']:.3f}/"
              f"{u_r['adt']:.3f}/{u_r['ris']:.3f}  gain={res['gain']:7.1f}%")
    return rows[0]


def band_analysis(nx):
    print("\nwhy the eight uniformity targets cannot be matched jointly:")
    print("  amplified map = constant x centralized map, so matching both")
    print("  0.2371 and 0.4628 within 0.15 needs a shared ratio >= 0.3128;")
    print("  the centralized illumination ratio across beam widths:")
    best = 0.0
    for semi in (30.0, 45.0, 60.0, 75.0, 85.0, 89.0, 89.9):
        config = {"grid": {"nx": nx, "ny": nx}, "semi_angle_deg": semi}
        report = run_scenario(build_scenario(config), threads=0)
        u = report.result("centralized").illuminance_uniformity.uniformity
        ua = report.result("adt").illuminance_uniformity.uniformity
        best = max(best, u)
        print(f"    semi={semi:5.1f} deg: centralized {u:.4f}  adt {ua:.4f}")
    print(f"  maximum reached: {best:.4f} < 0.3128 -> no joint match exists")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--fast", action="store_true",
                        help="scan fewer configurations (same grid)")
    args = parser.parse_args(argv)
    nx = 100

    margin, semi, target, n0, res = selection_sweep(nx, args.fast)
    gamma = math.log(target) / LC_THICKNESS_M
    print(f"\nbest margin: semi-angle {semi} deg, "
          f"gamma {gamma:.1f} /m (exp(gamma*d) = {target}), N0 {n0:.2e}, "
          f"worst-case margin {margin:+.4f}")
    print("shipped defaults: the sweep winner with gamma rounded to "
          "4694.0 /m; the default scenario then gives:")
    default = run_scenario(build_scenario({}), threads=0)
    for r in default.results:
        print(f"  {r.name:12s} illum-unif {r.illuminance_uniformity.uniformity:.4f}"
              f"  rate-unif {r.rate_uniformity.uniformity:.4f}"
              f"  min rate {r.rate_uniformity.min / 1e6:8.1f} Mbit/s")

    band_analysis(nx)
    return 0


if __name__ == "__main__":
    sys.exit(main())
