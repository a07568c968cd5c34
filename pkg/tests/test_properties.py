"""Property-based checks of the model invariants."""

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ris_vlc.metrics import FieldMap, Quantity, uniformity
from ris_vlc.optics import (
    ConcentratorConfig,
    LcRisConfig,
    ReceiverModel,
    TotalInternalReflection,
    amplification_factor,
    fresnel_transmittance,
    lambertian_order,
    lc_transmission,
    los_gain,
    ris_active,
    snell_angle,
)
from ris_vlc.scene import (
    Adt,
    Centralized,
    Distributed,
    GridSpec,
    RisCentralized,
    Room,
    build_layout,
    grid_points,
    link_geometry,
)

angles = st.floats(min_value=1.0, max_value=89.0)
indices = st.floats(min_value=1.0, max_value=3.0)


@given(a=angles, b=angles)
def test_lambertian_order_strictly_decreasing_in_semi_angle(a, b):
    assume(abs(a - b) > 1e-3)
    narrow, wide = min(a, b), max(a, b)
    assert lambertian_order(narrow) > lambertian_order(wide)


@given(theta=st.floats(min_value=0.0, max_value=math.pi / 2 - 0.01),
       n_from=indices, n_to=indices)
def test_snell_round_trip_restores_entry_angle(theta, n_from, n_to):
    try:
        out = snell_angle(theta, n_from, n_to)
    except TotalInternalReflection:
        assume(False)
    back = snell_angle(out, n_to, n_from)
    assert abs(back - theta) <= 1e-12


@given(n1=indices, n2=indices)
def test_fresnel_transmittance_symmetric_and_bounded(n1, n2):
    t12 = fresnel_transmittance(n1, n2)
    assert t12 == fresnel_transmittance(n2, n1)
    assert 0.0 < t12 <= 1.0
    if abs(n1 - n2) > 1e-9:
        assert t12 < 1.0


@given(n_air=st.floats(min_value=1.0, max_value=2.0),
       delta=st.one_of(st.just(0.0), st.floats(1e-6, 1.5)))
def test_lc_transmission_unity_only_when_matched(n_air, delta):
    # the gap is kept representable so the strict inequality survives rounding
    cfg = LcRisConfig(n_air=n_air, n_lc=n_air + delta)
    alpha = lc_transmission(cfg)
    assert 0.0 < alpha <= 1.0
    assert (alpha == 1.0) == (delta == 0.0)


@given(g1=st.floats(0.0, 5000.0), g2=st.floats(0.0, 5000.0),
       d1=st.floats(1e-5, 5e-3), d2=st.floats(1e-5, 5e-3))
def test_amplification_monotone_in_gain_and_thickness(g1, g2, d1, d2):
    lo_g, hi_g = sorted((g1, g2))
    lo_d, hi_d = sorted((d1, d2))
    assert (amplification_factor(LcRisConfig(gamma_per_m=hi_g, thickness_m=hi_d))
            >= amplification_factor(LcRisConfig(gamma_per_m=lo_g, thickness_m=lo_d)))


@given(gamma=st.one_of(st.just(0.0), st.floats(1e-3, 5000.0)),
       drive=st.floats(0.0, 5.0))
def test_amplification_unity_iff_passive(gamma, drive):
    cfg = LcRisConfig(gamma_per_m=gamma, drive_voltage_v=drive)
    factor = amplification_factor(cfg)
    assert factor >= 1.0
    assert (factor == 1.0) == (gamma == 0.0 or not ris_active(cfg))


@given(dist=st.floats(0.1, 10.0), irr=st.floats(0.0, math.pi),
       inc=st.floats(0.0, math.pi), m=st.floats(0.1, 10.0))
def test_los_gain_nonnegative_and_cone_limited(dist, irr, inc, m):
    from ris_vlc.scene import LinkGeometry
    rx = ReceiverModel(fov_semi_angle_deg=60.0)
    gain = los_gain(LinkGeometry(dist, irr, inc), m, rx)
    assert gain >= 0.0
    if inc > math.radians(60.0) or irr > math.pi / 2:
        assert gain == 0.0


@given(values=st.lists(st.floats(min_value=0.0, max_value=1e6), min_size=1,
                       max_size=40))
def test_uniformity_bounds(values):
    nx = len(values)
    fmap = FieldMap(nx=nx, ny=1, xs=tuple(float(i) for i in range(nx)), ys=(0.0,),
                    values=np.array(values), quantity=Quantity.ILLUMINANCE,
                    scheme="p", units="lux")
    report = uniformity(fmap)
    assert 0.0 <= report.uniformity <= 1.0
    assert report.min <= report.avg <= report.max


_rooms = st.builds(
    Room,
    length_m=st.floats(2.0, 12.0),
    width_m=st.floats(2.0, 12.0),
    height_m=st.floats(2.0, 5.0),
)
_schemes = st.sampled_from([
    Centralized(), Distributed(), Adt(tau_deg=30.0), Adt(tau_deg=60.0),
    RisCentralized(ris=LcRisConfig()),
])


@settings(max_examples=40)
@given(room=_rooms, scheme=_schemes, power=st.floats(0.0, 20.0))
def test_layout_power_conservation(room, scheme, power):
    emitters = build_layout(scheme, room, power, 60.0)
    assert math.fsum(e.power_w for e in emitters) == power
    for e in emitters:
        assert e.position.z == room.height_m
        assert abs(e.normal.norm() - 1.0) <= 1e-12


@settings(max_examples=40)
@given(room=_rooms, scheme=_schemes)
def test_layout_mirror_symmetry(room, scheme):
    emitters = build_layout(scheme, room, 1.0, 60.0)

    def canon(flip_x, flip_y):
        out = []
        for e in emitters:
            x = room.length_m - e.position.x if flip_x else e.position.x
            y = room.width_m - e.position.y if flip_y else e.position.y
            nx = -e.normal.x if flip_x else e.normal.x
            ny = -e.normal.y if flip_y else e.normal.y
            out.append((round(x, 9), round(y, 9), round(nx, 9), round(ny, 9)))
        return sorted(out)

    base = canon(False, False)
    assert canon(True, False) == base
    assert canon(False, True) == base
    assert canon(True, True) == base


@settings(max_examples=40)
@given(room=_rooms, nx=st.integers(1, 15), ny=st.integers(1, 15))
def test_grid_count_and_footprint(room, nx, ny):
    spec = GridSpec(nx=nx, ny=ny, plane_height_m=room.height_m / 3.0)
    pts = grid_points(room, spec)
    assert len(pts) == nx * ny
    for p in pts:
        assert 0.0 < p.x < room.length_m
        assert 0.0 < p.y < room.width_m


@settings(max_examples=40)
@given(room=_rooms,
       px=st.floats(0.1, 0.9), py=st.floats(0.1, 0.9), pz=st.floats(0.1, 0.8))
def test_link_distance_is_euclidean_and_angles_match_for_nadir_pair(room, px, py, pz):
    from ris_vlc.scene import Vec3
    emitters = build_layout(Centralized(), room, 1.0, 60.0)
    e = emitters[0]
    p = Vec3(px * room.length_m, py * room.width_m, pz * room.height_m)
    geom = link_geometry(e, p, Vec3(0.0, 0.0, 1.0))
    expected = math.dist(p.as_tuple(), e.position.as_tuple())
    assert abs(geom.distance_m - expected) <= 1e-12
    # straight-down emitter, straight-up receiver: the two angles coincide
    assert abs(geom.irradiance_angle_rad - geom.incidence_angle_rad) <= 1e-9


@given(phi=st.floats(0.0, math.pi / 2))
def test_concentrator_gain_nonnegative(phi):
    from ris_vlc.optics import concentrator_gain
    c = ConcentratorConfig(refr_index_f=1.5, accept_semi_angle_deg=60.0)
    g = concentrator_gain(phi, c)
    assert g >= 0.0
    if phi > math.radians(60.0):
        assert g == 0.0
