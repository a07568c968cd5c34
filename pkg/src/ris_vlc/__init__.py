"""Indoor visible-light-communication coverage simulator.

Compares centralized, distributed, and angle-diversity LED array layouts
against a centralized array fronted by a liquid-crystal cell, over a
receiver-plane sensing grid: illuminance and achievable-rate field maps,
uniformity statistics, lighting compliance, and transmit-power sweeps.
"""

from .experiment import (
    ComparisonReport,
    Scenario,
    SchemeResult,
    SweepReport,
    SweepSpec,
    default_schemes,
    power_sweep,
    run_scenario,
)
from .metrics import (
    ComplianceReport,
    FieldMap,
    Quantity,
    UniformityReport,
    ZoneSpec,
    classify_compliance,
    compute_field,
    gain_percent,
    illuminance_at,
    rate_at,
    uniformity,
)
from .optics import (
    ConcentratorConfig,
    LcRisConfig,
    Photometry,
    ReceiverModel,
    TotalInternalReflection,
    amplification_factor,
    concentrator_gain,
    effective_emitted_power,
    fresnel_transmittance,
    lambertian_order,
    lc_transmission,
    los_gain,
    rate_from_received_power,
    ris_active,
    snell_angle,
    steering_deviation,
)
from .scene import (
    Adt,
    Centralized,
    Distributed,
    Emitter,
    GridSpec,
    LayoutScheme,
    LinkGeometry,
    RisCentralized,
    Room,
    Vec3,
    adt_normals,
    build_layout,
    grid_points,
    link_geometry,
)
from .cli import (
    ConfigError,
    build_scenario,
    default_scenario,
    parse_config,
    render_heatmap,
    scenario_to_config,
    write_field_csv,
    write_report,
)

__version__ = "0.1.0"
