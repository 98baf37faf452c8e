"""Secret-key-rate bounds for free-space optical wiretap channels.

A diffracting Gaussian beam is intercepted by an eavesdropper whose
circular aperture sits in Bob's receiver plane, tangent to Bob's own
aperture.  The package maps that geometry to a pair of transmissivities,
builds the Gaussian wiretap model on top of them, and evaluates lower
and upper bounds on the distillable secret-key rate, per mode, for
direct and reverse reconciliation.

Typical use::

    import beamtap

    geom = beamtap.BeamGeometry(waist_radius=0.05, wavelength=1.55e-6)
    layout = beamtap.ApertureLayout(r_alice=0.05, r_bob=0.05, r_eve=0.05)
    channel = beamtap.channel_point(
        geom, layout, 1e4, beamtap.LIGHT_SPEED / 1.55e-6
    )
    bounds = beamtap.rate_bound(channel, beta=1.0, mu=None)

The ``beamtap`` console script exposes the same computations as CSV or
JSON tables.
"""

from beamtap.bounds import (
    RateBound,
    WiretapModel,
    WiretapScenario,
    aperture_ratio,
    asymptote_best,
    asymptote_direct,
    asymptote_reverse,
    build_wiretap_model,
    limit_direct,
    limit_reverse,
    lower_bound_direct,
    lower_bound_reverse,
    m_threshold,
    pure_loss_direct,
    pure_loss_reverse,
    rate_bound,
    upper_bound,
)
from beamtap.channel import (
    BOLTZMANN,
    LIGHT_SPEED,
    PLANCK,
    ApertureLayout,
    BeamGeometry,
    ChannelPoint,
    PhysicalConstants,
    beam_width,
    channel_point,
    power_fraction_bob,
    power_fraction_eve,
    rayleigh_length,
    thermal_occupancy,
)
from beamtap.sweep import (
    OptimumReport,
    Reconciliation,
    ScenarioDefaults,
    SpecialPower,
    SweepRow,
    SweepSeries,
    SweepSpec,
    SweepVariable,
    evaluate_scenario,
    figure_preset,
    optimal_input_power,
    run_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BOLTZMANN",
    "LIGHT_SPEED",
    "PLANCK",
    "ApertureLayout",
    "BeamGeometry",
    "ChannelPoint",
    "OptimumReport",
    "PhysicalConstants",
    "RateBound",
    "Reconciliation",
    "ScenarioDefaults",
    "SpecialPower",
    "SweepRow",
    "SweepSeries",
    "SweepSpec",
    "SweepVariable",
    "WiretapModel",
    "WiretapScenario",
    "aperture_ratio",
    "asymptote_best",
    "asymptote_direct",
    "asymptote_reverse",
    "beam_width",
    "build_wiretap_model",
    "channel_point",
    "evaluate_scenario",
    "figure_preset",
    "limit_direct",
    "limit_reverse",
    "lower_bound_direct",
    "lower_bound_reverse",
    "m_threshold",
    "optimal_input_power",
    "power_fraction_bob",
    "power_fraction_eve",
    "pure_loss_direct",
    "pure_loss_reverse",
    "rate_bound",
    "rayleigh_length",
    "run_sweep",
    "thermal_occupancy",
    "upper_bound",
]
