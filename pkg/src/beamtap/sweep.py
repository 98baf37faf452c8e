"""Parameter sweeps and one-dimensional input-power optimization.

Produces in-memory row tables; serialization lives in the command-line
front end.  Each grid point is evaluated independently, so rows can be
computed in any order and reassembled by index.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .bounds import (
    RateBound,
    WiretapScenario,
    limit_direct,
    limit_reverse,
    lower_bound_direct,
    lower_bound_reverse,
    rate_bound,
    upper_bound,
)
from .channel import (
    LIGHT_SPEED,
    ApertureLayout,
    BeamGeometry,
    ChannelPoint,
    PhysicalConstants,
    QuadratureError,
    channel_point,
)
from .gaussian import UnphysicalStateError

LOG_MU_MIN = -4.0
LOG_MU_MAX = 8.0
_COARSE_POINTS = 50
_GOLDEN_TOL = 1e-6


class SweepVariable(enum.Enum):
    """Quantity stepped along the sweep axis; values are CSV-facing names."""

    DISTANCE = "distance"
    FREQUENCY = "frequency"
    EVE_RADIUS = "eve_radius"
    WAIST_RADIUS = "waist_radius"
    BOB_RADIUS = "bob_radius"
    INPUT_POWER = "input_power"


class SpecialPower(enum.Enum):
    """Distinguished stand-ins for a numeric optimal input power."""

    UNBOUNDED = "unbounded"
    NONE = "none"


class Reconciliation(enum.Enum):
    DIRECT = "dr"
    REVERSE = "rr"


@dataclass(frozen=True)
class ScenarioDefaults:
    """Fixed scenario parameters shared by every point of a sweep.

    All lengths in meters, temperature in kelvin.  ``mu`` is the mean
    photon number per mode; None means the sweep reports rates at the
    optimal input power instead of a fixed one.  Alice's aperture is
    kept equal to the beam waist by convention, so overrides that move
    ``waist_radius`` should move ``r_alice`` with it.
    """

    wavelength: float = 1.55e-6
    temperature: float = 3.0
    waist_radius: float = 0.05
    r_alice: float = 0.05
    r_bob: float = 0.05
    r_eve: float = 0.05
    distance: float = 1e4
    beta: float = 1.0
    mu: float | None = None

    def replace(self, **overrides: float | None) -> "ScenarioDefaults":
        return dataclasses.replace(self, **overrides)


def _validate_fixed(fixed: ScenarioDefaults) -> None:
    """Construct the component types so their invariants run."""

    BeamGeometry(waist_radius=fixed.waist_radius, wavelength=fixed.wavelength)
    ApertureLayout(r_alice=fixed.r_alice, r_bob=fixed.r_bob, r_eve=fixed.r_eve)
    PhysicalConstants(temperature=fixed.temperature)
    if fixed.distance < 0.0:
        raise ValueError(f"distance must be nonnegative, got {fixed.distance}")
    if not 0.0 < fixed.beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {fixed.beta}")
    if fixed.mu is not None and fixed.mu < 0.0:
        raise ValueError(f"mu must be nonnegative, got {fixed.mu}")


@dataclass(frozen=True)
class SweepSeries:
    """One labelled curve: the fixed parameters it overrides."""

    label: str
    overrides: Mapping[str, float]


@dataclass(frozen=True)
class SweepSpec:
    """Declarative description of a one-variable sweep."""

    variable: SweepVariable
    minimum: float
    maximum: float
    count: int = 200
    log_spaced: bool = True
    fixed: ScenarioDefaults = ScenarioDefaults()
    series: tuple[SweepSeries, ...] = ()

    def __post_init__(self) -> None:
        if not (math.isfinite(self.minimum) and math.isfinite(self.maximum)):
            raise ValueError("sweep range must be finite")
        if not self.minimum < self.maximum:
            raise ValueError(
                f"sweep range must satisfy min < max, got [{self.minimum}, {self.maximum}]"
            )
        if self.count < 2:
            raise ValueError(f"sweep needs at least 2 points, got {self.count}")
        if self.log_spaced and self.minimum <= 0.0:
            raise ValueError("log spacing requires a positive lower bound")
        for fixed in (self.fixed,) + tuple(
            self.fixed.replace(**s.overrides) for s in self.series
        ):
            _validate_fixed(fixed)

    def grid(self) -> np.ndarray:
        if self.log_spaced:
            return np.logspace(
                math.log10(self.minimum), math.log10(self.maximum), self.count
            )
        return np.linspace(self.minimum, self.maximum, self.count)


@dataclass(frozen=True)
class OptimumReport:
    """Outcome of the input-power optimization for one reconciliation."""

    mu_star: float | SpecialPower
    k_at_star: float
    reconciliation: Reconciliation


@dataclass(frozen=True)
class SweepRow:
    x: float
    eta: float
    kappa: float
    n_e: float
    k_dr: float
    k_rr: float
    k_best: float
    k_upper: float
    mu_star_dr: float | SpecialPower
    mu_star_rr: float | SpecialPower
    flags: tuple[str, ...]


def _rate_at(channel: ChannelPoint, beta: float, reconciliation: Reconciliation, mu: float) -> float:
    scenario = WiretapScenario(channel, mu, beta)
    if reconciliation is Reconciliation.DIRECT:
        return lower_bound_direct(scenario)
    return lower_bound_reverse(scenario)


def _golden_section_max(
    objective, lo: float, hi: float, tol: float
) -> tuple[float, float]:
    """Maximize a unimodal objective on [lo, hi] by golden-section search."""

    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    fc, fd = objective(c), objective(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - inv_phi * (b - a)
            fc = objective(c)
        else:
            a, c, fc = c, d, fd
            d = a + inv_phi * (b - a)
            fd = objective(d)
    best = c if fc >= fd else d
    return best, max(fc, fd)


def optimal_input_power(
    channel: ChannelPoint, beta: float, reconciliation: Reconciliation
) -> OptimumReport:
    """Find the input power maximizing one lower bound.

    With perfect reconciliation the rate is nondecreasing in the input
    power, so the optimum is unbounded and the plateau rate is reported.
    Otherwise a 50-point coarse grid over log10(mu) in [-4, 8] brackets
    the maximum and golden-section search refines it; the plain loop is
    used instead of a library minimizer because clamped-to-zero plateaus
    at the bracket edges violate the strict-bracket protocol those
    routines require.
    """

    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0, 1], got {beta}")
    if beta == 1.0:
        if reconciliation is Reconciliation.DIRECT:
            plateau = limit_direct(channel)
        else:
            plateau = limit_reverse(channel)
        return OptimumReport(SpecialPower.UNBOUNDED, plateau, reconciliation)

    grid_t = np.linspace(LOG_MU_MIN, LOG_MU_MAX, _COARSE_POINTS)
    rates = [_rate_at(channel, beta, reconciliation, 10.0**t) for t in grid_t]
    peak = int(np.argmax(rates))
    if rates[peak] == 0.0:
        return OptimumReport(SpecialPower.NONE, 0.0, reconciliation)
    if peak == _COARSE_POINTS - 1 and rates[peak] > rates[peak - 1]:
        # still climbing at the top of the search interval
        return OptimumReport(SpecialPower.UNBOUNDED, rates[peak], reconciliation)

    lo = grid_t[max(peak - 1, 0)]
    hi = grid_t[min(peak + 1, _COARSE_POINTS - 1)]
    t_star, k_star = _golden_section_max(
        lambda t: _rate_at(channel, beta, reconciliation, 10.0**t), lo, hi, _GOLDEN_TOL
    )
    if rates[peak] > k_star:
        t_star, k_star = grid_t[peak], rates[peak]
    mu_star = 10.0**t_star
    for neighbor in (mu_star / 10.0, mu_star * 10.0):
        if _rate_at(channel, beta, reconciliation, neighbor) > k_star:
            raise RuntimeError(
                "input-power profile is not unimodal around the reported optimum"
            )
    return OptimumReport(mu_star, k_star, reconciliation)


def _build_channel(defaults: ScenarioDefaults) -> ChannelPoint:
    geom = BeamGeometry(
        waist_radius=defaults.waist_radius, wavelength=defaults.wavelength
    )
    layout = ApertureLayout(
        r_alice=defaults.r_alice, r_bob=defaults.r_bob, r_eve=defaults.r_eve
    )
    consts = PhysicalConstants(temperature=defaults.temperature)
    frequency = consts.light_speed / defaults.wavelength
    return channel_point(geom, layout, defaults.distance, frequency, consts)


def _apply_variable(
    defaults: ScenarioDefaults, variable: SweepVariable, x: float
) -> ScenarioDefaults:
    if variable is SweepVariable.DISTANCE:
        return defaults.replace(distance=x)
    if variable is SweepVariable.FREQUENCY:
        return defaults.replace(wavelength=LIGHT_SPEED / x)
    if variable is SweepVariable.EVE_RADIUS:
        return defaults.replace(r_eve=x)
    if variable is SweepVariable.WAIST_RADIUS:
        return defaults.replace(waist_radius=x, r_alice=x)
    if variable is SweepVariable.BOB_RADIUS:
        return defaults.replace(r_bob=x)
    return defaults.replace(mu=x)


_ROW_ERRORS = (ValueError, ArithmeticError, QuadratureError, UnphysicalStateError)


def _error_row(x: float, flags: tuple[str, ...]) -> SweepRow:
    return SweepRow(
        x=x, eta=0.0, kappa=0.0, n_e=0.0,
        k_dr=0.0, k_rr=0.0, k_best=0.0, k_upper=0.0,
        mu_star_dr=SpecialPower.NONE, mu_star_rr=SpecialPower.NONE,
        flags=flags + ("ERR",),
    )


def _bound_row(
    x: float,
    channel: ChannelPoint,
    result: RateBound,
    mu_star_dr: float | SpecialPower,
    mu_star_rr: float | SpecialPower,
    base_flags: tuple[str, ...],
) -> SweepRow:
    flags = base_flags
    if result.dr_clamped:
        flags = flags + ("dr_clamped",)
    if result.rr_clamped:
        flags = flags + ("rr_clamped",)
    return SweepRow(
        x=x, eta=channel.eta, kappa=channel.kappa, n_e=channel.n_e,
        k_dr=result.k_dr, k_rr=result.k_rr, k_best=result.k_best,
        k_upper=result.k_upper,
        mu_star_dr=mu_star_dr, mu_star_rr=mu_star_rr, flags=flags,
    )


def _optimized_row(
    x: float, channel: ChannelPoint, beta: float, base_flags: tuple[str, ...]
) -> SweepRow:
    report_dr = optimal_input_power(channel, beta, Reconciliation.DIRECT)
    report_rr = optimal_input_power(channel, beta, Reconciliation.REVERSE)
    flags = base_flags
    if report_dr.k_at_star == 0.0:
        flags = flags + ("dr_clamped",)
    if report_rr.k_at_star == 0.0:
        flags = flags + ("rr_clamped",)
    return SweepRow(
        x=x, eta=channel.eta, kappa=channel.kappa, n_e=channel.n_e,
        k_dr=report_dr.k_at_star, k_rr=report_rr.k_at_star,
        k_best=max(report_dr.k_at_star, report_rr.k_at_star),
        k_upper=upper_bound(channel.eta, channel.kappa),
        mu_star_dr=report_dr.mu_star, mu_star_rr=report_rr.mu_star,
        flags=flags,
    )


def evaluate_scenario(fixed: ScenarioDefaults) -> SweepRow:
    """Rates for one fully specified scenario; the row's x is the
    distance.  A scenario without a fixed input power reports rates at
    the optimal power, which for perfect reconciliation is unbounded."""

    _validate_fixed(fixed)
    channel = _build_channel(fixed)
    if fixed.mu is not None:
        result = rate_bound(channel, fixed.beta, fixed.mu)
        return _bound_row(fixed.distance, channel, result, fixed.mu, fixed.mu, ())
    if fixed.beta == 1.0:
        result = rate_bound(channel, 1.0, None)
        return _bound_row(
            fixed.distance, channel, result,
            SpecialPower.UNBOUNDED, SpecialPower.UNBOUNDED, (),
        )
    return _optimized_row(fixed.distance, channel, fixed.beta, ())


def _sweep_series(
    spec: SweepSpec,
    fixed: ScenarioDefaults,
    base_flags: tuple[str, ...],
) -> list[SweepRow]:
    rows: list[SweepRow] = []
    power_sweep = spec.variable is SweepVariable.INPUT_POWER

    series_mu_dr: float | SpecialPower = SpecialPower.NONE
    series_mu_rr: float | SpecialPower = SpecialPower.NONE
    if power_sweep:
        # the channel is the same for every input power, so the optimal
        # power is a per-series quantity
        channel = _build_channel(fixed)
        series_mu_dr = optimal_input_power(
            channel, fixed.beta, Reconciliation.DIRECT
        ).mu_star
        series_mu_rr = optimal_input_power(
            channel, fixed.beta, Reconciliation.REVERSE
        ).mu_star

    for x in spec.grid():
        x = float(x)
        try:
            point = _apply_variable(fixed, spec.variable, x)
            if power_sweep:
                channel = _build_channel(point)
                result = rate_bound(channel, point.beta, point.mu)
                row = _bound_row(
                    x, channel, result, series_mu_dr, series_mu_rr, base_flags
                )
            else:
                row = evaluate_scenario(point)
                row = dataclasses.replace(row, x=x, flags=base_flags + row.flags)
            rows.append(row)
        except _ROW_ERRORS:
            rows.append(_error_row(x, base_flags))
    return rows


def run_sweep(spec: SweepSpec) -> tuple[SweepRow, ...]:
    """Evaluate a sweep, one row per grid point, ordered by x within
    each series.  Per-point failures are recorded with an ERR flag and
    zeroed rate columns rather than aborting the sweep."""

    if not spec.series:
        return tuple(_sweep_series(spec, spec.fixed, ()))
    rows: list[SweepRow] = []
    for series in spec.series:
        fixed = spec.fixed.replace(**series.overrides)
        rows.extend(_sweep_series(spec, fixed, (f"s:{series.label}",)))
    return tuple(rows)


def _radius_series(prefix: str, values_cm: tuple[float, ...], field: str) -> tuple[SweepSeries, ...]:
    return tuple(
        SweepSeries(label=f"{prefix}={v:g}cm", overrides={field: v / 100.0})
        for v in values_cm
    )


_DISTANCE_RANGE = (1e2, 1e7)
_POWER_RANGE = (1e-2, 1e4)


def figure_preset(fig_id: str) -> SweepSpec:
    """Preconfigured sweeps matching the published parameter sets."""

    if fig_id == "fig2":
        return SweepSpec(
            variable=SweepVariable.INPUT_POWER, minimum=_POWER_RANGE[0],
            maximum=_POWER_RANGE[1],
            series=_radius_series("re", (2.0, 12.0), "r_eve"),
        )
    if fig_id == "fig3":
        return SweepSpec(
            variable=SweepVariable.INPUT_POWER, minimum=_POWER_RANGE[0],
            maximum=_POWER_RANGE[1],
            fixed=ScenarioDefaults(beta=0.9),
            series=_radius_series("re", (2.0, 12.0), "r_eve"),
        )
    if fig_id == "fig4":
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=_radius_series("re", (2.0, 5.0, 100.0), "r_eve"),
        )
    if fig_id in ("fig5", "fig6"):
        # one preset feeds both the DR-focused and RR-focused plots
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=_radius_series("re", (2.0, 5.0, 7.0), "r_eve"),
        )
    if fig_id == "fig7":
        return SweepSpec(
            variable=SweepVariable.FREQUENCY, minimum=1e12, maximum=1e16,
            series=_radius_series("re", (1.0, 5.0, 70.0), "r_eve"),
        )
    if fig_id == "fig8":
        return SweepSpec(
            variable=SweepVariable.EVE_RADIUS, minimum=0.005, maximum=1.0,
        )
    if fig_id == "fig9":
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=_radius_series("rb", (5.0, 10.0, 20.0), "r_bob"),
        )
    if fig_id == "fig10":
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=tuple(
                SweepSeries(
                    label=f"w0={v:g}cm",
                    overrides={"waist_radius": v / 100.0, "r_alice": v / 100.0},
                )
                for v in (2.0, 5.0, 10.0)
            ),
        )
    if fig_id == "fig11":
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=tuple(
                SweepSeries(
                    label=f"w0=rb={v:g}cm",
                    overrides={
                        "waist_radius": v / 100.0,
                        "r_alice": v / 100.0,
                        "r_bob": v / 100.0,
                    },
                )
                for v in (5.0, 10.0, 20.0)
            ),
        )
    if fig_id == "fig12":
        return SweepSpec(
            variable=SweepVariable.DISTANCE, minimum=_DISTANCE_RANGE[0],
            maximum=_DISTANCE_RANGE[1],
            series=tuple(
                SweepSeries(
                    label=f"scale={c:g}",
                    overrides={
                        "waist_radius": 0.05 * c,
                        "r_alice": 0.05 * c,
                        "r_bob": 0.05 * c,
                        "r_eve": 0.05 * c,
                    },
                )
                for c in (1.0, 2.0)
            ),
        )
    raise ValueError(f"unknown figure preset: {fig_id!r}")


PRESET_IDS = tuple(f"fig{i}" for i in range(2, 13))
