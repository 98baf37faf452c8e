"""Free-space Gaussian-beam channel with a finite-aperture eavesdropper.

A Gaussian beam of waist ``W0`` travels a distance ``L`` to a plane holding
two coplanar circular apertures: the receiver's (radius ``r_bob``, centered
on the beam axis) and the eavesdropper's (radius ``r_eve``, tangential to
the receiver's, so its center sits ``r_bob + r_eve`` off axis).  This module
computes the power fraction each aperture collects and the thermal
background occupancy; together these fix the wiretap channel point
``(eta, kappa, n_e)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.integrate import quad
from scipy.special import erf, erfc

PLANCK = 6.62607015e-34      # J s (exact SI)
BOLTZMANN = 1.380649e-23     # J/K (exact SI)
LIGHT_SPEED = 299792458.0    # m/s (exact SI)

# hf/kT beyond this underflows exp() anyway; occupancy is 0 to machine precision
_OCCUPANCY_UNDERFLOW_EXPONENT = 700.0

_QUAD_REL_TOL = 1e-10
_QUAD_ABS_FLOOR = 1e-300
_QUAD_MAX_SUBDIVISIONS = 10_000


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach tolerance within its budget."""


def _ensure_positive(name: str, value: float) -> None:
    if not value > 0:
        raise ValueError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants plus the background temperature in kelvin."""

    planck: float = PLANCK
    boltzmann: float = BOLTZMANN
    light_speed: float = LIGHT_SPEED
    temperature: float = 3.0

    def __post_init__(self) -> None:
        _ensure_positive("planck", self.planck)
        _ensure_positive("boltzmann", self.boltzmann)
        _ensure_positive("light_speed", self.light_speed)
        _ensure_positive("temperature", self.temperature)


DEFAULT_CONSTANTS = PhysicalConstants()


@dataclass(frozen=True)
class BeamGeometry:
    """Transmitted Gaussian beam: waist radius and wavelength, in meters.

    ``peak_intensity`` is an arbitrary overall scale; every quantity this
    module returns is a power ratio, so it normalizes out.
    """

    waist_radius: float
    wavelength: float
    peak_intensity: float = 1.0

    def __post_init__(self) -> None:
        _ensure_positive("waist_radius", self.waist_radius)
        _ensure_positive("wavelength", self.wavelength)
        _ensure_positive("peak_intensity", self.peak_intensity)

    @property
    def rayleigh_length(self) -> float:
        return math.pi * self.waist_radius**2 / self.wavelength


@dataclass(frozen=True)
class ApertureLayout:
    """Radii of the three apertures, meters.

    The eavesdropper's disc is tangential to the receiver's, centered
    ``r_bob + r_eve`` from the beam axis (the closest non-overlapping
    coplanar placement).
    """

    r_alice: float
    r_bob: float
    r_eve: float

    def __post_init__(self) -> None:
        _ensure_positive("r_alice", self.r_alice)
        _ensure_positive("r_bob", self.r_bob)
        _ensure_positive("r_eve", self.r_eve)

    @property
    def eve_center_offset(self) -> float:
        return self.r_bob + self.r_eve

    @property
    def area_alice(self) -> float:
        return math.pi * self.r_alice**2

    @property
    def area_bob(self) -> float:
        return math.pi * self.r_bob**2

    @property
    def area_eve(self) -> float:
        return math.pi * self.r_eve**2


@dataclass(frozen=True)
class ChannelPoint:
    """Wiretap channel parameters at one distance and frequency.

    ``eta`` is the fraction of transmitted power the receiver collects;
    ``kappa`` the fraction of the remainder the eavesdropper collects;
    ``n_e`` the thermal background occupancy in photons per mode.
    """

    eta: float
    kappa: float
    n_e: float
    distance: float
    frequency: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.eta <= 1.0:
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa!r}")
        if self.n_e < 0.0:
            raise ValueError(f"n_e must be nonnegative, got {self.n_e!r}")
        if self.distance < 0.0:
            raise ValueError(f"distance must be nonnegative, got {self.distance!r}")
        _ensure_positive("frequency", self.frequency)


def rayleigh_length(geom: BeamGeometry) -> float:
    """Distance over which the beam cross-section doubles: pi*W0^2/lambda."""
    return geom.rayleigh_length


def beam_width(geom: BeamGeometry, distance: float) -> float:
    """Beam radius W(L) = W0*sqrt(1 + (L/z0)^2) at propagation distance L."""
    if distance < 0:
        raise ValueError(f"distance must be nonnegative, got {distance!r}")
    return geom.waist_radius * math.hypot(1.0, distance / geom.rayleigh_length)


def _erf_band(lo: float, hi: float) -> float:
    """erf(hi) - erf(lo), stable when both arguments sit far in one tail."""
    if lo >= 0.5:
        return erfc(lo) - erfc(hi)
    if hi <= -0.5:
        return erfc(-hi) - erfc(-lo)
    return erf(hi) - erf(lo)


def _disc_power_fraction(width: float, offset: float, radius: float) -> float:
    """Fraction of total beam power crossing a disc of ``radius`` whose
    center sits ``offset`` from the beam axis, for beam radius ``width``.

    Reduces the 2-D Gaussian integral to one dimension: the chord through
    the disc at transverse coordinate x contributes an erf band.
    """
    scale = math.sqrt(2.0) / width

    def integrand(x: float) -> float:
        half_chord = math.sqrt(max(radius * radius - x * x, 0.0))
        band = _erf_band(scale * (offset - half_chord), scale * (offset + half_chord))
        return math.exp(-2.0 * x * x / (width * width)) * band

    # Past ~40 beam radii the Gaussian factor underflows; clipping keeps the
    # sharply peaked small-width regime resolvable by the adaptive rule.
    upper = min(radius, 40.0 * width)
    breakpoints = [p for p in (width, 4.0 * width) if 0.0 < p < upper] or None
    result = quad(
        integrand,
        0.0,
        upper,
        epsabs=_QUAD_ABS_FLOOR,
        epsrel=_QUAD_REL_TOL,
        limit=_QUAD_MAX_SUBDIVISIONS,
        points=breakpoints,
        full_output=1,
    )
    if len(result) > 3:
        raise QuadratureError(f"disc power integral did not converge: {result[3]}")
    value = result[0]
    return 2.0 * value / (width * math.sqrt(2.0 * math.pi))


def power_fraction_bob(geom: BeamGeometry, layout: ApertureLayout, distance: float) -> float:
    """Transmissivity eta: fraction of beam power captured by the receiver's
    centered disc of radius ``r_bob`` at distance L."""
    width = beam_width(geom, distance)
    return min(_disc_power_fraction(width, 0.0, layout.r_bob), 1.0)


def power_fraction_eve(geom: BeamGeometry, layout: ApertureLayout, distance: float) -> float:
    """kappa: the eavesdropper's share of the power the receiver misses.

    The tap disc has radius ``r_eve`` and center ``r_bob + r_eve`` off axis.
    The denominator (1 - eta) is evaluated from the closed-form complement
    exp(-2*r_bob^2/W^2), which stays exact where 1 minus the quadrature
    value would cancel to noise.
    """
    width = beam_width(geom, distance)
    collected = _disc_power_fraction(width, layout.eve_center_offset, layout.r_eve)
    missed = math.exp(-2.0 * layout.r_bob**2 / width**2)
    if collected == 0.0:
        return 0.0
    return min(collected / missed, 1.0)


def thermal_occupancy(frequency: float, consts: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """Blackbody mean photon number per mode, 1/(exp(hf/kT) - 1).

    Exponents past the floating-point range return exactly 0; the
    downstream entropy function is continuous there, so this is exact to
    machine precision.
    """
    if frequency <= 0:
        raise ValueError(f"frequency must be positive, got {frequency!r}")
    exponent = consts.planck * frequency / (consts.boltzmann * consts.temperature)
    if exponent > _OCCUPANCY_UNDERFLOW_EXPONENT:
        return 0.0
    return 1.0 / math.expm1(exponent)


def channel_point(
    geom: BeamGeometry,
    layout: ApertureLayout,
    distance: float,
    frequency: float,
    consts: PhysicalConstants = DEFAULT_CONSTANTS,
) -> ChannelPoint:
    """Bundle (eta, kappa, n_e) for one distance/frequency.

    ``frequency`` must agree with the beam's wavelength: f = c/lambda.
    """
    _ensure_positive("frequency", frequency)
    implied = consts.light_speed / frequency
    if abs(implied - geom.wavelength) > 1e-6 * geom.wavelength:
        raise ValueError(
            f"frequency {frequency!r} implies wavelength {implied!r} m, "
            f"inconsistent with beam wavelength {geom.wavelength!r} m"
        )
    return ChannelPoint(
        eta=power_fraction_bob(geom, layout, distance),
        kappa=power_fraction_eve(geom, layout, distance),
        n_e=thermal_occupancy(frequency, consts),
        distance=distance,
        frequency=frequency,
    )
