"""Secret-key-rate bounds for the thermal wiretap channel.

Lower bounds come in two flavors, direct reconciliation (Alice's data is
the reference) and reverse reconciliation (Bob's data is the reference),
evaluated on an entanglement-based Gaussian model of the channel: Alice
keeps one arm of a two-mode squeezed vacuum, the signal arm passes a
beamsplitter of transmissivity eta fed by the thermal background, and the
discarded port passes a second beamsplitter of transmissivity kappa whose
output is the eavesdropper's mode.  Closed-form pure-loss limits, the
infinite-distance asymptotics in the aperture ratio m = (r_eve/r_bob)^2,
the crossover threshold m_th, and a pure-loss upper bound round out the
module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .channel import ChannelPoint
from .gaussian import (
    apply_beamsplitter,
    attach_mode,
    condition_on_heterodyne,
    entropy_g,
    partial_trace,
    tmsv_covariance,
    von_neumann_entropy,
)


@dataclass(frozen=True)
class WiretapScenario:
    """One channel point plus the transmitter's knobs: input power mu
    (mean photons per mode) and reconciliation efficiency beta."""

    channel: ChannelPoint
    mu: float
    beta: float = 1.0

    def __post_init__(self) -> None:
        if self.mu < 0:
            raise ValueError(f"mu must be nonnegative, got {self.mu!r}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0, 1], got {self.beta!r}")


@dataclass(frozen=True)
class RateBound:
    """Clamped lower bounds for both reconciliation directions, their max,
    and the pure-loss upper bound, all in bits per mode.  The clamp flags
    distinguish a genuine zero from a negative value clamped to zero."""

    k_dr: float
    k_rr: float
    k_best: float
    k_upper: float
    dr_clamped: bool
    rr_clamped: bool


@dataclass(frozen=True)
class WiretapModel:
    """Joint covariance of the entanglement-based channel dilation with
    named mode positions."""

    covariance: np.ndarray
    mode_alice: int
    mode_bob: int
    mode_eve: int
    mode_residual: int

    def eve_covariance(self) -> np.ndarray:
        """The eavesdropper holds only her tapped mode."""
        return partial_trace(self.covariance, [self.mode_eve])

    def eve_covariance_given_bob(self) -> np.ndarray:
        """Eve's covariance conditioned on heterodyne of Bob's mode."""
        conditioned = condition_on_heterodyne(self.covariance, self.mode_bob)
        shifted = self.mode_eve - (1 if self.mode_bob < self.mode_eve else 0)
        return partial_trace(conditioned, [shifted])


def aperture_ratio(r_eve: float, r_bob: float) -> float:
    """Squared ratio of the tap and receiver aperture radii."""
    if r_eve <= 0 or r_bob <= 0:
        raise ValueError("aperture radii must be positive")
    return (r_eve / r_bob) ** 2


def build_wiretap_model(scenario: WiretapScenario) -> WiretapModel:
    """Assemble the four-mode Gaussian dilation of the wiretap channel.

    The tap beamsplitter's idle port is vacuum: the eavesdropper's own
    collection inefficiency adds no thermal photons.
    """
    ch = scenario.channel
    cov = tmsv_covariance(scenario.mu)              # modes: alice=0, signal=1
    cov = attach_mode(cov, 2.0 * ch.n_e + 1.0)      # thermal background = 2
    cov = apply_beamsplitter(cov, 1, 2, ch.eta)     # 1 -> Bob, 2 -> lost light
    cov = attach_mode(cov, 1.0)                     # tap idle port = 3
    cov = apply_beamsplitter(cov, 2, 3, ch.kappa)   # 2 -> Eve, 3 -> residual
    return WiretapModel(
        covariance=cov, mode_alice=0, mode_bob=1, mode_eve=2, mode_residual=3
    )


def _conditional_source_occupancy(mu: float, eta: float, n_e: float) -> float:
    """Occupancy of Alice's retained arm after Bob's heterodyne.

    Algebraically equal to mu - eta*mu*(1+mu)/(1 + n_e - n_e*eta + eta*mu);
    this form avoids the catastrophic cancellation of that difference at
    large mu.
    """
    return mu * (1.0 - eta) * (1.0 + n_e) / (1.0 + n_e * (1.0 - eta) + eta * mu)


def _direct_raw(scenario: WiretapScenario) -> float:
    ch = scenario.channel
    model = build_wiretap_model(scenario)
    s_eve = von_neumann_entropy(model.eve_covariance())
    n_bob = ch.n_e * (1.0 - ch.eta) + ch.eta * scenario.mu
    return (
        scenario.beta * entropy_g(n_bob)
        - s_eve
        - scenario.beta * entropy_g(ch.n_e * (1.0 - ch.eta))
        + entropy_g(ch.n_e * (1.0 - ch.eta * ch.kappa))
    )


def _reverse_raw(scenario: WiretapScenario) -> float:
    ch = scenario.channel
    model = build_wiretap_model(scenario)
    s_eve = von_neumann_entropy(model.eve_covariance())
    s_eve_given_bob = von_neumann_entropy(model.eve_covariance_given_bob())
    conditional = _conditional_source_occupancy(scenario.mu, ch.eta, ch.n_e)
    return (
        scenario.beta * entropy_g(scenario.mu)
        - s_eve
        - scenario.beta * entropy_g(conditional)
        + s_eve_given_bob
    )


def lower_bound_direct(scenario: WiretapScenario) -> float:
    """Direct-reconciliation lower bound through the Gaussian model, clamped
    at zero (a negative rate means no key is distillable this way)."""
    return max(0.0, _direct_raw(scenario))


def lower_bound_reverse(scenario: WiretapScenario) -> float:
    """Reverse-reconciliation lower bound through the Gaussian model,
    clamped at zero."""
    return max(0.0, _reverse_raw(scenario))


def _check_channel_interior(eta: float, kappa: float) -> None:
    if not 0.0 < eta < 1.0:
        raise ValueError(f"eta must lie strictly inside (0, 1), got {eta!r}")
    if not 0.0 < kappa <= 1.0:
        raise ValueError(f"kappa must lie in (0, 1], got {kappa!r}")


def _limit_direct_raw(eta: float, kappa: float, n_e: float = 0.0) -> float:
    _check_channel_interior(eta, kappa)
    raw = math.log2(eta / (kappa * (1.0 - eta)))
    if n_e > 0.0:
        raw += entropy_g(n_e * (1.0 - eta * kappa)) - entropy_g(n_e * (1.0 - eta))
    return raw


def _limit_reverse_raw(eta: float, kappa: float, n_e: float = 0.0) -> float:
    _check_channel_interior(eta, kappa)
    return (
        -math.log2(kappa * (1.0 - eta))
        - entropy_g((1.0 - eta) * (1.0 + n_e) / eta)
        + entropy_g(kappa * (1.0 + n_e - eta) / eta)
    )


def limit_direct(channel: ChannelPoint) -> float:
    """Unbounded-input-power direct-reconciliation rate at beta = 1: the
    mu -> infinity limit of the model bound, clamped at zero."""
    return max(0.0, _limit_direct_raw(channel.eta, channel.kappa, channel.n_e))


def limit_reverse(channel: ChannelPoint) -> float:
    """Unbounded-input-power reverse-reconciliation rate at beta = 1."""
    return max(0.0, _limit_reverse_raw(channel.eta, channel.kappa, channel.n_e))


def pure_loss_direct(eta: float, kappa: float) -> float:
    """Closed-form direct-reconciliation rate of the pure-loss channel with
    unbounded input power: max(0, log2(eta / (kappa (1 - eta))))."""
    return max(0.0, _limit_direct_raw(eta, kappa))


def pure_loss_reverse(eta: float, kappa: float) -> float:
    """Closed-form reverse-reconciliation pure-loss rate:
    max(0, -log2(kappa (1-eta)) - g((1-eta)/eta) + g(kappa (1-eta)/eta))."""
    return max(0.0, _limit_reverse_raw(eta, kappa))


def asymptote_direct(m: float) -> float:
    """Infinite-distance direct-reconciliation constant: max(0, -log2 m)."""
    if m <= 0:
        raise ValueError(f"aperture ratio must be positive, got {m!r}")
    return max(0.0, -math.log2(m))


def asymptote_reverse(m: float) -> float:
    """Infinite-distance reverse-reconciliation constant:
    -log2((m/(1+m))^(1+m) * e), always positive, -> 0 as m -> infinity."""
    if m <= 0:
        raise ValueError(f"aperture ratio must be positive, got {m!r}")
    return (1.0 + m) * math.log1p(1.0 / m) / math.log(2.0) - math.log2(math.e)


@lru_cache(maxsize=1)
def m_threshold() -> float:
    """Aperture ratio where the two infinite-distance constants coincide:
    the root of (m+1) ln(m+1) - m ln m = 1, about 0.54."""

    def residual(m: float) -> float:
        return (m + 1.0) * math.log1p(m) - m * math.log(m) - 1.0

    return float(brentq(residual, 1e-9, 1.0, xtol=1e-14, rtol=8.9e-16))


def asymptote_best(m: float) -> float:
    """Piecewise best constant: the direct branch below m_th, reverse above."""
    return asymptote_direct(m) if m <= m_threshold() else asymptote_reverse(m)


def upper_bound(eta: float, kappa: float) -> float:
    """Two-way-assisted secrecy upper bound of the pure-loss channel:
    log2((eta + kappa(1-eta)) / (kappa(1-eta)))."""
    _check_channel_interior(eta, kappa)
    return math.log1p(eta / (kappa * (1.0 - eta))) / math.log(2.0)


def rate_bound(channel: ChannelPoint, beta: float, mu: float | None) -> RateBound:
    """Assemble both lower bounds plus the upper bound for one channel point.

    mu=None requests the unbounded-power evaluation, valid only at beta=1
    (for beta < 1 the rates fall off at large mu, so no limit exists).
    """
    if mu is None:
        if beta != 1.0:
            raise ValueError("unbounded input power requires beta = 1")
        dr_raw = _limit_direct_raw(channel.eta, channel.kappa, channel.n_e)
        rr_raw = _limit_reverse_raw(channel.eta, channel.kappa, channel.n_e)
    else:
        scenario = WiretapScenario(channel=channel, mu=mu, beta=beta)
        dr_raw = _direct_raw(scenario)
        rr_raw = _reverse_raw(scenario)
    k_dr = max(0.0, dr_raw)
    k_rr = max(0.0, rr_raw)
    return RateBound(
        k_dr=k_dr,
        k_rr=k_rr,
        k_best=max(k_dr, k_rr),
        k_upper=upper_bound(channel.eta, channel.kappa),
        dr_clamped=dr_raw < 0.0,
        rr_clamped=rr_raw < 0.0,
    )
