"""Tests for parameter sweeps and input-power optimization."""

import dataclasses
import math

import numpy as np
import pytest

from beamtap.channel import ChannelPoint, LIGHT_SPEED
from beamtap.bounds import asymptote_reverse, limit_direct, limit_reverse
from beamtap.sweep import (
    PRESET_IDS,
    OptimumReport,
    Reconciliation,
    ScenarioDefaults,
    SpecialPower,
    SweepSeries,
    SweepSpec,
    SweepVariable,
    _build_channel,
    _rate_at,
    figure_preset,
    optimal_input_power,
    run_sweep,
)

F_TELECOM = LIGHT_SPEED / 1.55e-6


def channel(eta: float, kappa: float, n_e: float = 0.0) -> ChannelPoint:
    return ChannelPoint(
        eta=eta, kappa=kappa, n_e=n_e, distance=1.0, frequency=F_TELECOM
    )


class TestSweepSpecValidation:
    def test_range_ordering(self) -> None:
        with pytest.raises(ValueError):
            SweepSpec(SweepVariable.DISTANCE, 1e4, 1e4)
        with pytest.raises(ValueError):
            SweepSpec(SweepVariable.DISTANCE, 1e5, 1e4)

    def test_count_floor(self) -> None:
        with pytest.raises(ValueError):
            SweepSpec(SweepVariable.DISTANCE, 1.0, 2.0, count=1)

    def test_log_needs_positive_min(self) -> None:
        with pytest.raises(ValueError):
            SweepSpec(SweepVariable.INPUT_POWER, 0.0, 10.0, log_spaced=True)
        SweepSpec(SweepVariable.INPUT_POWER, 0.0, 10.0, log_spaced=False)

    def test_fixed_parameters_validated(self) -> None:
        for bad in (
            ScenarioDefaults(beta=0.0),
            ScenarioDefaults(beta=1.5),
            ScenarioDefaults(temperature=-1.0),
            ScenarioDefaults(r_eve=-0.05),
            ScenarioDefaults(mu=-2.0),
        ):
            with pytest.raises(ValueError):
                SweepSpec(SweepVariable.DISTANCE, 1.0, 2.0, fixed=bad)

    def test_series_overrides_validated(self) -> None:
        with pytest.raises(ValueError):
            SweepSpec(
                SweepVariable.DISTANCE, 1.0, 2.0,
                series=(SweepSeries("bad", {"r_bob": -1.0}),),
            )

    def test_grid_spacing(self) -> None:
        log_grid = SweepSpec(SweepVariable.DISTANCE, 1e2, 1e6, count=5).grid()
        assert log_grid[0] == pytest.approx(1e2, rel=1e-12)
        assert log_grid[-1] == pytest.approx(1e6, rel=1e-12)
        ratios = log_grid[1:] / log_grid[:-1]
        assert np.allclose(ratios, ratios[0])

        lin_grid = SweepSpec(
            SweepVariable.DISTANCE, 0.0, 8.0, count=5, log_spaced=False
        ).grid()
        assert np.allclose(lin_grid, [0.0, 2.0, 4.0, 6.0, 8.0])


class TestOptimalInputPower:
    def test_perfect_reconciliation_unbounded(self) -> None:
        ch = channel(0.4, 0.2)
        report = optimal_input_power(ch, 1.0, Reconciliation.DIRECT)
        assert report.mu_star is SpecialPower.UNBOUNDED
        assert report.k_at_star == pytest.approx(limit_direct(ch), rel=1e-12)
        report = optimal_input_power(ch, 1.0, Reconciliation.REVERSE)
        assert report.k_at_star == pytest.approx(limit_reverse(ch), rel=1e-12)

    def test_imperfect_reconciliation_interior_optimum(self) -> None:
        ch = _build_channel(ScenarioDefaults(r_eve=0.12))
        for rec in Reconciliation:
            report = optimal_input_power(ch, 0.9, rec)
            assert isinstance(report.mu_star, float)
            assert 1e-4 < report.mu_star < 1e8
            below = _rate_at(ch, 0.9, rec, report.mu_star / 10.0)
            above = _rate_at(ch, 0.9, rec, report.mu_star * 10.0)
            assert below < report.k_at_star
            assert above < report.k_at_star

    def test_matches_brute_force_scan(self) -> None:
        ch = _build_channel(ScenarioDefaults(r_eve=0.12))
        report = optimal_input_power(ch, 0.9, Reconciliation.REVERSE)
        grid = np.logspace(-4, 8, 2500)
        rates = [_rate_at(ch, 0.9, Reconciliation.REVERSE, float(m)) for m in grid]
        best = int(np.argmax(rates))
        assert report.mu_star == pytest.approx(grid[best], rel=0.01)
        assert report.k_at_star == pytest.approx(rates[best], abs=1e-4)
        assert report.k_at_star >= rates[best] - 1e-12

    def test_hopeless_profile_reports_none(self) -> None:
        # direct reconciliation cannot beat a tap that takes everything
        # the receiver misses
        report = optimal_input_power(channel(0.1, 1.0), 0.9, Reconciliation.DIRECT)
        assert report.mu_star is SpecialPower.NONE
        assert report.k_at_star == 0.0

    def test_near_perfect_reconciliation_flags_unbounded(self) -> None:
        # the rate only turns over beyond the search interval, which the
        # coarse grid reports as an unbounded optimum
        report = optimal_input_power(
            channel(0.5, 0.2), 1.0 - 1e-9, Reconciliation.REVERSE
        )
        assert report.mu_star is SpecialPower.UNBOUNDED
        assert report.k_at_star > 0.0

    def test_invalid_beta_rejected(self) -> None:
        with pytest.raises(ValueError):
            optimal_input_power(channel(0.5, 0.5), 0.0, Reconciliation.DIRECT)
        with pytest.raises(ValueError):
            optimal_input_power(channel(0.5, 0.5), 1.2, Reconciliation.DIRECT)


class TestRunSweep:
    def test_distance_sweep_reaches_reverse_asymptote(self) -> None:
        # equal apertures put the aperture ratio at one
        spec = SweepSpec(SweepVariable.DISTANCE, 1e2, 1e7, count=30)
        rows = run_sweep(spec)
        assert [row.x for row in rows] == sorted(row.x for row in rows)
        etas = [row.eta for row in rows]
        assert all(b < a for a, b in zip(etas, etas[1:]))
        assert rows[-1].k_rr == pytest.approx(asymptote_reverse(1.0), abs=2e-2)
        assert all(row.mu_star_dr is SpecialPower.UNBOUNDED for row in rows)
        assert all(row.mu_star_rr is SpecialPower.UNBOUNDED for row in rows)

    def test_frequency_sweep_monotone_with_flat_ends(self) -> None:
        spec = SweepSpec(SweepVariable.FREQUENCY, 1e12, 1e16, count=30)
        rows = run_sweep(spec)
        k_best = [row.k_best for row in rows]
        assert all(b >= a - 1e-12 for a, b in zip(k_best, k_best[1:]))
        span = k_best[-1] - k_best[0]
        assert span > 1.0
        assert abs(k_best[1] - k_best[0]) < 0.01 * span
        assert abs(k_best[-1] - k_best[-2]) < 0.01 * span

    def test_eve_radius_sweep_nonincreasing(self) -> None:
        spec = SweepSpec(SweepVariable.EVE_RADIUS, 0.005, 1.0, count=30)
        rows = run_sweep(spec)
        for column in ("k_dr", "k_rr"):
            values = [getattr(row, column) for row in rows]
            assert all(b <= a + 1e-12 for a, b in zip(values, values[1:]))
            # converges to a constant at the wide-aperture end
            assert abs(values[-1] - values[-2]) < 0.02

    def test_power_sweep_monotone_at_unit_beta(self) -> None:
        spec = SweepSpec(SweepVariable.INPUT_POWER, 1e-2, 1e4, count=25)
        rows = run_sweep(spec)
        for column in ("k_dr", "k_rr"):
            values = [getattr(row, column) for row in rows]
            assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))
        assert all(row.mu_star_dr is SpecialPower.UNBOUNDED for row in rows)

    def test_power_sweep_beta_below_one_shares_series_optimum(self) -> None:
        spec = SweepSpec(
            SweepVariable.INPUT_POWER, 1e-2, 1e4, count=7,
            fixed=ScenarioDefaults(beta=0.9, r_eve=0.12),
        )
        rows = run_sweep(spec)
        stars = {row.mu_star_rr for row in rows}
        assert len(stars) == 1
        (star,) = stars
        assert isinstance(star, float)

    def test_fixed_power_echoed(self) -> None:
        spec = SweepSpec(
            SweepVariable.DISTANCE, 1e3, 1e5, count=3,
            fixed=ScenarioDefaults(mu=5.0),
        )
        for row in run_sweep(spec):
            assert row.mu_star_dr == 5.0
            assert row.mu_star_rr == 5.0

    def test_optimized_distance_sweep(self) -> None:
        spec = SweepSpec(
            SweepVariable.DISTANCE, 1e3, 1e5, count=3,
            fixed=ScenarioDefaults(beta=0.9),
        )
        rows = run_sweep(spec)
        for row in rows:
            assert row.k_upper >= row.k_best - 1e-12
            assert row.k_best == max(row.k_dr, row.k_rr)
        # direct reconciliation dies at long range while reverse survives
        last = rows[-1]
        assert last.k_dr == 0.0
        assert last.mu_star_dr is SpecialPower.NONE
        assert last.k_rr > 0.0
        assert "dr_clamped" in last.flags

    def test_series_labels_in_flags(self) -> None:
        spec = SweepSpec(
            SweepVariable.DISTANCE, 1e3, 1e4, count=2,
            series=(
                SweepSeries("re=2cm", {"r_eve": 0.02}),
                SweepSeries("re=5cm", {"r_eve": 0.05}),
            ),
        )
        rows = run_sweep(spec)
        assert len(rows) == 4
        assert [row.flags[0] for row in rows] == [
            "s:re=2cm", "s:re=2cm", "s:re=5cm", "s:re=5cm",
        ]

    def test_row_failure_marked_not_raised(self, monkeypatch) -> None:
        import beamtap.sweep as sweep_module

        real_build = sweep_module._build_channel
        calls = {"n": 0}

        def flaky(defaults):
            calls["n"] += 1
            if calls["n"] == 2:
                raise ValueError("synthetic failure")
            return real_build(defaults)

        monkeypatch.setattr(sweep_module, "_build_channel", flaky)
        spec = SweepSpec(SweepVariable.DISTANCE, 1e3, 1e5, count=3)
        rows = run_sweep(spec)
        assert len(rows) == 3
        assert rows[1].flags == ("ERR",)
        assert rows[1].k_dr == 0.0
        assert rows[1].mu_star_dr is SpecialPower.NONE
        assert rows[0].flags == ()
        assert rows[2].k_best > 0.0


class TestFigurePresets:
    def test_all_ids_build(self) -> None:
        for fig_id in PRESET_IDS:
            spec = figure_preset(fig_id)
            assert spec.count == 200
            assert spec.minimum < spec.maximum

    def test_unknown_id_rejected(self) -> None:
        with pytest.raises(ValueError):
            figure_preset("fig13")
        with pytest.raises(ValueError):
            figure_preset("nope")

    def test_power_presets(self) -> None:
        fig2 = figure_preset("fig2")
        assert fig2.variable is SweepVariable.INPUT_POWER
        assert (fig2.minimum, fig2.maximum) == (1e-2, 1e4)
        assert fig2.fixed.beta == 1.0
        assert [s.overrides["r_eve"] for s in fig2.series] == [0.02, 0.12]

        fig3 = figure_preset("fig3")
        assert fig3.fixed.beta == 0.9
        assert [s.overrides["r_eve"] for s in fig3.series] == [0.02, 0.12]

    def test_distance_presets(self) -> None:
        fig4 = figure_preset("fig4")
        assert fig4.variable is SweepVariable.DISTANCE
        assert [s.overrides["r_eve"] for s in fig4.series] == [0.02, 0.05, 1.0]
        assert figure_preset("fig5") == figure_preset("fig6")

    def test_frequency_preset(self) -> None:
        fig7 = figure_preset("fig7")
        assert fig7.variable is SweepVariable.FREQUENCY
        assert (fig7.minimum, fig7.maximum) == (1e12, 1e16)
        assert [s.overrides["r_eve"] for s in fig7.series] == [0.01, 0.05, 0.70]

    def test_eve_radius_preset(self) -> None:
        fig8 = figure_preset("fig8")
        assert fig8.variable is SweepVariable.EVE_RADIUS
        assert fig8.series == ()

    def test_waist_presets_keep_alice_convention(self) -> None:
        for fig_id in ("fig10", "fig11", "fig12"):
            for series in figure_preset(fig_id).series:
                assert series.overrides["waist_radius"] == series.overrides["r_alice"]


class TestSweepProperties:
    def test_common_scaling_preserves_plateau(self) -> None:
        # scaling every aperture with the beam waist leaves the
        # far-field rate unchanged and shifts the curve in distance
        spec = dataclasses.replace(figure_preset("fig12"), count=25)
        rows = run_sweep(spec)
        base = [r for r in rows if r.flags[0] == "s:scale=1"]
        scaled = [r for r in rows if r.flags[0] == "s:scale=2"]
        assert abs(base[-1].k_best - scaled[-1].k_best) < 2e-2

    def test_bigger_receiver_never_hurts(self) -> None:
        distances = [1e3, 1e4, 1e5, 1e6]
        rates = []
        for r_bob in (0.05, 0.10, 0.20):
            spec = SweepSpec(
                SweepVariable.DISTANCE, distances[0], distances[-1],
                count=len(distances),
                fixed=ScenarioDefaults(r_bob=r_bob),
            )
            rates.append([row.k_best for row in run_sweep(spec)])
        for smaller, bigger in zip(rates, rates[1:]):
            assert all(b >= s - 1e-9 for s, b in zip(smaller, bigger))


class TestOptimumReportShape:
    def test_fields(self) -> None:
        report = OptimumReport(SpecialPower.UNBOUNDED, 1.5, Reconciliation.DIRECT)
        assert report.reconciliation is Reconciliation.DIRECT
        with pytest.raises(dataclasses.FrozenInstanceError):
            report.k_at_star = 0.0  # type: ignore[misc]
