"""Command-line front end.

Subcommands: ``bounds`` (single-point rates), ``sweep`` (one-variable
sweep), ``figure`` (preset sweeps), ``mth`` (aperture-ratio threshold).
Emits CSV or JSON; identical invocations produce byte-identical output.

Boundary units follow the conventions of the printed figures: radii in
cm, distance in km, wavelength in nm, frequency in Hz, temperature in K.
All internal computation and every CSV x value are SI.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import math
import sys
from dataclasses import dataclass, field

from . import __version__
from .bounds import m_threshold
from .sweep import (
    PRESET_IDS,
    ScenarioDefaults,
    SpecialPower,
    SweepRow,
    SweepSpec,
    SweepVariable,
    evaluate_scenario,
    figure_preset,
    run_sweep,
)

SWEEP_HEADER = (
    "x", "eta", "kappa", "n_e", "k_dr", "k_rr", "k_best", "k_upper",
    "mu_star_dr", "mu_star_rr", "flags",
)
BOUNDS_HEADER = SWEEP_HEADER[1:]

_X_UNITS = {
    SweepVariable.DISTANCE: "m",
    SweepVariable.FREQUENCY: "Hz",
    SweepVariable.EVE_RADIUS: "m",
    SweepVariable.WAIST_RADIUS: "m",
    SweepVariable.BOB_RADIUS: "m",
    SweepVariable.INPUT_POWER: "photons",
}


class UsageError(ValueError):
    """Bad flags, config keys, or parameter values; exits with code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully merged invocation: flags take precedence over config-file
    values, which take precedence over defaults."""

    subcommand: str
    scenario: ScenarioDefaults
    var: SweepVariable | None = None
    minimum: float | None = None
    maximum: float | None = None
    count: int = 200
    log_spaced: bool = True
    fig_id: str | None = None
    out: str | None = None
    fmt: str = "csv"
    command_line: tuple[str, ...] = field(default_factory=tuple)


def _positive(flag: str, value: float) -> float:
    if not value > 0.0:
        raise UsageError(f"invalid value for {flag}: must be positive, got {value}")
    return value


def _nonnegative(flag: str, value: float) -> float:
    if value < 0.0:
        raise UsageError(f"invalid value for {flag}: must be nonnegative, got {value}")
    return value


def _as_float(flag: str, raw: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise UsageError(f"invalid value for {flag}: not a number: {raw!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"invalid value for {flag}: must be finite, got {raw}")
    return value


def _as_int(flag: str, raw: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"invalid value for {flag}: not an integer: {raw!r}") from None


def _as_bool(flag: str, raw: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise UsageError(f"invalid value for {flag}: expected true/false, got {raw!r}")


# config-file key for every value-carrying flag
_CONFIG_KEYS = (
    "lambda_nm", "temp_k", "w0_cm", "ra_cm", "rb_cm", "re_cm",
    "distance_km", "beta", "mu",
    "var", "min", "max", "count", "log",
    "out", "format",
)


def _parse_config_file(path: str) -> dict[str, str]:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    values: dict[str, str] = {}
    for lineno, line in enumerate(lines, start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise UsageError(
                f"{path}:{lineno}: expected key=value, got {stripped!r}"
            )
        key, _, raw = stripped.partition("=")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = raw.strip()
    return values


def _merged(args: argparse.Namespace, key: str, file_values: dict[str, str]) -> str | None:
    """Flag value if given, else config-file value, else None."""

    flag_value = getattr(args, key, None)
    if flag_value is not None:
        return flag_value
    return file_values.get(key)


def _build_scenario(
    args: argparse.Namespace, file_values: dict[str, str]
) -> ScenarioDefaults:
    scenario = ScenarioDefaults()
    updates: dict[str, float] = {}

    def pick(key: str, flag: str):
        raw = _merged(args, key, file_values)
        return (raw, flag if getattr(args, key, None) is not None else f"config key {key!r}")

    raw, origin = pick("lambda_nm", "--lambda-nm")
    if raw is not None:
        updates["wavelength"] = _positive(origin, _as_float(origin, raw)) * 1e-9
    raw, origin = pick("temp_k", "--temp-k")
    if raw is not None:
        updates["temperature"] = _positive(origin, _as_float(origin, raw))
    for key, flag, target in (
        ("w0_cm", "--w0-cm", "waist_radius"),
        ("ra_cm", "--ra-cm", "r_alice"),
        ("rb_cm", "--rb-cm", "r_bob"),
        ("re_cm", "--re-cm", "r_eve"),
    ):
        raw, origin = pick(key, flag)
        if raw is not None:
            updates[target] = _positive(origin, _as_float(origin, raw)) / 100.0
    raw, origin = pick("distance_km", "--distance-km")
    if raw is not None:
        updates["distance"] = _nonnegative(origin, _as_float(origin, raw)) * 1e3
    raw, origin = pick("beta", "--beta")
    if raw is not None:
        beta = _as_float(origin, raw)
        if not 0.0 < beta <= 1.0:
            raise UsageError(
                f"invalid value for {origin}: beta must lie in (0, 1], got {beta}"
            )
        updates["beta"] = beta

    raw, origin = pick("mu", "--mu")
    if raw is not None and raw != "opt":
        updates["mu"] = _nonnegative(origin, _as_float(origin, raw))
    return scenario.replace(**updates)


def _build_config(args: argparse.Namespace, argv: tuple[str, ...]) -> RunConfig:
    file_values = _parse_config_file(args.config) if args.config else {}
    scenario = _build_scenario(args, file_values)

    out = _merged(args, "out", file_values)
    fmt = _merged(args, "format", file_values) or "csv"
    if fmt not in ("csv", "json"):
        raise UsageError(f"invalid output format {fmt!r}: expected csv or json")

    var: SweepVariable | None = None
    minimum = maximum = None
    count = 200
    log_spaced = True
    if args.subcommand == "sweep":
        raw = _merged(args, "var", file_values)
        if raw is None:
            raise UsageError("sweep requires --var")
        try:
            var = SweepVariable(raw)
        except ValueError:
            choices = ", ".join(v.value for v in SweepVariable)
            raise UsageError(
                f"invalid value for --var: {raw!r} (choose from {choices})"
            ) from None
        raw = _merged(args, "min", file_values)
        if raw is None:
            raise UsageError("sweep requires --min")
        minimum = _as_float("--min", raw)
        raw = _merged(args, "max", file_values)
        if raw is None:
            raise UsageError("sweep requires --max")
        maximum = _as_float("--max", raw)
        raw = _merged(args, "count", file_values)
        if raw is not None:
            count = _as_int("--count", raw) if isinstance(raw, str) else raw
        raw = getattr(args, "log", None)
        if raw is None and "log" in file_values:
            raw = _as_bool("config key 'log'", file_values["log"])
        log_spaced = True if raw is None else raw

    return RunConfig(
        subcommand=args.subcommand,
        scenario=scenario,
        var=var,
        minimum=minimum,
        maximum=maximum,
        count=count,
        log_spaced=log_spaced,
        fig_id=getattr(args, "fig_id", None),
        out=out,
        fmt=fmt,
        command_line=argv,
    )


def _format_value(value) -> str:
    if isinstance(value, SpecialPower):
        return value.value
    if isinstance(value, float):
        return f"{value:.17e}"
    return str(value)


def _row_cells(row: SweepRow, with_x: bool) -> list[str]:
    cells = [] if not with_x else [_format_value(row.x)]
    cells += [
        _format_value(row.eta), _format_value(row.kappa), _format_value(row.n_e),
        _format_value(row.k_dr), _format_value(row.k_rr),
        _format_value(row.k_best), _format_value(row.k_upper),
        _format_value(row.mu_star_dr), _format_value(row.mu_star_rr),
        ";".join(row.flags),
    ]
    return cells


def _json_value(value):
    if isinstance(value, SpecialPower):
        return value.value
    return value


def _rows_as_json(rows, with_x: bool) -> str:
    header = SWEEP_HEADER if with_x else BOUNDS_HEADER
    records = []
    for row in rows:
        values = ([row.x] if with_x else []) + [
            row.eta, row.kappa, row.n_e, row.k_dr, row.k_rr, row.k_best,
            row.k_upper, _json_value(row.mu_star_dr), _json_value(row.mu_star_rr),
            ";".join(row.flags),
        ]
        records.append(dict(zip(header, values)))
    return json.dumps(records, indent=2) + "\n"


def _rows_as_csv(
    rows, with_x: bool, metadata: list[str]
) -> str:
    buffer = io.StringIO()
    for line in metadata:
        buffer.write(f"# {line}\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(SWEEP_HEADER if with_x else BOUNDS_HEADER)
    for row in rows:
        writer.writerow(_row_cells(row, with_x))
    return buffer.getvalue()


def _scrub_out_flag(argv: tuple[str, ...]) -> list[str]:
    """Drop --out and its value: the destination is not part of the
    computation, and recording it would make otherwise identical runs
    produce different bytes."""

    kept: list[str] = []
    skip = False
    for token in argv:
        if skip:
            skip = False
            continue
        if token == "--out":
            skip = True
            continue
        if token.startswith("--out="):
            continue
        kept.append(token)
    return kept


def _metadata(config: RunConfig, spec: SweepSpec | None) -> list[str]:
    lines = [
        f"beamtap {__version__}",
        "command: " + " ".join(_scrub_out_flag(config.command_line)),
    ]
    if spec is not None:
        lines.append(f"x: {spec.variable.value} [{_X_UNITS[spec.variable]}]")
        if spec.series:
            lines.append("series: " + ", ".join(s.label for s in spec.series))
    return lines


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as handle:
            handle.write(text)


def _spec_overrides(config: RunConfig, spec: SweepSpec) -> SweepSpec:
    """Apply CLI scenario overrides beneath a preset's own series."""

    base = ScenarioDefaults()
    changed = {
        name: getattr(config.scenario, name)
        for name in (
            "wavelength", "temperature", "waist_radius", "r_alice",
            "r_bob", "r_eve", "distance", "beta", "mu",
        )
        if getattr(config.scenario, name) != getattr(base, name)
    }
    if not changed:
        return spec
    return dataclasses.replace(spec, fixed=spec.fixed.replace(**changed))


def cmd_bounds(config: RunConfig) -> None:
    row = evaluate_scenario(config.scenario)
    if config.fmt == "json":
        _emit(_rows_as_json([row], with_x=False), config.out)
    else:
        _emit(
            _rows_as_csv([row], with_x=False, metadata=_metadata(config, None)),
            config.out,
        )


def _run_and_emit(config: RunConfig, spec: SweepSpec) -> None:
    rows = run_sweep(spec)
    if config.fmt == "json":
        _emit(_rows_as_json(rows, with_x=True), config.out)
    else:
        _emit(
            _rows_as_csv(rows, with_x=True, metadata=_metadata(config, spec)),
            config.out,
        )


def cmd_sweep(config: RunConfig) -> None:
    assert config.var is not None
    assert config.minimum is not None and config.maximum is not None
    spec = SweepSpec(
        variable=config.var,
        minimum=config.minimum,
        maximum=config.maximum,
        count=config.count,
        log_spaced=config.log_spaced,
        fixed=config.scenario,
    )
    _run_and_emit(config, spec)


def cmd_figure(config: RunConfig) -> None:
    assert config.fig_id is not None
    spec = _spec_overrides(config, figure_preset(config.fig_id))
    _run_and_emit(config, spec)


def cmd_mth(config: RunConfig) -> None:
    root = m_threshold()
    residual = (root + 1.0) * math.log(root + 1.0) - root * math.log(root) - 1.0
    if config.fmt == "json":
        _emit(
            json.dumps({"m_th": float(f"{root:.10g}"), "residual": residual}) + "\n",
            config.out,
        )
    else:
        _emit(f"m_th,residual\n{root:.10g},{residual:.3e}\n", config.out)


def _build_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    scenario_group = shared.add_argument_group("scenario overrides")
    for flag, help_text in (
        ("--lambda-nm", "wavelength in nm (default 1550)"),
        ("--temp-k", "environment temperature in K (default 3)"),
        ("--w0-cm", "beam waist radius in cm (default 5)"),
        ("--ra-cm", "sender aperture radius in cm (default 5)"),
        ("--rb-cm", "receiver aperture radius in cm (default 5)"),
        ("--re-cm", "eavesdropper aperture radius in cm (default 5)"),
        ("--distance-km", "link distance in km (default 10)"),
        ("--beta", "reconciliation efficiency in (0, 1] (default 1)"),
        ("--mu", "mean photon number, or 'opt' for the optimum (default opt)"),
    ):
        scenario_group.add_argument(flag, type=str, default=None, help=help_text)
    shared.add_argument("--config", type=str, default=None,
                        help="key=value file; flags override its entries")
    shared.add_argument("--out", type=str, default=None,
                        help="output path (default: stdout)")
    shared.add_argument("--format", type=str, default=None,
                        choices=("csv", "json"), help="output format (default csv)")

    parser = argparse.ArgumentParser(
        prog="beamtap",
        description="Secret-key-rate bounds for a free-space optical "
        "wiretap channel with a finite eavesdropper aperture.",
    )
    parser.add_argument("--version", action="version", version=f"beamtap {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)

    subparsers.add_parser("bounds", parents=[shared],
                          help="rate bounds for a single scenario")

    sweep_parser = subparsers.add_parser("sweep", parents=[shared],
                                         help="sweep one variable")
    sweep_parser.add_argument("--var", type=str, default=None,
                              help="swept variable: " + ", ".join(v.value for v in SweepVariable))
    sweep_parser.add_argument("--min", type=str, default=None, help="range start (SI units)")
    sweep_parser.add_argument("--max", type=str, default=None, help="range end (SI units)")
    sweep_parser.add_argument("--count", type=int, default=None, help="grid points (default 200)")
    spacing = sweep_parser.add_mutually_exclusive_group()
    spacing.add_argument("--log", dest="log", action="store_true", default=None,
                         help="log-spaced grid (default)")
    spacing.add_argument("--linear", dest="log", action="store_false",
                         help="linearly spaced grid")

    figure_parser = subparsers.add_parser("figure", parents=[shared],
                                          help="run a preset sweep")
    figure_parser.add_argument("fig_id", choices=PRESET_IDS, metavar="fig_id",
                               help="one of " + ", ".join(PRESET_IDS))

    subparsers.add_parser("mth", parents=[shared],
                          help="aperture-ratio threshold where the two "
                          "asymptotes cross")
    return parser


_DISPATCH = {
    "bounds": cmd_bounds,
    "sweep": cmd_sweep,
    "figure": cmd_figure,
    "mth": cmd_mth,
}


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        config = _build_config(args, tuple(argv))
        _DISPATCH[args.subcommand](config)
    except ValueError as exc:
        print(f"beamtap: error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - defensive
        print(f"beamtap: internal error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
