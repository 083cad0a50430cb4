"""Command-line front end: loss-table validation, rate sweeps, and plots.

Commands emit CSV (or JSON via --format) whose '#' header comments record
the full effective configuration, so every output file is reproducible from
its own header.  Exit codes: 0 success, 1 validation-threshold failure,
2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

import numpy as np

from .config import (
    PRESET_NAMES,
    REFERENCE_LOSS_PERCENT,
    ConfigError,
    Occupancy,
    SetupConfig,
    Variant,
    config_to_dict,
    load_config,
    preset,
)
from .loss import loss_percent
from .montecarlo import McSettings, mc_optimal_m
from .rates import epsilon_m, epsilon_rate, improvement_ratio, lossless_rate, lossy_rate, optimal_m
from .svgplot import PlotError, Series, render_line_plot

EXIT_OK = 0
EXIT_THRESHOLD = 1
EXIT_USAGE = 2

PERCENT_TOLERANCE = 0.05  # percentage points against the reference column
ANALYTIC_M_MAX = 300
UNITS_NOTE = "rate_*_per_bin is per time bin (dimensionless); rate_*_hz = per_bin / t_bin"


# --- config resolution and table output --------------------------------------

def _resolve_config(args, default_preset: str = "one-loop-default") -> SetupConfig:
    if getattr(args, "config", None):
        config = load_config(args.config)
    else:
        config = preset(getattr(args, "preset", None) or default_preset)
    p_override = getattr(args, "p", None)
    if p_override is not None:
        config = replace(config, p=p_override)
    return config


def _config_meta(config: SetupConfig) -> str:
    return json.dumps(config_to_dict(config), separators=(",", ":"))


def _format_cell(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _write_text(args, text: str) -> None:
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _emit_table(args, meta: dict[str, str], columns: list[str], rows: list[list]) -> None:
    fmt = getattr(args, "format", "csv")
    if fmt == "json":
        doc = {
            "meta": meta,
            "columns": columns,
            "rows": [
                [bool(v) if isinstance(v, (bool, np.bool_))
                 else int(v) if isinstance(v, (int, np.integer))
                 else float(v) if isinstance(v, (float, np.floating))
                 else str(v)
                 for v in row]
                for row in rows
            ],
        }
        text = json.dumps(doc, indent=2) + "\n"
    else:
        lines = [f"# {key}: {value}" for key, value in meta.items()]
        lines.append(",".join(columns))
        lines.extend(",".join(_format_cell(v) for v in row) for row in rows)
        text = "\n".join(lines) + "\n"
    _write_text(args, text)


# --- losses validate ----------------------------------------------------------

def _loss_rows(config: SetupConfig) -> list[tuple[str, float]]:
    table = config.loss_table
    rows = [(f"loop_pass[{length}]", table.loop_pass[length])
            for length in config.loop_lengths]
    rows += [
        ("fbg_transmission", table.fbg_transmission),
        ("fbg_reflection", table.fbg_reflection),
        ("fiber_per_timestep", table.fiber_per_timestep),
        ("circulator_pass", table.circulator_pass),
        (f"misc[{len(config.loop_lengths)} loop"
         f"{'s' if len(config.loop_lengths) > 1 else ''}]", table.misc),
    ]
    return rows


def cmd_losses_validate(args) -> int:
    config = _resolve_config(args)
    reference = {label: pct for label, _, pct in REFERENCE_LOSS_PERCENT}
    check_against_reference = (
        getattr(args, "config", None) is None
        and (getattr(args, "preset", None) or "one-loop-default") != "lossless"
    )
    lines = [f"# config: {_config_meta(config)}"]
    worst = 0.0
    for label, db in _loss_rows(config):
        derived = loss_percent(db)
        line = f"{label:<22} {db:.3f} dB / {derived:.3g} %"
        if check_against_reference and label in reference:
            deviation = abs(derived - reference[label])
            worst = max(worst, deviation)
            verdict = "ok" if deviation <= PERCENT_TOLERANCE else "FAIL"
            line += f"  (reference {reference[label]:g} %, {verdict})"
        lines.append(line)
    passed = worst <= PERCENT_TOLERANCE
    if check_against_reference:
        lines.append(
            f"worst deviation {worst:.4f} points "
            f"({'within' if passed else 'exceeds'} {PERCENT_TOLERANCE} tolerance)"
        )
    _write_text(args, "\n".join(lines) + "\n")
    return EXIT_OK if passed else EXIT_THRESHOLD


# --- sweep commands -----------------------------------------------------------

def _require_fixed(config: SetupConfig) -> SetupConfig:
    if config.variant is not Variant.FIXED:
        raise ConfigError("this command evaluates the FIXED variant; "
                          "config supplied a partial variant")
    return config


def cmd_rate_sweep(args) -> int:
    config = _require_fixed(_resolve_config(args))
    if args.m_max < 1:
        raise ConfigError(f"--m-max must be >= 1, got {args.m_max}")
    columns = ["n", "m", "rate_lossless_per_bin", "rate_lossy_per_bin",
               "rate_lossless_hz", "rate_lossy_hz", "no_multiplexing_per_bin"]
    rows: list[list] = []
    for n in args.n:
        baseline = config.p ** n
        for m in range(1, args.m_max + 1):
            lossless = lossless_rate(config.p, m, n, t_bin=config.t_bin)
            lossy = lossy_rate(replace(config, n=n, m=m))
            rows.append([n, m, lossless.rate_per_bin, lossy.rate_per_bin,
                         lossless.rate_hz, lossy.rate_hz, baseline])
    meta = {
        "command": "rate-sweep",
        "config": _config_meta(config),
        "n": " ".join(str(v) for v in args.n),
        "m_max": str(args.m_max),
        "units": UNITS_NOTE,
    }
    _emit_table(args, meta, columns, rows)
    return EXIT_OK


def cmd_max_rate(args) -> int:
    config = _require_fixed(_resolve_config(args))
    if args.m_max < 1:
        raise ConfigError(f"--m-max must be >= 1, got {args.m_max}")
    columns = ["n", "m_star", "max_rate_lossless", "max_rate_lossy", "no_multiplexing"]
    if args.epsilon is not None:
        columns += ["epsilon_m", "rate_epsilon_per_bin"]
    rows: list[list] = []
    for n in args.n:
        cfg = replace(config, n=n)
        _, best_lossless = optimal_m(cfg, args.m_max, "lossless")
        m_star, best_lossy = optimal_m(cfg, args.m_max, "lossy")
        row: list = [n, m_star, best_lossless.rate_per_bin,
                     best_lossy.rate_per_bin, config.p ** n]
        if args.epsilon is not None:
            row += [epsilon_m(config.p, n, args.epsilon),
                    epsilon_rate(config.p, n, args.epsilon, t_bin=config.t_bin).rate_per_bin]
        rows.append(row)
    meta = {
        "command": "max-rate",
        "config": _config_meta(config),
        "m_max": str(args.m_max),
        "m_star": "argmax of the lossy objective; max_rate_lossless is at its own optimum",
        "units": UNITS_NOTE,
    }
    if args.epsilon is not None:
        meta["epsilon"] = repr(args.epsilon)
    _emit_table(args, meta, columns, rows)
    return EXIT_OK


def cmd_ratio_sweep(args) -> int:
    config = _require_fixed(_resolve_config(args, default_preset="three-loop-default"))
    if args.m_max < 1:
        raise ConfigError(f"--m-max must be >= 1, got {args.m_max}")
    if args.p_grid is not None and args.p_values is not None:
        raise ConfigError("--p-grid and --p are mutually exclusive")
    if args.p_values is not None:
        p_values = [float(v) for v in args.p_values]
    else:
        lo, hi, count = args.p_grid if args.p_grid is not None else (1e-3, 0.3, 13)
        count = int(count)
        if count < 1 or lo <= 0 or hi <= 0 or hi < lo:
            raise ConfigError(f"--p-grid needs 0 < MIN <= MAX and COUNT >= 1, "
                              f"got {lo} {hi} {count}")
        p_values = [float(v) for v in np.geomspace(lo, hi, count)]
    if any(not 0.0 < p <= 1.0 for p in p_values):
        raise ConfigError("ratio sweep needs every p in (0, 1]; p=0 has no baseline")

    columns = ["n", "p", "ratio"]
    rows: list[list] = []
    for n in args.n:
        for p in p_values:
            ratio = improvement_ratio(replace(config, n=n, p=p), args.m_max)
            rows.append([n, p, ratio])
    meta = {
        "command": "ratio-sweep",
        "config": _config_meta(config),
        "m_max": str(args.m_max),
        "units": "ratio = optimal lossy rate / p**n (dimensionless)",
    }
    _emit_table(args, meta, columns, rows)
    return EXIT_OK


def cmd_mc_partial(args) -> int:
    base = _resolve_config(args)
    variant = Variant(args.variant)
    occupancy = Occupancy(args.occupancy) if args.occupancy else base.occupancy
    if args.m_max < 1:
        raise ConfigError(f"--m-max must be >= 1, got {args.m_max}")
    try:
        settings = McSettings(samples=args.samples, seed=args.seed,
                              worker_count=args.workers)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    columns = ["n", "m_star", "rate_partial", "stderr", "rate_fixed", "occupancy_model"]
    rows: list[list] = []
    for n in args.n:
        cfg = replace(base, n=n, variant=variant, occupancy=occupancy)
        m_star, estimate = mc_optimal_m(cfg, settings, args.m_max)
        rate = estimate.lossy.rate_per_bin
        stderr = estimate.lossy.rate_stderr_per_bin(cfg.batches)
        _, fixed_best = optimal_m(replace(base, n=n, variant=Variant.FIXED),
                                  ANALYTIC_M_MAX, "lossy")
        rows.append([n, m_star, rate, stderr, fixed_best.rate_per_bin,
                     occupancy.value])
    meta = {
        "command": "mc-partial",
        "config": _config_meta(replace(base, variant=variant, occupancy=occupancy)),
        "variant": variant.value,
        "m_max": str(args.m_max),
        "samples": str(args.samples),
        "seed": str(args.seed),
        "fixed_side": f"analytic lossy optimum over m in [1, {ANALYTIC_M_MAX}]",
        "units": ("rate_partial/rate_fixed per time bin; stderr is the standard "
                  "error of rate_partial on the same scale"),
    }
    _emit_table(args, meta, columns, rows)
    return EXIT_OK


# --- plot ---------------------------------------------------------------------

def _read_csv_table(path: str) -> tuple[dict[str, str], list[str], list[dict]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw_lines = fh.read().splitlines()
    except OSError as exc:
        raise PlotError(f"cannot read {path}: {exc}") from exc
    meta: dict[str, str] = {}
    body: list[str] = []
    for line in raw_lines:
        if line.startswith("#"):
            stripped = line[1:].strip()
            if ":" in stripped:
                key, _, value = stripped.partition(":")
                meta[key.strip()] = value.strip()
        elif line.strip():
            body.append(line)
    if len(body) < 2:
        raise PlotError(f"{path} has no data rows")
    columns = body[0].split(",")
    rows = []
    for line in body[1:]:
        cells = line.split(",")
        if len(cells) != len(columns):
            raise PlotError(f"{path}: row width {len(cells)} != header width {len(columns)}")
        row: dict = {}
        for key, cell in zip(columns, cells):
            try:
                row[key] = float(cell)
            except ValueError:
                row[key] = cell
        rows.append(row)
    return meta, columns, rows


def _group_values(rows: list[dict], key: str) -> list:
    seen: list = []
    for row in rows:
        if row[key] not in seen:
            seen.append(row[key])
    return seen


def _series_for_schema(columns: list[str], rows: list[dict]) -> tuple[list[Series], dict]:
    cols = set(columns)
    if {"n", "m", "rate_lossless_per_bin", "rate_lossy_per_bin"} <= cols:
        series = []
        for n in _group_values(rows, "n"):
            sub = [r for r in rows if r["n"] == n]
            xs = tuple(r["m"] for r in sub)
            series.append(Series(f"n={n:g} lossless", xs,
                                 tuple(r["rate_lossless_per_bin"] for r in sub)))
            series.append(Series(f"n={n:g} lossy", xs,
                                 tuple(r["rate_lossy_per_bin"] for r in sub), dashed=True))
            if "no_multiplexing_per_bin" in cols:
                series.append(Series(f"n={n:g} no-mux", xs,
                                     tuple(r["no_multiplexing_per_bin"] for r in sub),
                                     dashed=True))
        return series, {"x_label": "time bins per batch m",
                        "y_label": "rate per time bin", "x_log": False, "y_log": True}
    if {"n", "m_star", "max_rate_lossless", "max_rate_lossy"} <= cols:
        xs = tuple(r["n"] for r in rows)
        series = [
            Series("max rate lossless", xs, tuple(r["max_rate_lossless"] for r in rows)),
            Series("max rate lossy", xs, tuple(r["max_rate_lossy"] for r in rows),
                   dashed=True),
            Series("no multiplexing", xs, tuple(r["no_multiplexing"] for r in rows),
                   dashed=True),
        ]
        if "rate_epsilon_per_bin" in cols:
            series.append(Series("guaranteed-success rate", xs,
                                 tuple(r["rate_epsilon_per_bin"] for r in rows)))
        return series, {"x_label": "photon number n",
                        "y_label": "rate per time bin", "x_log": False, "y_log": True}
    if {"n", "p", "ratio"} <= cols:
        series = []
        for n in _group_values(rows, "n"):
            sub = [r for r in rows if r["n"] == n]
            series.append(Series(f"n={n:g}", tuple(r["p"] for r in sub),
                                 tuple(r["ratio"] for r in sub)))
        return series, {"x_label": "photon generation probability p",
                        "y_label": "rate ratio vs no multiplexing",
                        "x_log": True, "y_log": True}
    if {"n", "m_star", "rate_partial", "rate_fixed"} <= cols:
        xs = tuple(r["n"] for r in rows)
        series = [
            Series("partial (sampled)", xs, tuple(r["rate_partial"] for r in rows)),
            Series("fixed (analytic)", xs, tuple(r["rate_fixed"] for r in rows),
                   dashed=True),
        ]
        return series, {"x_label": "photon number n",
                        "y_label": "rate per time bin", "x_log": False, "y_log": True}
    raise PlotError(f"unrecognized CSV schema: columns {columns}")


def cmd_plot(args) -> int:
    meta, columns, rows = _read_csv_table(args.csv_path)
    series, layout = _series_for_schema(columns, rows)
    title = args.title if args.title is not None else meta.get("command", "")
    svg = render_line_plot(series, title=title, **layout)
    out = args.out
    if not out:
        stem = args.csv_path[:-4] if args.csv_path.endswith(".csv") else args.csv_path
        out = stem + ".svg"
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(svg)
    return EXIT_OK


# --- parser -------------------------------------------------------------------

def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--preset", choices=PRESET_NAMES,
                       help="named default setup (p=0.1, 10 ns bins)")
    group.add_argument("--config", metavar="JSON",
                       help="path to a JSON config document")


def _add_output_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", metavar="PATH", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="table output format (default: csv)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ftmux",
        description="Rate analysis for frequency-time multiplexed single-photon sources",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    losses = sub.add_parser("losses", help="loss-table commands")
    losses_sub = losses.add_subparsers(dest="losses_command", required=True)
    validate = losses_sub.add_parser(
        "validate", help="print each component's dB and derived loss percent")
    _add_config_flags(validate)
    validate.add_argument("--out", metavar="PATH", help="report file (default: stdout)")
    validate.set_defaults(func=cmd_losses_validate)

    rate_sweep = sub.add_parser(
        "rate-sweep", help="lossless and lossy rates over m for each n")
    _add_config_flags(rate_sweep)
    rate_sweep.add_argument("--n", nargs="+", type=int, default=[4, 6, 8])
    rate_sweep.add_argument("--m-max", type=int, default=300)
    rate_sweep.add_argument("--p", type=float, help="override heralding probability")
    _add_output_flags(rate_sweep)
    rate_sweep.set_defaults(func=cmd_rate_sweep)

    max_rate = sub.add_parser(
        "max-rate", help="optimal batch size and maximum rates per n")
    _add_config_flags(max_rate)
    max_rate.add_argument("--n", nargs="+", type=int, default=list(range(1, 11)))
    max_rate.add_argument("--m-max", type=int, default=300)
    max_rate.add_argument("--p", type=float, help="override heralding probability")
    max_rate.add_argument("--epsilon", type=float,
                          help="also report the guaranteed-success batch size and rate")
    _add_output_flags(max_rate)
    max_rate.set_defaults(func=cmd_max_rate)

    ratio = sub.add_parser(
        "ratio-sweep", help="improvement ratio over p**n across a p grid")
    _add_config_flags(ratio)
    ratio.add_argument("--n", nargs="+", type=int, default=[4, 6, 8])
    ratio.add_argument("--m-max", type=int, default=300)
    ratio.add_argument("--p-grid", nargs=3, type=float, metavar=("MIN", "MAX", "COUNT"),
                       help="log-spaced p grid (default: 1e-3 0.3 13)")
    ratio.add_argument("--p", dest="p_values", nargs="+", type=float,
                       help="explicit p values instead of a grid")
    _add_output_flags(ratio)
    ratio.set_defaults(func=cmd_ratio_sweep)

    mc = sub.add_parser(
        "mc-partial", help="Monte Carlo optimal rate for the partial variant")
    _add_config_flags(mc)
    mc.add_argument("--n", nargs="+", type=int, default=[4])
    mc.add_argument("--m-max", type=int, default=12,
                    help="Monte Carlo m-scan bound (default: 12)")
    mc.add_argument("--p", type=float, help="override heralding probability")
    mc.add_argument("--samples", type=int, default=1_000_000)
    mc.add_argument("--seed", type=int, default=0)
    mc.add_argument("--workers", type=int, default=1,
                    help="thread count; never affects results")
    mc.add_argument("--variant", choices=("partial", "fixed"), default="partial")
    mc.add_argument("--occupancy", choices=("unlimited", "single"),
                    help="memory model (default: from config)")
    _add_output_flags(mc)
    mc.set_defaults(func=cmd_mc_partial)

    plot = sub.add_parser("plot", help="render a sweep CSV as a deterministic SVG")
    plot.add_argument("csv_path", metavar="CSV")
    plot.add_argument("--out", metavar="SVG",
                      help="output path (default: CSV path with .svg)")
    plot.add_argument("--title", help="plot title (default: the CSV's command)")
    plot.set_defaults(func=cmd_plot)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PlotError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
