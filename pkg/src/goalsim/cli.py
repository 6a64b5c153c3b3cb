"""Command-line front end: run campaigns, sweeps, and config validation.

Outputs are CSV (RFC-4180 style: comma separator, ``.`` decimal, LF line
endings) with floats printed to 9 significant digits; the CSV is the single
source of truth for plotting. Exit codes: 0 success, 1 runtime failure,
2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

from .config import ConfigError, load_config
from .montecarlo import CampaignStats, SweepRow, SweepSpec, run_campaign, run_sweep

_STATS_COLUMNS = [
    "mode", "trials", "seed", "effectiveness",
    "effectiveness_ci_low", "effectiveness_ci_high",
    "mean_device_energy_j", "mean_device_energy_goal_met_j",
    "mean_mec_energy_j", "delay_outage_rate", "inference_outage_rate",
    "best_effort_rate", "cooperative_rate", "energy_cap_rate",
    "branch_ambiguous_rate",
]


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".9g")
    return str(value)


def _stats_cells(stats: CampaignStats, seed: int) -> list:
    return [
        stats.mode, stats.trials, seed, stats.effectiveness,
        stats.effectiveness_ci95[0], stats.effectiveness_ci95[1],
        stats.mean_device_energy, stats.mean_device_energy_goal_met,
        stats.mean_mec_energy, stats.delay_outage_rate,
        stats.inference_outage_rate, stats.best_effort_rate,
        stats.cooperative_rate, stats.energy_cap_rate,
        stats.branch_ambiguous_rate,
    ]


def _write_csv(rows: list[list], header: list[str], out: Optional[str]) -> None:
    def emit(fh):
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(cell) for cell in row])

    if out:
        with open(out, "w", newline="") as fh:
            emit(fh)
    else:
        emit(sys.stdout)


def _print_summary(stats: CampaignStats, seed: int, stream) -> None:
    lo, hi = stats.effectiveness_ci95
    print(f"mode={stats.mode} trials={stats.trials} seed={seed}", file=stream)
    print(f"  goal effectiveness      {stats.effectiveness:.4f} "
          f"(95% CI {lo:.4f}..{hi:.4f})", file=stream)
    print(f"  delay / inference outage {stats.delay_outage_rate:.4f} / "
          f"{stats.inference_outage_rate:.4f}", file=stream)
    print(f"  best-effort / cooperative {stats.best_effort_rate:.4f} / "
          f"{stats.cooperative_rate:.4f}", file=stream)
    print(f"  device energy (all / goal-met)  {stats.mean_device_energy:.6g} / "
          f"{stats.mean_device_energy_goal_met:.6g} J", file=stream)
    print(f"  MEC energy per request  {stats.mean_mec_energy:.6g} J", file=stream)


def _load(args) -> "ScenarioConfig":  # noqa: F821
    config = load_config(args.config)
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "trials", None) is not None:
        overrides["trials"] = args.trials
    if getattr(args, "mode", None):
        overrides["mode"] = args.mode
    return replace(config, **overrides) if overrides else config


def cmd_run(args) -> int:
    config = _load(args)
    stats = run_campaign(config, workers=args.workers)
    _write_csv([_stats_cells(stats, config.seed)], _STATS_COLUMNS, args.out)
    _print_summary(stats, config.seed, sys.stdout if args.out else sys.stderr)
    return 0


def _sweep_spec_from_args(args) -> SweepSpec:
    if args.sweep_file:
        doc = json.loads(Path(args.sweep_file).read_text())
        return SweepSpec(parameter=doc["parameter"],
                         values=tuple(float(v) for v in doc["values"]),
                         modes=tuple(doc.get("modes", ["standalone"])))
    values = tuple(float(v) for v in args.sweep_values.split(","))
    modes = tuple((args.mode or "standalone").split(","))
    return SweepSpec(parameter=args.sweep_param, values=values, modes=modes)


def cmd_sweep(args) -> int:
    if not args.sweep_file and not (args.sweep_param and args.sweep_values):
        print("error: sweep requires --sweep-param and --sweep-values "
              "or --sweep-file", file=sys.stderr)
        return 2
    config = _load_base_for_sweep(args)
    try:
        spec = _sweep_spec_from_args(args)
    except (KeyError, ValueError) as exc:
        print(f"error: bad sweep spec: {exc}", file=sys.stderr)
        return 2
    try:
        rows = run_sweep(config, spec, workers=args.workers, crn=not args.no_crn)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    rows_sorted: list[SweepRow] = sorted(rows, key=lambda r: (r.value, r.mode))
    cells = [[r.parameter, r.value] + _stats_cells(r.stats, config.seed)
             for r in rows_sorted]
    _write_csv(cells, ["parameter", "value"] + _STATS_COLUMNS, args.out)
    if args.out:
        print(f"wrote {len(cells)} rows to {args.out}")
    return 0


def _load_base_for_sweep(args):
    config = load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    return replace(config, **overrides) if overrides else config


def cmd_validate(args) -> int:
    load_config(args.config)
    print("ok")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalsim",
        description="Monte Carlo simulator of goal-oriented edge inference "
                    "over a MEC-assisted wireless network.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_mode=True):
        p.add_argument("--config", required=True, help="scenario config (JSON)")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--seed", type=int, help="override the config seed")
        p.add_argument("--trials", type=int, help="override the trial count")
        if with_mode:
            p.add_argument("--mode", help="standalone | ensemble "
                                          "(comma list allowed for sweep)")
        p.add_argument("--workers", type=int, default=1,
                       help="trial worker count (results are identical)")

    p_run = sub.add_parser("run", help="run one campaign")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter")
    common(p_sweep)
    p_sweep.add_argument("--sweep-param",
                         help="dotted config path, e.g. radio.ber_target")
    p_sweep.add_argument("--sweep-values", help="comma list of values")
    p_sweep.add_argument("--sweep-file",
                         help="JSON sweep spec {parameter, values, modes}")
    p_sweep.add_argument("--no-crn", action="store_true",
                         help="decorrelate sweep points instead of reusing "
                              "the base seed (common random numbers)")
    p_sweep.set_defaults(func=cmd_sweep)

    p_val = sub.add_parser("validate", help="check a config file")
    p_val.add_argument("--config", required=True)
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        print("config invalid:", file=sys.stderr)
        for v in exc.violations:
            print(f"  {v}", file=sys.stderr)
        return 2
    except Exception as exc:  # pragma: no cover - crash guard
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
