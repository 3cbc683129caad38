"""Command-line interface: run, sweep, verify, report.

Exit codes: 0 success, 1 failed verification or failed record, 2 malformed
configuration, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .acceptance import DEFAULT_SEED, run_all
from .core import CutoffError
from .oracle import ConvergenceError
from .quadrature import QuadratureError
from .scenario import (
    ConfigError,
    build_record,
    load_scenario,
    record_csv_row,
    run_sweep,
    write_csv,
    write_json,
)


def _emit(payload, out: str | None, fmt: str, sweep_parameter: str = "") -> None:
    if fmt == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        if out in (None, "-"):
            sys.stdout.write(text)
        else:
            write_json(payload, out)
    else:
        records = payload if isinstance(payload, list) else [payload]
        rows = [
            record_csv_row(
                r, r.get("sweep_parameter", sweep_parameter), r.get("sweep_value", "")
            )
            for r in records
        ]
        if out in (None, "-"):
            from .scenario import CSV_COLUMNS

            sys.stdout.write(",".join(CSV_COLUMNS) + "\n")
            for row in rows:
                sys.stdout.write(",".join(str(row.get(c, "")) for c in CSV_COLUMNS) + "\n")
        else:
            write_csv(rows, out)


def _cmd_run(args) -> int:
    scenario = load_scenario(args.config)
    if args.seed is not None:
        scenario = replace(scenario, seed=args.seed)
    record = build_record(scenario)
    _emit(record, args.out, args.format)
    return 0 if record["status"] == "ok" else 1


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.config)
    if scenario.sweep is None:
        raise ConfigError(f"scenario {scenario.name!r} has no sweep block")
    base_dir = Path(args.config).parent if Path(args.config).exists() else None
    records = run_sweep(scenario, jobs=args.jobs, base_dir=base_dir)
    _emit(records, args.out, args.format, scenario.sweep.parameter)
    return 0 if all(r["status"] == "ok" for r in records) else 1


def _cmd_verify(args) -> int:
    numbers = None
    if args.criteria:
        numbers = {int(v) for v in args.criteria.split(",")}
    results = run_all(seed=args.seed, numbers=numbers)
    for res in results:
        tag = "PASS" if res.passed else "FAIL"
        print(f"{tag} [{res.number:2d}] {res.name}: {res.detail}")
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 0 if not failed else 1


def _cmd_report(args) -> int:
    from .report import render_record_figure, render_sweep_figures

    scenario = load_scenario(args.config)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    stem = scenario.name
    if scenario.sweep is not None:
        base_dir = Path(args.config).parent if Path(args.config).exists() else None
        records = run_sweep(scenario, jobs=args.jobs, base_dir=base_dir)
        rows = [
            record_csv_row(r, scenario.sweep.parameter, r.get("sweep_value", ""))
            for r in records
        ]
        write_csv(rows, outdir / f"{stem}.csv")
        write_json(records, outdir / f"{stem}.json")
        figures = render_sweep_figures(records, scenario.sweep.parameter, outdir, stem)
        status_ok = all(r["status"] == "ok" for r in records)
    else:
        record = build_record(scenario)
        write_csv([record_csv_row(record)], outdir / f"{stem}.csv")
        write_json(record, outdir / f"{stem}.json")
        figures = render_record_figure(record, outdir, stem)
        status_ok = record["status"] == "ok"
    print(f"wrote {outdir / (stem + '.csv')}")
    for fig in figures:
        print(f"wrote {fig}")
    return 0 if status_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sqlandauer",
        description=(
            "Entropy production and generalized heat budgets for a two-level "
            "detector in a squeezed thermal field"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one scenario and emit a record")
    run_p.add_argument("--config", required=True, help="config path or bundled name")
    run_p.add_argument("--out", default=None, help="output path ('-' for stdout)")
    run_p.add_argument("--format", choices=("json", "csv"), default="json")
    run_p.add_argument("--seed", type=int, default=None)
    run_p.add_argument("--jobs", type=int, default=1)
    run_p.set_defaults(func=_cmd_run)

    sweep_p = sub.add_parser("sweep", help="replay a scenario over a parameter list")
    sweep_p.add_argument("--config", required=True)
    sweep_p.add_argument("--out", default=None)
    sweep_p.add_argument("--format", choices=("json", "csv"), default="csv")
    sweep_p.add_argument("--seed", type=int, default=None)
    sweep_p.add_argument("--jobs", type=int, default=1)
    sweep_p.set_defaults(func=_cmd_sweep)

    verify_p = sub.add_parser("verify", help="run the full verification suite")
    verify_p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    verify_p.add_argument(
        "--criteria", default=None, help="comma-separated criterion numbers"
    )
    verify_p.set_defaults(func=_cmd_verify)

    report_p = sub.add_parser(
        "report", help="run a scenario or sweep and render figures next to the data"
    )
    report_p.add_argument("--config", required=True)
    report_p.add_argument("--out", required=True, help="output directory")
    report_p.add_argument("--jobs", type=int, default=1)
    report_p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (QuadratureError, ConvergenceError, CutoffError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
