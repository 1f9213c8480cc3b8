"""Command-line entry point.

Exit codes: 0 success, 1 stage failure during a run, 2 config error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .aggregate import aggregate
from .config import ConfigError, PredictorExportConfig, RunConfig, validate_config
from .pipeline import export_from_run, run_pipeline
from .presets import PRESETS, apply_preset


def _cmd_validate(args) -> int:
    cfg = validate_config(args.config)
    print(f"config OK: {len(cfg.sources)} source(s), "
          f"extractor {'on' if cfg.extractor.enabled else 'off'}, "
          f"measures {','.join(cfg.measures) or '(none)'}")
    for note in cfg.defaults_applied:
        print(f"  default: {note}")
    return 0


def _cmd_run(args) -> int:
    cfg = validate_config(args.config)
    if args.preset:
        cfg = apply_preset(cfg, args.preset)
    out_dir = args.out or (args.preset or "run") + ".out"
    report = run_pipeline(cfg, out_dir)
    errors = report["stage_errors"]
    print(f"run complete: {out_dir}/report.json ({errors} stage error(s))")
    return 1 if errors else 0


def _cmd_export(args) -> int:
    report_path = os.path.join(args.run_dir, "report.json")
    pe = PredictorExportConfig()
    if os.path.exists(report_path):
        with open(report_path) as f:
            echo = json.load(f).get("config_echo", {}).get("predictor_export", {})
        pe = PredictorExportConfig(
            enabled=True,
            window=echo.get("window", pe.window),
            stride=echo.get("stride", pe.stride),
            split=echo.get("split", pe.split),
            shuffle_seed=echo.get("shuffle_seed", pe.shuffle_seed),
        )
    cfg = RunConfig(sources=[], extractor=None, predictor_export=pe)  # type: ignore[arg-type]
    path = export_from_run(args.run_dir, args.label, args.stage, cfg)
    print(f"dataset written: {path}")
    return 0


def _cmd_aggregate(args) -> int:
    tables, text = aggregate(args.run_dirs, args.with_predictions)
    print(text)
    if args.json_out:
        with open(args.json_out, "w") as f:
            json.dump(tables, f, indent=2)
            f.write("\n")
    return 0


def _cmd_report(args) -> int:
    _, text = aggregate([args.run_dir])
    print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="rngbench",
        description="Generate, post-process, and measure random bit-streams.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="validate a config file")
    v.add_argument("config")
    v.set_defaults(fn=_cmd_validate)

    r = sub.add_parser("run", help="execute the pipeline for a config")
    r.add_argument("config")
    r.add_argument("--preset", choices=PRESETS)
    r.add_argument("--out", help="output directory (default <preset>.out)")
    r.set_defaults(fn=_cmd_run)

    e = sub.add_parser("export", help="export a predictor dataset from a run")
    e.add_argument("run_dir")
    e.add_argument("label")
    e.add_argument("stage")
    e.set_defaults(fn=_cmd_export)

    a = sub.add_parser("aggregate", help="combine run reports into tables")
    a.add_argument("run_dirs", nargs="+")
    a.add_argument("--with-predictions", help="directory of prediction report JSONs")
    a.add_argument("--json-out", help="also write tables as JSON")
    a.set_defaults(fn=_cmd_aggregate)

    rep = sub.add_parser("report", help="render the tables of one run")
    rep.add_argument("run_dir")
    rep.set_defaults(fn=_cmd_report)

    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except (FileNotFoundError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
