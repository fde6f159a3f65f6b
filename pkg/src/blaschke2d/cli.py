"""``blaschke2d`` command line."""

from __future__ import annotations

import argparse
import os
import sys

from .config import COMMANDS, parse_config, with_overrides
from .errors import BlaschkeError, ValidationError
from .report import error_payload, exit_code, run_command, to_csv, to_json

OVERRIDES = {"n_max": int, "depth": int, "samples": int, "strategy": str}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="blaschke2d", description=__doc__)
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--config", help="JSON run configuration (optional for reproduce-paper)")
    ap.add_argument("--seed", type=int, help="overrides params.seed")
    ap.add_argument("--out", help="output file; a directory for reproduce-paper")
    ap.add_argument("--format", choices=("json", "csv"), help="report format (default json)")
    for name, kind in OVERRIDES.items():
        ap.add_argument("--" + name.replace("_", "-"), dest=name, type=kind, help=f"overrides params.{name}")
    return ap


def _emit(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.config is not None:
            with open(args.config) as fh:
                text = fh.read()
        elif args.command == "reproduce-paper":
            text = "{}"
        else:
            raise ValidationError("--config is required for this command", "Config")
        cfg = parse_config(text, args.command)
        cfg = with_overrides(cfg, args.out, args.format, seed=args.seed,
                             **{name: getattr(args, name) for name in OVERRIDES})
    except BlaschkeError as exc:
        sys.stderr.write(to_json({"command": args.command, "status": "error", "error": error_payload(exc)}))
        return exc.exit_code
    except OSError as exc:
        sys.stderr.write(f"blaschke2d: {exc}\n")
        return 2

    report = run_command(cfg)
    if cfg.command == "reproduce-paper":
        out_dir = cfg.output_path
        text = to_json(report)
        if out_dir is not None:
            _emit(text, os.path.join(out_dir, "report.json"))
        else:
            sys.stdout.write(text)
    else:
        text = to_csv(report) if cfg.output_format == "csv" else to_json(report)
        _emit(text, cfg.output_path)
    if report["status"] != "ok":
        sys.stderr.write(f"blaschke2d: {report['error']['code']}: {report['error']['message']}\n")
    return exit_code(report)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
