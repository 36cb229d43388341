"""Command line experiment runner.

``rmtlab <experiment> --config <path> [--out DIR] [--seed U64] [--samples K]
[--threads N] [--N n]`` runs one named experiment, writing its CSV artifacts
and a summary.json into the output directory.  ``rmtlab list`` prints the
experiment catalog.  Exit codes: 0 success, 2 criterion failure, 1 error.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys
import time

import numpy as np

from . import __version__, config as cfgmod, experiments
from .errors import ConfigError, RmtLabError

__all__ = ["main", "run_from_args", "SUMMARY_SCHEMA"]

# Shape of summary.json, shipped for consumers that want to validate.
SUMMARY_SCHEMA = {
    "type": "object",
    "required": ["experiment", "config_hash", "config", "criteria", "pass",
                 "wall_time_s", "versions", "files"],
    "properties": {
        "experiment": {"type": "string"},
        "config_hash": {"type": "string", "pattern": "^[0-9a-f]{64}$"},
        "config": {"type": "object"},
        "criteria": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "value", "threshold", "direction", "pass"],
                "properties": {
                    "name": {"type": "string"},
                    "value": {"type": "number"},
                    "threshold": {"type": "number"},
                    "direction": {"type": "string"},
                    "pass": {"type": "boolean"},
                },
            },
        },
        "pass": {"type": "boolean"},
        "wall_time_s": {"type": "number"},
        "versions": {"type": "object"},
        "files": {"type": "array", "items": {"type": "string"}},
    },
}


def _write_csv(path: str, header: str, rows) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(experiments._fmt(x) for x in row) + "\n")


def _apply_overrides(data: dict, args) -> dict:
    data = {k: (dict(v) if isinstance(v, dict) else v) for k, v in data.items()}
    if args.seed is not None:
        data.setdefault("mc", {})["seed"] = args.seed
    if args.samples is not None:
        data.setdefault("mc", {})["samples"] = args.samples
    if args.threads is not None:
        data.setdefault("mc", {})["workers"] = args.threads
    if args.N is not None:
        data.setdefault("ensemble", {})["N"] = args.N
    if args.out is not None:
        data["output_dir"] = args.out
    elif "output_dir" not in data and os.environ.get("RMTLAB_OUT"):
        data["output_dir"] = os.environ["RMTLAB_OUT"]
    return data


def run_from_args(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="rmtlab",
        description="Experiment runner for the Wigner-matrix laboratory.")
    parser.add_argument("experiment",
                        help="experiment name, or 'list' for the catalog")
    parser.add_argument("--config", help="configuration file (TOML subset)")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--seed", type=int, help="override mc.seed")
    parser.add_argument("--samples", type=int, help="override mc.samples")
    parser.add_argument("--threads", type=int, help="override mc.workers")
    parser.add_argument("--N", type=int, help="override ensemble.N")
    args = parser.parse_args(argv)

    if args.experiment == "list":
        for name, desc, schema in experiments.list_experiments():
            print(f"{name}: {desc}")
            print(f"    output {schema}")
        return 0

    if args.config is None:
        print("error: --config is required", file=sys.stderr)
        return 1
    try:
        with open(args.config) as fh:
            text = fh.read()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1

    try:
        data, locations = cfgmod.parse_document(text)
        data = _apply_overrides(data, args)
        if data.get("experiment") not in (None, args.experiment):
            print(f"error: config is for experiment {data.get('experiment')!r}, "
                  f"command line asked for {args.experiment!r}", file=sys.stderr)
            return 1
        data["experiment"] = args.experiment
        cfg = experiments.validate_config(data, locations)
    except ConfigError as exc:
        for problem in exc.problems:
            print(f"config error: {problem}", file=sys.stderr)
        return 1

    outdir = cfg.output_dir
    started = time.time()
    try:
        os.makedirs(outdir, exist_ok=True)
        files, criteria = experiments.run_experiment(cfg)
        for fname, (header, rows) in files.items():
            _write_csv(os.path.join(outdir, fname), header, rows)
    except RmtLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 1

    summary = {
        "experiment": cfg.experiment,
        "config_hash": cfgmod.config_hash(cfg.raw),
        "config": cfg.raw,
        "criteria": [
            {"name": c.name, "value": c.value, "threshold": c.threshold,
             "direction": c.direction, "pass": bool(c.passed)}
            for c in criteria
        ],
        "pass": bool(all(c.passed for c in criteria)),
        "wall_time_s": time.time() - started,
        "versions": {"rmtlab": __version__, "numpy": np.__version__,
                     "python": platform.python_version()},
        "files": sorted(files),
    }
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")

    for c in criteria:
        status = "PASS" if c.passed else "FAIL"
        print(f"[{status}] {cfg.experiment}/{c.name}: "
              f"{c.value:.6g} {c.direction} {c.threshold:.6g}")
    return 0 if summary["pass"] else 2


def main() -> None:
    sys.exit(run_from_args())


if __name__ == "__main__":
    main()
