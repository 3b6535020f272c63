"""Command-line front end.

    onticlab born-test --model qubit-df --samples 100000 --seed 7
    onticlab --experiment dimension-audit --format json --out audit.json
    onticlab --config run.cfg --seed 3

Settings come from (lowest to highest precedence) built-in defaults, the
ONTICLAB_SEED environment variable, a ``key=value`` config file and flags.
Exit status: 0 all checks passed, 1 some check failed, 2 bad configuration.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .experiments import EXPERIMENTS, FORMATS, MODELS, ConfigError, ExperimentConfig, default_seed, run_experiment
from .report import emit_report

CONFIG_KEYS = {
    "experiment": str,
    "model": str,
    "N": int,
    "samples": int,
    "seed": int,
    "out": str,
    "format": str,
}


def read_config_file(path: str | Path) -> dict:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    values = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_") if key != "N" else key
        if key == "output_path":
            key = "out"
        if key not in CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = CONFIG_KEYS[key](value)
        except ValueError:
            raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from None
    return values


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="onticlab", description="Run ontological-model verification batteries.")
    p.add_argument("experiment_pos", nargs="?", choices=EXPERIMENTS, metavar="EXPERIMENT",
                   help=f"one of: {', '.join(EXPERIMENTS)}")
    p.add_argument("--experiment", choices=EXPERIMENTS)
    p.add_argument("--model", choices=MODELS, help="restrict to one model (default: all compatible)")
    p.add_argument("--N", type=int, help="Hilbert space dimension for the Bell models (default 3)")
    p.add_argument("--samples", type=int, help="Monte Carlo samples per check")
    p.add_argument("--seed", type=int, help="master seed (default: $ONTICLAB_SEED or 0)")
    p.add_argument("--config", help="key=value config file; flags override it")
    p.add_argument("--out", help="report path (default: stdout)")
    p.add_argument("--format", choices=FORMATS)
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    values = {"seed": default_seed(), "format": "csv"}
    if args.config:
        values.update(read_config_file(args.config))
    flags = {
        "experiment": args.experiment or args.experiment_pos,
        "model": args.model,
        "N": args.N,
        "samples": args.samples,
        "seed": args.seed,
        "out": args.out,
        "format": args.format,
    }
    values.update({k: v for k, v in flags.items() if v is not None})
    if "experiment" not in values:
        raise ConfigError("no experiment given")
    return ExperimentConfig(
        experiment=values["experiment"],
        model=values.get("model"),
        N=values.get("N"),
        samples=values.get("samples"),
        seed=values["seed"],
        output_path=values.get("out"),
        format=values["format"],
    )


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args).validated()
    except (ConfigError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"onticlab: error: {exc}", file=sys.stderr)
        return 2

    result = run_experiment(cfg)
    data = emit_report(result.rows, cfg.format, extra=result.extra)
    if cfg.output_path:
        try:
            Path(cfg.output_path).write_bytes(data)
        except OSError as exc:
            print(f"onticlab: cannot write report: {exc}", file=sys.stderr)
            return 2
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()

    if not result.passed:
        failed = sum(not r.passed for r in result.rows)
        where = cfg.output_path or "<stdout>"
        print(f"onticlab: {failed} of {len(result.rows)} checks failed; report: {where}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
