"""Command line entry point.

Four subcommands: simulate (one spec), sweep (walk classes x seeds),
equivalence (oracle cross-checks), enumerate (coin-shift census).  Exit
codes: 0 success, 2 validation failure, 3 coin-shift constraint violation,
4 numerical check failure.  All validation happens before any file is
written, and identical inputs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConstraintViolationError, NumericalCheckError, ValidationError
from .experiments import (
    WALK_CLASSES,
    ExperimentSpec,
    run_enumerate,
    run_equivalence,
    run_simulate,
    run_sweep,
)

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_CONSTRAINT = 3
EXIT_NUMERICAL = 4


def _load_config(path: str) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ValidationError(f"cannot read config {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"config {path} must hold a JSON object")
    return doc


def _parse_seeds(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad seed list {text!r}: {exc}") from exc


def _cmd_simulate(args: argparse.Namespace) -> int:
    doc = _load_config(args.config) if args.config else {}
    spec = ExperimentSpec.from_json_dict(doc)
    if args.t_max is not None:
        spec.t_max = args.t_max
        spec.window = None
    if args.seeds is not None:
        seeds = _parse_seeds(args.seeds)
        if len(seeds) != 1:
            raise ValidationError("simulate takes exactly one seed")
        spec.seed = seeds[0]
    summary = run_simulate(spec, args.out)
    print(f"simulate: wrote {args.out}/summary.json (t_max={spec.t_max})")
    if "scaling_fit" in summary:
        print(f"simulate: scaling verdict {summary['scaling_fit']['verdict']}")
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    doc = _load_config(args.config) if args.config else {}
    template_doc = doc.get("template", {})
    template = ExperimentSpec.from_json_dict(template_doc)
    classes = doc.get("classes", list(WALK_CLASSES))
    seeds = doc.get("seeds", list(range(20)))
    if args.t_max is not None:
        template.t_max = args.t_max
        template.window = None
    if args.seeds is not None:
        seeds = _parse_seeds(args.seeds)
    report = run_sweep(template, classes, seeds, args.out, workers=args.workers)
    for walk_class in classes:
        entry = report["classes"][walk_class]
        print(
            f"sweep: {walk_class}: ratio={entry['variance_ratio']:.3f}"
            f" ({entry['ratio_verdict']}), fit={entry['fit_verdict']}"
        )
    return EXIT_OK


def _cmd_equivalence(args: argparse.Namespace) -> int:
    t_max = args.t_max if args.t_max is not None else 100
    report = run_equivalence(args.out, t_max=t_max)
    print(
        "equivalence: constraint residual"
        f" {report['constraint_residual_max']:.3e},"
        f" reconstruction diff {report['alpha_reconstruction_diff_max']:.3e}"
    )
    return EXIT_OK


def _cmd_enumerate(args: argparse.Namespace) -> int:
    seeds = _parse_seeds(args.seeds) if args.seeds is not None else []
    t_max = args.t_max if args.t_max is not None else 30
    report = run_enumerate(
        args.out, cycle_size=args.cycle_size, seeds=seeds, t_max=t_max
    )
    counts = report["gc_enumeration"]
    print(
        f"enumerate: {counts['count']} valid coin shifts on"
        f" {counts['host_vertices']} vertices"
        f" (expected {counts['expected_count']})"
    )
    if report["distinct_walks"]["seeds"]:
        print(
            f"enumerate: {report['distinct_walks']['n_classes']} distinct walks"
            f" across {len(report['distinct_walks']['seeds'])} seeds"
        )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="memwalk",
        description="Coined quantum walks with memory on line graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument("--config", help="JSON config path")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--seeds", help="comma-separated seed list")
        p.add_argument("--t-max", type=int, dest="t_max", help="number of steps")
        p.add_argument(
            "--workers", type=int, default=1, help="parallel workers for sweeps"
        )

    p = sub.add_parser("simulate", help="evolve one walk and write its statistics")
    common(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="compare walk classes across seeds")
    common(p)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("equivalence", help="run the oracle cross-check pipeline")
    common(p)
    p.set_defaults(func=_cmd_equivalence)

    p = sub.add_parser("enumerate", help="count valid coin shifts and walk classes")
    common(p)
    p.add_argument(
        "--cycle-size", type=int, default=3, dest="cycle_size",
        help="base cycle size for the enumeration host",
    )
    p.set_defaults(func=_cmd_enumerate)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConstraintViolationError as exc:
        print(f"error: coin-shift constraint violated: {exc}", file=sys.stderr)
        return EXIT_CONSTRAINT
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericalCheckError as exc:
        print(f"error: numerical check failed: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
