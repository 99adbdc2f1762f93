"""Command-line entry points.

Exit codes: 0 on success, 1 on configuration or usage errors, 2 on runtime
or data errors (unreadable files, malformed records, incomplete
assessments).  Progress goes to stderr so stdout stays clean for piping;
results land only in files.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import ConfigError, GtxError
from .experiments import (
    run_pareto,
    run_threshold_experiment,
    run_uncertainty_experiment,
    write_results,
)
from .io import load_config, read_assessment_set, read_label_records, write_csv


def _add_experiment_args(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", required=True, help="JSON experiment config")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--seed", type=int, default=None, help="override the master seed")
    sub.add_argument("--trials", type=int, default=None, help="override the trial count")
    sub.add_argument(
        "--workers", type=int, default=1, help="worker processes (default 1)"
    )
    sub.add_argument(
        "--oracle-accuracy",
        action="store_true",
        help="use true labeler accuracies instead of assessment estimates",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gtx",
        description="Label collection experiments: impute truth from noisy "
        "crowd labels under a budget.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser(
        "threshold",
        help="sweep stopping parameters for the confidence-threshold strategy",
    )
    _add_experiment_args(p)

    p = subs.add_parser(
        "uncertainty",
        help="run uncertainty sampling for each method under one budget",
    )
    _add_experiment_args(p)

    p = subs.add_parser(
        "pareto",
        help="full cost/error sweep (same cells as threshold, curve-focused)",
    )
    _add_experiment_args(p)

    p = subs.add_parser(
        "assess",
        help="estimate labeler accuracies from recorded labels and expert truth",
    )
    p.add_argument("--labels", required=True, help="JSONL label records to score")
    p.add_argument("--truth", required=True, help="JSONL expert labels (gold)")
    p.add_argument("--out", required=True, help="output directory")
    return parser


def _load_experiment_config(args):
    config = load_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError(f"--seed must be >= 0, got {args.seed}")
        config = config.replace(seed=args.seed)
    if args.trials is not None:
        if args.trials < 1:
            raise ConfigError(f"--trials must be >= 1, got {args.trials}")
        config = config.replace(trials=args.trials)
    if args.oracle_accuracy:
        config = config.replace(oracle_accuracy=True)
    if args.workers < 1:
        raise ConfigError(f"--workers must be >= 1, got {args.workers}")
    return config


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr)


_RUNNERS = {
    "threshold": run_threshold_experiment,
    "uncertainty": run_uncertainty_experiment,
    "pareto": run_pareto,
}


def _cmd_experiment(args) -> int:
    config = _load_experiment_config(args)
    if config.strategy != ("uncertainty" if args.command == "uncertainty" else "threshold"):
        raise ConfigError(
            f"config has strategy {config.strategy!r} but the "
            f"{args.command!r} command was requested"
        )
    runner = _RUNNERS[args.command]
    result = runner(config, workers=args.workers, progress=_progress)
    write_results(result, args.out)
    print(f"wrote results to {args.out}", file=sys.stderr)
    return 0


def _cmd_assess(args) -> int:
    from .assessment import estimate_accuracy

    truth = read_assessment_set(args.truth)
    records, _ = read_label_records(args.labels)
    truth_ids = set(truth.example_ids)
    by_labeler: dict = {}
    for rec in records:
        if rec.example_id in truth_ids:
            by_labeler.setdefault(rec.labeler_id, {})[rec.example_id] = rec.value
    if not by_labeler:
        raise ValueError("no label records overlap the truth set")
    estimates = [
        estimate_accuracy(labeler_id, responses, truth)
        for labeler_id, responses in by_labeler.items()
    ]
    estimates.sort(key=lambda e: str(e.labeler_id))

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_csv(
        out_dir / "estimates.csv",
        ["labeler_id", "n_assessed", "accuracy"],
        ([e.labeler_id, e.n_assessed, e.accuracy] for e in estimates),
    )
    payload = {
        "command": "assess",
        "n_labelers": len(estimates),
        "n_items": len(truth),
    }
    (out_dir / "run.json").write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )
    print(f"wrote estimates for {len(estimates)} labelers to {args.out}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors; usage problems are config
        # problems here (exit 1), while 2 is reserved for runtime failures.
        return 1 if exc.code not in (0, None) else 0
    try:
        if args.command == "assess":
            return _cmd_assess(args)
        return _cmd_experiment(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (GtxError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
