"""Repeated-trial experiment harness with deterministic seeding.

Every random draw in an experiment descends from one master seed through
``np.random.SeedSequence`` spawn keys, so results are reproducible bit for
bit regardless of worker count and stable under changes to the trial count:

* environment stream, spawn key ``(0, trial)``: dataset labels, then labeler
  accuracies, then (unless oracle accuracies are requested) assessment item
  labels and assessment responses;
* collection stream, spawn key ``(1, trial, method_code, cell_code)``: the
  select/elicit draws of one collection run.  Method codes are mv=0, wmv=1,
  sv=2, gtx=3; the cell code is ``round(tau * 10000)`` for threshold cells
  and the fixed label count for count cells (0 for uncertainty sampling).

A trial therefore shares one simulated world across every method and sweep
cell, which makes per-trial paired comparisons between methods meaningful,
and no stream is ever split across processes.
"""

from __future__ import annotations

import functools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .aggregators import Method
from .assessment import oracle_estimates, run_assessment
from .io import (
    ExperimentConfig,
    write_aggregates_csv,
    write_csv,
    write_event_log,
)
from .metrics import TrialSummary, mean_se, summarize, trial_report
from .simulation import SimConfig, draw_assessment, init_simulation
from .strategies import (
    ThresholdConfig,
    run_confidence_threshold,
    run_uncertainty_sampling,
)

__all__ = [
    "Cell",
    "SweepResult",
    "UncertaintyResult",
    "build_trial_env",
    "collection_rng",
    "environment_rng",
    "run_pareto",
    "run_threshold_experiment",
    "run_uncertainty_experiment",
    "threshold_cells",
    "write_results",
]

_ENV_DOMAIN = 0
_COLLECT_DOMAIN = 1

METHOD_CODE = {Method.MV: 0, Method.WMV: 1, Method.SV: 2, Method.GTX: 3}


def environment_rng(master_seed: int, trial: int) -> np.random.Generator:
    seq = np.random.SeedSequence(master_seed, spawn_key=(_ENV_DOMAIN, trial))
    return np.random.default_rng(seq)


def collection_rng(
    master_seed: int, trial: int, method: Method, cell_code: int
) -> np.random.Generator:
    seq = np.random.SeedSequence(
        master_seed,
        spawn_key=(_COLLECT_DOMAIN, trial, METHOD_CODE[Method(method)], cell_code),
    )
    return np.random.default_rng(seq)


def build_trial_env(config: ExperimentConfig, master_seed: int, trial: int):
    """Simulate one trial's world: dataset, labelers, accuracy estimates."""
    rng = environment_rng(master_seed, trial)
    sim = SimConfig(
        n_examples=config.n_examples,
        n_labelers=config.n_labelers,
        accuracy_low=config.accuracy_low,
        accuracy_high=config.accuracy_high,
    )
    dataset, labelers = init_simulation(sim, rng)
    if config.oracle_accuracy:
        estimates = oracle_estimates(labelers)
    else:
        assessment = draw_assessment(config.assessment_size, rng)
        estimates = run_assessment(labelers, assessment, rng)
    return dataset, labelers, estimates


@dataclass(frozen=True)
class Cell:
    """One sweep cell: a method plus its stopping parameter."""

    method: Method
    tau: float | None = None
    fixed_count: int | None = None

    def __post_init__(self):
        if (self.tau is None) == (self.fixed_count is None):
            raise ValueError("a cell needs exactly one of tau or fixed_count")

    @property
    def code(self) -> int:
        if self.tau is not None:
            return round(self.tau * 10000)
        return self.fixed_count

    @property
    def params(self) -> dict:
        if self.tau is not None:
            return {"tau": self.tau}
        return {"count": self.fixed_count}

    @property
    def kind(self) -> str:
        return "tau" if self.tau is not None else "count"

    @property
    def value(self):
        return self.tau if self.tau is not None else self.fixed_count


def threshold_cells(config: ExperimentConfig) -> tuple[Cell, ...]:
    """Sweep grid: MV/WMV take fixed counts, SV/GTX take the tau grid."""
    cells = []
    for method in config.methods:
        if method in (Method.MV, Method.WMV):
            for c in config.fixed_counts:
                cells.append(Cell(method=method, fixed_count=c))
        else:
            for t in config.tau_grid:
                cells.append(Cell(method=method, tau=t))
    return tuple(cells)


def _run_cell(config, dataset, labelers, estimates, cell, master_seed, trial):
    rng = collection_rng(master_seed, trial, cell.method, cell.code)
    stopping = ThresholdConfig(
        tau=cell.tau, kappa=config.kappa, fixed_count=cell.fixed_count
    )
    outcome = run_confidence_threshold(
        dataset,
        labelers,
        estimates,
        stopping,
        config.budget,
        cell.method,
        rng,
        record_events=False,
    )
    return trial_report(
        outcome, dataset.true_labels, "threshold", params=cell.params, seed=trial
    )


def _threshold_trial(trial, config, master_seed, cells):
    dataset, labelers, estimates = build_trial_env(config, master_seed, trial)
    return [
        _run_cell(config, dataset, labelers, estimates, cell, master_seed, trial)
        for cell in cells
    ]


def _uncertainty_trial(trial, config, master_seed):
    dataset, labelers, estimates = build_trial_env(config, master_seed, trial)
    reports = []
    dynamics = []
    for method in config.methods:
        rng = collection_rng(master_seed, trial, method, 0)
        outcome = run_uncertainty_sampling(
            dataset,
            labelers,
            estimates,
            config.budget,
            method,
            rng,
            record_events=False,
            record_dynamics=True,
        )
        reports.append(
            trial_report(outcome, dataset.true_labels, "uncertainty", seed=trial)
        )
        dynamics.append(outcome.dynamics)
    return reports, dynamics


def _map_trials(worker, trials: int, workers: int, progress=None):
    results = []
    if workers <= 1:
        for trial in range(trials):
            results.append(worker(trial))
            if progress is not None:
                progress(f"trial {trial + 1}/{trials}")
        return results
    chunk = max(1, trials // (workers * 4))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for i, res in enumerate(pool.map(worker, range(trials), chunksize=chunk)):
            results.append(res)
            if progress is not None:
                progress(f"trial {i + 1}/{trials}")
    return results


def _pick_best(cells, summaries, methods):
    """Lowest mean error per method; ties prefer fewer labels, then the
    smaller cell code so the choice never depends on float noise order."""
    best: dict[Method, int] = {}
    for method in methods:
        candidates = [i for i, c in enumerate(cells) if c.method == method]
        if not candidates:
            continue

        def rank(i):
            s = summaries[i]
            err = s.error_rate_mean if s.error_rate_mean is not None else float("inf")
            avg = s.avg_k_mean if s.avg_k_mean is not None else float("inf")
            return (err, avg, cells[i].code)

        best[method] = min(candidates, key=rank)
    return best


@dataclass
class SweepResult:
    strategy: str
    config: ExperimentConfig
    master_seed: int
    cells: tuple
    reports: tuple  # reports[i] is the per-trial tuple for cells[i]
    summaries: tuple
    best: dict
    exemplars: dict  # method -> (CollectionOutcome of trial 0 at best cell, truth)


def _threshold_exemplars(config, master_seed, cells, best):
    dataset, labelers, estimates = build_trial_env(config, master_seed, 0)
    exemplars = {}
    for method, idx in best.items():
        cell = cells[idx]
        rng = collection_rng(master_seed, 0, method, cell.code)
        stopping = ThresholdConfig(
            tau=cell.tau, kappa=config.kappa, fixed_count=cell.fixed_count
        )
        outcome = run_confidence_threshold(
            dataset,
            labelers,
            estimates,
            stopping,
            config.budget,
            method,
            rng,
            record_events=True,
        )
        exemplars[method] = (outcome, dataset.true_labels)
    return exemplars


def run_threshold_experiment(
    config: ExperimentConfig,
    *,
    master_seed: int | None = None,
    trials: int | None = None,
    workers: int = 1,
    progress=None,
) -> SweepResult:
    """Sweep every (method, stopping parameter) cell over repeated trials."""
    master_seed = config.seed if master_seed is None else master_seed
    trials = config.trials if trials is None else trials
    cells = threshold_cells(config)
    worker = functools.partial(
        _threshold_trial, config=config, master_seed=master_seed, cells=cells
    )
    per_trial = _map_trials(worker, trials, workers, progress)
    reports = tuple(
        tuple(per_trial[t][i] for t in range(trials)) for i in range(len(cells))
    )
    summaries = tuple(summarize(r) for r in reports)
    best = _pick_best(cells, summaries, config.methods)
    exemplars = _threshold_exemplars(config, master_seed, cells, best)
    return SweepResult(
        strategy="threshold",
        config=config,
        master_seed=master_seed,
        cells=cells,
        reports=reports,
        summaries=summaries,
        best=best,
        exemplars=exemplars,
    )


def run_pareto(
    config: ExperimentConfig,
    *,
    master_seed: int | None = None,
    trials: int | None = None,
    workers: int = 1,
    progress=None,
) -> SweepResult:
    """Full cost/error sweep; identical to the threshold experiment, kept as
    its own entry point because the deliverable is the curve, not the table."""
    return run_threshold_experiment(
        config, master_seed=master_seed, trials=trials, workers=workers, progress=progress
    )


@dataclass
class UncertaintyResult:
    strategy: str
    config: ExperimentConfig
    master_seed: int
    reports: dict  # method -> per-trial tuple of TrialReport
    summaries: dict  # method -> TrialSummary
    curves: dict  # method -> [(labels, err_mean, err_se, mae_mean, mae_se)]
    exemplars: dict


def _uncertainty_curves(dynamics_per_trial):
    """Average the per-label error trajectories across trials, keyed by the
    running label count (identical across trials once coverage completes)."""
    by_step: dict[int, list] = {}
    for trajectory in dynamics_per_trial:
        for spent, err, mae in trajectory:
            by_step.setdefault(spent, []).append((err, mae))
    curve = []
    for spent in sorted(by_step):
        errs = [e for e, _ in by_step[spent]]
        maes = [m for _, m in by_step[spent]]
        err_mean, err_se = mean_se(errs)
        mae_mean, mae_se = mean_se(maes)
        curve.append((spent, err_mean, err_se, mae_mean, mae_se))
    return curve


def run_uncertainty_experiment(
    config: ExperimentConfig,
    *,
    master_seed: int | None = None,
    trials: int | None = None,
    workers: int = 1,
    progress=None,
) -> UncertaintyResult:
    """Run uncertainty sampling for each method over repeated trials."""
    master_seed = config.seed if master_seed is None else master_seed
    trials = config.trials if trials is None else trials
    worker = functools.partial(
        _uncertainty_trial, config=config, master_seed=master_seed
    )
    per_trial = _map_trials(worker, trials, workers, progress)
    reports = {}
    curves = {}
    for mi, method in enumerate(config.methods):
        reports[method] = tuple(per_trial[t][0][mi] for t in range(trials))
        curves[method] = _uncertainty_curves(
            [per_trial[t][1][mi] for t in range(trials)]
        )
    summaries = {m: summarize(r) for m, r in reports.items()}

    dataset, labelers, estimates = build_trial_env(config, master_seed, 0)
    exemplars = {}
    for method in config.methods:
        rng = collection_rng(master_seed, 0, method, 0)
        outcome = run_uncertainty_sampling(
            dataset,
            labelers,
            estimates,
            config.budget,
            method,
            rng,
            record_events=True,
        )
        exemplars[method] = (outcome, dataset.true_labels)
    return UncertaintyResult(
        strategy="uncertainty",
        config=config,
        master_seed=master_seed,
        reports=reports,
        summaries=summaries,
        curves=curves,
        exemplars=exemplars,
    )


# ---------------------------------------------------------------------------
# result files


_SUMMARY_HEADER = [
    "method",
    "cell_type",
    "cell",
    "trials",
    "avg_k",
    "avg_k_se",
    "n_labeled",
    "n_labeled_se",
    "error_rate",
    "error_rate_se",
    "mae",
    "mae_se",
    "best",
]

_BEST_HEADER = [
    "method",
    "avg_k",
    "best_tau",
    "n_labeled",
    "error_rate",
    "mae",
    "avg_k_se",
    "n_labeled_se",
    "error_rate_se",
    "mae_se",
    "trials",
]

_CURVE_HEADER = [
    "method",
    "cell_type",
    "cell",
    "avg_k",
    "avg_k_se",
    "error_rate",
    "error_rate_se",
    "mae",
    "mae_se",
]


def _summary_row(cell_type, cell_value, s: TrialSummary, best: bool):
    return [
        str(s.method),
        cell_type,
        cell_value,
        s.trials,
        s.avg_k_mean,
        s.avg_k_se,
        s.n_labeled_mean,
        s.n_labeled_se,
        s.error_rate_mean,
        s.error_rate_se,
        s.mae_mean,
        s.mae_se,
        int(best),
    ]


def _write_run_json(out_dir: Path, result) -> None:
    import json

    payload = {
        "strategy": result.strategy,
        "master_seed": result.master_seed,
        "config": result.config.as_dict(),
    }
    (out_dir / "run.json").write_text(
        json.dumps(payload, sort_keys=True, separators=(",", ":")) + "\n",
        encoding="utf-8",
    )


def _write_exemplars(out_dir: Path, exemplars: dict, methods) -> None:
    """Trial-0 aggregates (one CSV, method column) and one event log per
    method; a combined log would repeat (example, labeler) pairs across
    methods and break the label-record schema."""
    ordered = [m for m in methods if m in exemplars]
    outcomes = [exemplars[m][0] for m in ordered]
    truth = exemplars[ordered[0]][1] if ordered else None
    write_aggregates_csv(out_dir / "aggregates.csv", outcomes, truth)
    for method, outcome in zip(ordered, outcomes):
        write_event_log(
            out_dir / f"events_{method}.jsonl", outcome.event_log or [], method
        )


def write_results(result, out_dir) -> None:
    """Write an experiment's result files into ``out_dir``.

    Threshold/pareto sweeps produce summary.csv (every cell), best_cells.csv
    (one row per method at its best cell), curve.csv (cost/error points),
    aggregates.csv and events_<method>.jsonl (trial 0 at each method's best
    cell), and run.json.  Uncertainty runs produce summary.csv, dynamics.csv,
    the same exemplar files, and run.json.  Every file is byte-deterministic
    for a given config and seed; worker count is deliberately not recorded.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if isinstance(result, SweepResult):
        best_idx = set(result.best.values())
        write_csv(
            out_dir / "summary.csv",
            _SUMMARY_HEADER,
            (
                _summary_row(c.kind, c.value, s, i in best_idx)
                for i, (c, s) in enumerate(zip(result.cells, result.summaries))
            ),
        )

        def best_rows():
            for method in result.config.methods:
                if method not in result.best:
                    continue
                i = result.best[method]
                c, s = result.cells[i], result.summaries[i]
                yield [
                    str(method),
                    s.avg_k_mean,
                    c.value,
                    s.n_labeled_mean,
                    s.error_rate_mean,
                    s.mae_mean,
                    s.avg_k_se,
                    s.n_labeled_se,
                    s.error_rate_se,
                    s.mae_se,
                    s.trials,
                ]

        write_csv(out_dir / "best_cells.csv", _BEST_HEADER, best_rows())

        def curve_rows():
            order = sorted(
                range(len(result.cells)),
                key=lambda i: (
                    str(result.cells[i].method),
                    result.summaries[i].avg_k_mean
                    if result.summaries[i].avg_k_mean is not None
                    else float("inf"),
                    result.cells[i].code,
                ),
            )
            for i in order:
                c, s = result.cells[i], result.summaries[i]
                yield [
                    str(c.method),
                    c.kind,
                    c.value,
                    s.avg_k_mean,
                    s.avg_k_se,
                    s.error_rate_mean,
                    s.error_rate_se,
                    s.mae_mean,
                    s.mae_se,
                ]

        write_csv(out_dir / "curve.csv", _CURVE_HEADER, curve_rows())
        _write_exemplars(out_dir, result.exemplars, result.config.methods)
        _write_run_json(out_dir, result)
        return

    if isinstance(result, UncertaintyResult):
        write_csv(
            out_dir / "summary.csv",
            _SUMMARY_HEADER,
            (
                _summary_row("budget", result.config.budget, result.summaries[m], False)
                for m in result.config.methods
            ),
        )

        def dyn_rows():
            for method in result.config.methods:
                for labels, err, err_se, mae, mae_se in result.curves[method]:
                    yield [str(method), labels, err, err_se, mae, mae_se]

        write_csv(
            out_dir / "dynamics.csv",
            ["method", "labels", "error_rate", "error_rate_se", "mae", "mae_se"],
            dyn_rows(),
        )
        _write_exemplars(out_dir, result.exemplars, result.config.methods)
        _write_run_json(out_dir, result)
        return

    raise TypeError(f"cannot write results of type {type(result).__name__}")
