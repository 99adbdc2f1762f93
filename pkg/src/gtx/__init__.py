"""Ground-truth inference from noisy crowd labels.

The package aggregates conflicting binary labels into a single answer per
example (majority vote, weighted vote, share vote, or a naive-Bayes
posterior over known labeler accuracies), estimates labeler accuracy from
an expert-graded assessment, and runs budgeted collection strategies that
decide when an example has enough labels.  A simulator and experiment
harness reproduce the cost/error trade-offs of each method end to end.
"""

from .aggregators import (
    AggregateLabel,
    Method,
    aggregate,
    aggregate_gtx,
    aggregate_mv,
    aggregate_sv,
    aggregate_wmv,
)
from .assessment import (
    AssessmentSet,
    estimate_accuracy,
    oracle_estimates,
    run_assessment,
)
from .errors import (
    AlreadyLabeled,
    ConfigError,
    DuplicateLabeler,
    EmptyAssessment,
    EmptyLabelSet,
    GtxError,
    IncompleteAssessment,
    LabelersExhausted,
    MissingEstimate,
)
from .experiments import (
    SweepResult,
    UncertaintyResult,
    run_pareto,
    run_threshold_experiment,
    run_uncertainty_experiment,
    write_results,
)
from .io import (
    ExperimentConfig,
    config_from_dict,
    load_config,
    read_assessment_set,
    read_label_records,
    write_event_log,
    write_label_records,
)
from .metrics import (
    TrialReport,
    TrialSummary,
    error_rate,
    mean_absolute_error,
    summarize,
    trial_report,
)
from .model import (
    ClassPrior,
    LabelerEstimate,
    LabelRecord,
    PosteriorResult,
    hard_label,
    log_likelihood,
    log_odds,
    posterior,
    uncertainty,
)
from .simulation import (
    SimConfig,
    SimDataset,
    SimLabeler,
    draw_assessment,
    elicit_label,
    init_simulation,
    select_labeler,
)
from .strategies import (
    BudgetLedger,
    CollectionOutcome,
    LabelEvent,
    ThresholdConfig,
    run_confidence_threshold,
    run_uncertainty_sampling,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateLabel",
    "AlreadyLabeled",
    "AssessmentSet",
    "BudgetLedger",
    "ClassPrior",
    "CollectionOutcome",
    "ConfigError",
    "DuplicateLabeler",
    "EmptyAssessment",
    "EmptyLabelSet",
    "ExperimentConfig",
    "GtxError",
    "IncompleteAssessment",
    "LabelEvent",
    "LabelRecord",
    "LabelersExhausted",
    "LabelerEstimate",
    "Method",
    "MissingEstimate",
    "PosteriorResult",
    "SimConfig",
    "SimDataset",
    "SimLabeler",
    "SweepResult",
    "ThresholdConfig",
    "TrialReport",
    "TrialSummary",
    "UncertaintyResult",
    "aggregate",
    "aggregate_gtx",
    "aggregate_mv",
    "aggregate_sv",
    "aggregate_wmv",
    "config_from_dict",
    "draw_assessment",
    "elicit_label",
    "error_rate",
    "estimate_accuracy",
    "hard_label",
    "init_simulation",
    "load_config",
    "log_likelihood",
    "log_odds",
    "mean_absolute_error",
    "oracle_estimates",
    "posterior",
    "read_assessment_set",
    "read_label_records",
    "run_assessment",
    "run_confidence_threshold",
    "run_pareto",
    "run_threshold_experiment",
    "run_uncertainty_experiment",
    "run_uncertainty_sampling",
    "select_labeler",
    "summarize",
    "trial_report",
    "uncertainty",
    "write_event_log",
    "write_label_records",
    "write_results",
    "__version__",
]
