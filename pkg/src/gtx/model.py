"""Posterior inference for binary labels under the one-coin annotator model.

Each labeler answers correctly with a fixed probability (their accuracy),
independent of the true class and of every other labeler.  Given the set of
votes collected for one example and per-labeler accuracy estimates, Bayes'
rule yields a posterior over the two classes.  All vote products are carried
in log space, with the running maximum subtracted before exponentiation, so
arbitrarily long vote lists neither underflow nor overflow.

Accuracy estimates are clamped into [ACCURACY_FLOOR, ACCURACY_CEIL] at
construction: an estimate of exactly 0 or 1 would put a zero inside a log and
make a single labeler's vote infinitely strong.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .errors import DuplicateLabeler, EmptyLabelSet, MissingEstimate

__all__ = [
    "ACCURACY_CEIL",
    "ACCURACY_FLOOR",
    "ClassPrior",
    "LabelRecord",
    "LabelerEstimate",
    "PosteriorResult",
    "as_label",
    "hard_label",
    "log_likelihood",
    "log_odds",
    "posterior",
    "uncertainty",
]

ACCURACY_FLOOR = 0.01
ACCURACY_CEIL = 0.99


def as_label(value) -> int:
    """Validate a binary label, returning it as a plain int (0 or 1)."""
    if value is False or value is True:
        return int(value)
    if value == 0 or value == 1:
        return int(value)
    raise ValueError(f"label value must be 0 or 1, got {value!r}")


@dataclass(frozen=True)
class LabelRecord:
    """One vote: ``labeler_id`` said ``value`` about ``example_id``."""

    example_id: Hashable
    labeler_id: Hashable
    value: int

    def __post_init__(self):
        object.__setattr__(self, "value", as_label(self.value))


@dataclass(frozen=True)
class LabelerEstimate:
    """Estimated accuracy of one labeler, clamped away from 0 and 1.

    ``n_assessed`` records how many assessment items produced the estimate
    (None when the estimate did not come from an assessment run).
    """

    labeler_id: Hashable
    accuracy: float
    n_assessed: int | None = None

    def __post_init__(self):
        a = float(self.accuracy)
        if math.isnan(a):
            raise ValueError("accuracy must be a probability, got nan")
        a = min(max(a, ACCURACY_FLOOR), ACCURACY_CEIL)
        object.__setattr__(self, "accuracy", a)

    @property
    def log_weight(self) -> float:
        """log(accuracy), the per-vote log-likelihood contribution when agreeing."""
        return math.log(self.accuracy)

    @property
    def log_counterweight(self) -> float:
        """log(1 - accuracy), the contribution when disagreeing."""
        return math.log1p(-self.accuracy)


@dataclass(frozen=True)
class ClassPrior:
    """Prior probability of each class.  Degenerate priors (0/1) are legal."""

    p0: float
    p1: float

    def __post_init__(self):
        if self.p0 < 0.0 or self.p1 < 0.0:
            raise ValueError("prior probabilities must be non-negative")
        if abs(self.p0 + self.p1 - 1.0) > 1e-9:
            raise ValueError("prior must sum to 1")

    @staticmethod
    def uniform() -> "ClassPrior":
        return ClassPrior(0.5, 0.5)


UNIFORM_PRIOR = ClassPrior.uniform()


@dataclass(frozen=True)
class PosteriorResult:
    """Normalized posterior over the two classes for one example."""

    p0: float
    p1: float


def log_odds(p: float) -> float:
    """log(p / (1-p)), computed as log(p) - log1p(-p).

    Using the same log/log1p pipeline as LabelerEstimate keeps boundary
    comparisons exact: a single vote from a labeler with accuracy == tau
    produces a posterior log-odds bit-identical to log_odds(tau).
    """
    if not 0.0 < p < 1.0:
        raise ValueError(f"log_odds requires p in (0, 1), got {p}")
    return math.log(p) - math.log1p(-p)


def _check_labels(labels: Iterable[LabelRecord]) -> list[LabelRecord]:
    out = list(labels)
    seen = set()
    for rec in out:
        if rec.labeler_id in seen:
            raise DuplicateLabeler(
                f"labeler {rec.labeler_id!r} voted twice on example {rec.example_id!r}"
            )
        seen.add(rec.labeler_id)
    return out


def log_likelihood(
    labels: Iterable[LabelRecord],
    estimates: Mapping[Hashable, LabelerEstimate],
) -> tuple[float, float]:
    """Log-likelihood of the observed votes under each class.

    Returns ``(log P(votes | class 0), log P(votes | class 1))``.  A vote for
    class y contributes log(accuracy) to class y and log(1 - accuracy) to the
    other class.  An empty vote set has likelihood 1 under both classes.
    """
    ll0 = 0.0
    ll1 = 0.0
    for rec in _check_labels(labels):
        est = estimates.get(rec.labeler_id)
        if est is None:
            raise MissingEstimate(f"no accuracy estimate for labeler {rec.labeler_id!r}")
        lw = est.log_weight
        lc = est.log_counterweight
        if rec.value == 1:
            ll1 += lw
            ll0 += lc
        else:
            ll0 += lw
            ll1 += lc
    return ll0, ll1


def posterior(
    labels: Iterable[LabelRecord],
    estimates: Mapping[Hashable, LabelerEstimate],
    prior: ClassPrior = UNIFORM_PRIOR,
) -> PosteriorResult:
    """Posterior over the two classes given votes and accuracy estimates.

    With no votes the posterior equals the prior.  A degenerate prior forces
    its class regardless of the votes (the vote likelihood cannot resurrect a
    class with zero prior mass).
    """
    ll0, ll1 = log_likelihood(labels, estimates)
    a0 = -math.inf if prior.p0 == 0.0 else math.log(prior.p0) + ll0
    a1 = -math.inf if prior.p1 == 0.0 else math.log(prior.p1) + ll1
    m = a0 if a0 >= a1 else a1
    e0 = math.exp(a0 - m)
    e1 = math.exp(a1 - m)
    z = e0 + e1
    return PosteriorResult(e0 / z, e1 / z)


def hard_label(post: PosteriorResult) -> tuple[int, float]:
    """Most probable class and its probability.  Exact ties go to class 0."""
    if post.p0 >= post.p1:
        return 0, post.p0
    return 1, post.p1


def uncertainty(post: PosteriorResult) -> float:
    """1 - confidence; 0 for a certain posterior, 0.5 for a coin flip."""
    return 1.0 - max(post.p0, post.p1)
