"""Labeler accuracy estimation from an expertly-labeled assessment set.

The maximum-likelihood estimate of a one-coin labeler's accuracy is simply
the fraction of assessment items they answered correctly.  Assessment labels
are assumed to come from experts and are charged outside any collection
budget; nothing in this module touches a budget ledger.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .errors import EmptyAssessment, IncompleteAssessment
from .model import LabelerEstimate, as_label

__all__ = [
    "AssessmentSet",
    "estimate_accuracy",
    "oracle_estimates",
    "run_assessment",
]


@dataclass(frozen=True)
class AssessmentSet:
    """Expertly-labeled items used only for estimating labeler accuracy.

    Item ids live in their own namespace; they never collide with dataset
    example ids because estimates and collections are built separately.
    """

    example_ids: tuple
    true_labels: tuple

    def __post_init__(self):
        if len(self.example_ids) == 0:
            raise EmptyAssessment("assessment set has no items")
        if len(self.example_ids) != len(self.true_labels):
            raise ValueError("example_ids and true_labels differ in length")
        if len(set(self.example_ids)) != len(self.example_ids):
            raise ValueError("assessment item ids must be unique")
        object.__setattr__(
            self, "true_labels", tuple(as_label(v) for v in self.true_labels)
        )

    def __len__(self) -> int:
        return len(self.example_ids)

    def items(self):
        return zip(self.example_ids, self.true_labels)


def estimate_accuracy(
    labeler_id: Hashable,
    responses: Mapping[Hashable, int],
    assessment: AssessmentSet,
) -> LabelerEstimate:
    """MLE accuracy: fraction of assessment items answered correctly.

    ``responses`` must cover every assessment item; a missing response is an
    IncompleteAssessment error rather than a silent shrink of the sample.
    The returned estimate is clamped by LabelerEstimate's constructor.
    """
    correct = 0
    missing = []
    for item_id, truth in assessment.items():
        if item_id not in responses:
            missing.append(item_id)
            continue
        if as_label(responses[item_id]) == truth:
            correct += 1
    if missing:
        raise IncompleteAssessment(
            f"labeler {labeler_id!r} missing {len(missing)} of "
            f"{len(assessment)} assessment responses (first: {missing[0]!r})"
        )
    return LabelerEstimate(
        labeler_id=labeler_id,
        accuracy=correct / len(assessment),
        n_assessed=len(assessment),
    )


def run_assessment(labelers, assessment: AssessmentSet, rng) -> dict:
    """Simulate every labeler answering every assessment item, then estimate.

    ``labelers`` is an iterable of objects with ``labeler_id`` and true
    ``accuracy`` attributes (see :class:`gtx.simulation.SimLabeler`).  Draw
    order: one uniform per (labeler, item), labelers in the given order,
    items in assessment order.
    """
    estimates = {}
    for labeler in labelers:
        acc = labeler.accuracy
        responses = {}
        for item_id, truth in assessment.items():
            correct = rng.random() < acc
            responses[item_id] = truth if correct else 1 - truth
        estimates[labeler.labeler_id] = estimate_accuracy(
            labeler.labeler_id, responses, assessment
        )
    return estimates


def oracle_estimates(labelers) -> dict:
    """Bypass assessment: use each labeler's true accuracy (still clamped)."""
    return {
        labeler.labeler_id: LabelerEstimate(
            labeler_id=labeler.labeler_id, accuracy=labeler.accuracy
        )
        for labeler in labelers
    }
