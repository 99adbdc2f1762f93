"""Shared helpers for driving the collection engines in tests."""

import numpy as np

from gtx.model import LabelerEstimate
from gtx.simulation import SimDataset, SimLabeler, UniformStream


class Script(UniformStream):
    """A UniformStream that plays back a fixed list of draws.

    Lets a test decide exactly which labeler is selected and whether each
    elicited label is correct (draw order per label: selection, then
    correctness).  Running past the script is a test bug and raises.
    """

    def __init__(self, values):
        self._vals = [float(v) for v in values]
        self._i = 0

    def random(self):
        v = self._vals[self._i]
        self._i += 1
        return v

    @property
    def consumed(self):
        return self._i


def make_dataset(true_labels):
    return SimDataset(true_labels=np.asarray(true_labels, dtype=np.int8))


def make_labelers(accuracies):
    return [SimLabeler(labeler_id=i, accuracy=a) for i, a in enumerate(accuracies)]


def make_estimates(accuracies):
    return {
        i: LabelerEstimate(labeler_id=i, accuracy=a)
        for i, a in enumerate(accuracies)
    }


WRONG = 0.9999  # correctness draw that fails any clamped accuracy
RIGHT = 0.0  # correctness draw that succeeds for any positive accuracy
FIRST = 0.0  # selection draw that picks the lowest-id unused labeler
