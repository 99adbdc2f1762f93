"""Exception types shared across the package."""


class GtxError(Exception):
    """Base class for all package-specific errors."""


class MissingEstimate(GtxError):
    """A label references a labeler with no accuracy estimate."""


class EmptyLabelSet(GtxError):
    """An aggregation rule was asked to aggregate zero labels."""


class DuplicateLabeler(GtxError):
    """Two labels for the same example share a labeler."""


class EmptyAssessment(GtxError):
    """An assessment set with no items."""


class IncompleteAssessment(GtxError):
    """A labeler did not respond to every assessment item."""


class AlreadyLabeled(GtxError):
    """A (example, labeler) pair was labeled twice."""


class LabelersExhausted(GtxError):
    """No unused labeler remains for an example."""


class ConfigError(GtxError):
    """Invalid configuration; the message lists every violation found."""
