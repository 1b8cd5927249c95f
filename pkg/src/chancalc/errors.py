"""Exception hierarchy shared by every module."""


class ChancalcError(Exception):
    """Base class for all library errors."""


class ValidationError(ChancalcError, ValueError):
    """Malformed input: bad labels, negative weights, mass above one, bad models."""


class InferenceError(ChancalcError):
    """A well-formed query that cannot be answered."""


class IdentifiabilityError(InferenceError):
    """A causal quantity needs a conditional that the data does not determine."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


class JointTooLargeError(InferenceError):
    """Dense joint materialisation would exceed the configured size bound."""
