"""Exception types shared across the toolkit."""


class SsbathyError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(SsbathyError, ValueError):
    """An argument violates a documented precondition."""


class DomainError(SsbathyError, ValueError):
    """Inputs are individually valid but describe an impossible geometry."""


class EmptyMaskError(SsbathyError):
    """A loss window contains no valid pixels; callers should skip it."""


class TrainingDiverged(SsbathyError):
    """The optimization produced a non-finite loss."""
