"""Exception types shared across the package."""


class PegRiskError(Exception):
    """Base class for every error raised by pegrisk."""


class SchemaError(PegRiskError):
    """A CSV header or config file is missing required entries."""


class ValidationError(PegRiskError):
    """A data row or series violates its invariants."""


class AlignmentError(PegRiskError):
    """Two series that must share dates have no dates in common."""


class EstimationError(PegRiskError):
    """A regression cannot be carried out on the given data."""


class InversionError(PegRiskError):
    """The futures-to-probability inversion is undefined for the inputs."""


class DomainError(PegRiskError, ValueError):
    """A parameter lies outside its mathematical domain."""


class DataQualityWarning(UserWarning):
    """A raw implied probability fell outside the plausible diagnostic band."""
