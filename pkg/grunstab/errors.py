"""Define the errors raised by the geometry and verification modules."""


class GrunstabError(Exception):
    """Base class for every error that GrunStab raises on purpose."""


class DegenerateBody(GrunstabError):
    """The body has an affine hull of dimension smaller than its ambient dimension."""


class UnsupportedDimension(GrunstabError):
    """The body lives in a dimension that the construction does not handle."""


class MethodUnsupported(GrunstabError):
    """The requested computation method does not apply to the inputs."""


class CentroidMismatch(GrunstabError):
    """The hyperplane does not pass through the centroid of the body."""


class PreconditionViolated(GrunstabError):
    """A hypothesis of the single-crossing lemma does not hold."""

    def __init__(self, condition: str, detail: str = "") -> None:
        self.condition = condition
        message = condition if not detail else f"{condition}: {detail}"
        super().__init__(message)


class SignChangeOverflow(GrunstabError):
    """A profile difference changes sign more often than the guard allows."""


class RatioUnattainable(GrunstabError):
    """No hyperplane through the centroid achieves the requested ratio."""


class InsufficientData(GrunstabError):
    """Too few usable reports for the exponent comparison."""


class ConfigError(GrunstabError):
    """The sweep configuration is malformed."""


class InputError(GrunstabError):
    """A body or hyperplane file cannot be parsed."""
