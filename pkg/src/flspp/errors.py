"""Exception types shared across the package."""


class FlsppError(Exception):
    """Base class for all package errors."""


class DatasetError(FlsppError):
    """Raised when a dataset file cannot be loaded or is malformed."""


class DegenerateSamplingError(FlsppError):
    """Raised when d2-sampling is requested but every distance is zero."""


class ConfigError(FlsppError):
    """Raised for invalid algorithm or experiment configuration."""
