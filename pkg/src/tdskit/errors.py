"""Package exception hierarchy."""


class TdskitError(Exception):
    """Base class for package errors."""


class SolverError(TdskitError):
    """Time integration failed (stepsize collapse or instability)."""


class DataFormatError(TdskitError):
    """Malformed experimental data or project file."""
