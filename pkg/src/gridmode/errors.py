"""Exception hierarchy for the workbench.

Errors are grouped so the CLI can map them onto distinct exit codes:
configuration problems, numerical/computation failures, and validation
failures are reported separately.
"""


class GridmodeError(Exception):
    """Base class for all workbench errors."""


class ConfigError(GridmodeError):
    """Invalid configuration, descriptor, or parameter file."""


class ParamOutOfRange(ConfigError):
    """A parameter violates its documented range or invariant."""


class ComputationError(GridmodeError):
    """Numerical failure inside a computation."""


class NoConvergence(ComputationError):
    """Equilibrium Newton solve did not converge."""


class UnstableLinearization(ComputationError):
    """A linearized model has an eigenvalue with non-negative real part."""


class SingularResolvent(ComputationError):
    """(jwI - A) is numerically singular; cannot happen for stable A."""


class InvalidTaps(ConfigError):
    """LFSR tap set does not generate a maximal-length sequence."""


class NumericalBlowup(ComputationError):
    """A simulated state exceeded the blowup bound (bad dt or unstable model)."""


class LengthMismatch(ComputationError):
    """A time series does not contain the required number of whole periods."""


class IllConditioned(ComputationError):
    """Per-frequency excitation matrix is ill-conditioned at every bin."""

    def __init__(self, dropped_bins, message=None):
        self.dropped_bins = list(dropped_bins)
        super().__init__(message or f"{len(self.dropped_bins)} ill-conditioned bins")


class MissingFrequency(ComputationError):
    """A requested grid frequency is absent from a spectrum."""


class GenerationStalled(ComputationError):
    """Stability-gate rejection rate is too high for one structure."""


class TooFewSamples(ConfigError):
    """A stratum is too small to split."""


class DegenerateData(ConfigError):
    """Training data does not contain enough samples per class."""


class WidthMismatch(ConfigError):
    """Feature vector width does not match the trained model."""


class NotTreeBased(ConfigError):
    """Feature importances requested from a non-tree model."""


class SchemaError(ConfigError):
    """Malformed dataset or report file."""


class ValidationFailure(GridmodeError):
    """A measurement validation did not meet its tolerance."""
