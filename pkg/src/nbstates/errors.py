"""Error taxonomy shared by every module.

Two families matter for callers (and for the CLI exit-code mapping):

* ``DomainError`` and subclasses: the caller asked for something outside the
  contract (bad parameter ranges, mismatched dimensions, malformed config).
* ``NumericsError`` and subclasses: the inputs were legal but a numerical
  guarantee could not be met (series failed to converge, a truncation cap was
  hit, a projection came out with zero norm).
"""


class DomainError(ValueError):
    """Input violates a documented parameter or dimension constraint."""


class DimensionMismatchError(DomainError):
    """Two truncated vectors with different lengths were combined."""


class ConfigError(DomainError):
    """A config file or command line could not be interpreted."""


class NumericsError(RuntimeError):
    """A numerical contract (convergence, truncation, conditioning) failed."""


class TruncationError(NumericsError):
    """The truncation dimension needed to meet the tail tolerance exceeds the hard cap."""


class ConvergenceError(NumericsError):
    """A series evaluation did not converge within the allotted number of terms."""


class PoleError(NumericsError):
    """A ratio of expansion coefficients hit a zero denominator."""


class ZeroNormError(NumericsError):
    """A conditional projection produced a numerically zero branch."""
