"""Exception and warning types shared across the package."""


class QLCWTError(Exception):
    """Base class for all package errors."""


class GeometryError(QLCWTError, ValueError):
    """Two fields do not live on compatible sample grids."""


class DomainError(QLCWTError, ValueError):
    """A parameter lies outside its admissible range."""


class DegenerateBranch(QLCWTError, ValueError):
    """A b = 0 matrix was passed where b != 0 is required."""


class UnsupportedBranch(QLCWTError, ValueError):
    """Exactly one of b1, b2 vanishes, or the degenerate branch cannot be sampled."""


class NotAdmissible(QLCWTError, ValueError):
    """The admissibility constant of a mother wavelet is (numerically) zero."""


class ConditioningWarning(UserWarning):
    """|b| is tiny but nonzero; chirp rates a/(2b) exceed the grid Nyquist limit."""


class InterpolationWarning(UserWarning):
    """A sampled mother wavelet had to be resampled off-grid by bilinear interpolation."""


class MomentWarning(UserWarning):
    """A moment integral is not converged on the grid (signal does not decay)."""


class FormatError(QLCWTError, ValueError):
    """A file or configuration document is malformed."""


class ResolutionWarning(UserWarning):
    """The sample spacing does not resolve the narrowest daughter wavelet."""
