"""Exception types shared across the package."""


class SbdError(Exception):
    """Base class for all library errors."""


class CapExceeded(SbdError):
    """Requested dimension or qubit count is above the configured cap."""


class BadWord(SbdError, ValueError):
    """Pauli word contains symbols outside {I, X, Y, Z}."""


class OddDimension(SbdError):
    """Matrix dimension is odd; pad before splitting."""


class Singular(SbdError):
    """LU factorization hit a numerically zero pivot."""


class SeedDegenerate(SbdError):
    """Trace too small to seed the square-root iteration."""


class IterationSingular(SbdError):
    """A square-root iterate became singular and no fallback is available."""


class ZeroMatrix(SbdError):
    """Normalization bound is numerically zero."""


class DepthTooLarge(SbdError):
    """Compression depth would leave a block of dimension < 2."""


class NegativeRadicand(SbdError):
    """Eigenvalue recovery asked for the root of a negative number."""


class DomainError(SbdError, ValueError):
    """Argument outside the documented domain."""


class NoConvergence(SbdError):
    """Iterative eigensolver exhausted its restart budget."""


class NotPowerOfTwo(SbdError):
    """Statevector simulation needs a 2**q dimensional matrix."""


class IncompleteGrid(SbdError):
    """Ranking manifest does not cover every molecule for every model."""


class DegenerateFit(SbdError):
    """Exponential fit requested on degenerate abscissae."""
