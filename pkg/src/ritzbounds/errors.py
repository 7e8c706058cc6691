"""Exception hierarchy shared by all ritzbounds modules."""


class RitzBoundsError(Exception):
    """Base class for all library errors."""


class ConvergenceError(RitzBoundsError):
    """Jacobi sweeps exhausted the rotation budget without converging."""


class RankDeficient(RitzBoundsError):
    """Input columns do not have full numerical rank."""


class ZeroVector(RitzBoundsError):
    """A vector argument has (numerically) zero norm."""


class DimensionMismatch(RitzBoundsError):
    """Operands live in incompatible ambient dimensions."""


class SingularShift(RitzBoundsError):
    """The shift coincides with an eigenvalue of the operator."""


class SingularMatrix(RitzBoundsError):
    """The operator is numerically singular where invertibility is required."""


class NotPositiveDefinite(RitzBoundsError):
    """A matrix required to be SPD has a non-positive eigenvalue."""


class CholeskyFailure(RitzBoundsError):
    """Cholesky factorization broke down (shift numerically on the spectrum)."""


class ComplexPairs(RitzBoundsError):
    """A non-commuting weight produced complex reduced eigenpairs."""


class NoFinitePair(RitzBoundsError):
    """Every extracted value is the infinite sentinel; nothing to pair."""


class InsufficientFiniteValues(RitzBoundsError):
    """Fewer finite extracted values than the requested selection size."""


class EmptySet(RitzBoundsError):
    """A value set that must be nonempty is empty."""


class SubspaceNotContained(RitzBoundsError):
    """The trial subspace is not contained in the given invariant subspace."""


class NotCommuting(RitzBoundsError):
    """The preconditioner does not commute with the operator."""


class NotPositiveOnSpectrum(RitzBoundsError):
    """The polynomial is not positive on every eigenvalue of the operator."""


class SingularB(RitzBoundsError):
    """The projected shifted matrix K'(A - sigma I)K is singular."""


class InvalidSpectrum(RitzBoundsError):
    """A spectrum specification cannot be realized."""


class DimensionError(RitzBoundsError):
    """Subspace generator dimensions are infeasible."""


class MatrixFormatError(RitzBoundsError):
    """A matrix/basis text file is malformed or not symmetric."""
