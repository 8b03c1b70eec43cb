"""Exception types shared across the package."""


class SlliftError(Exception):
    """Base class for all errors raised by this package."""


class FactorLimitExceeded(SlliftError):
    """A cofactor survived the configured factoring effort budget."""


class NotCoprime(SlliftError):
    """CRT moduli share a common factor."""


class NotUnit(SlliftError):
    """Operand is not invertible modulo the given modulus."""


class PrimeTooLarge(SlliftError):
    """A prime factor exceeds the exhaustive-scan bound."""


class TooManyRoots(SlliftError):
    """The root set would exceed the configured cap."""


class NotSquare(SlliftError):
    """Matrix operation requires a square matrix."""


class NotInvertible(SlliftError):
    """Matrix determinant is not 1 modulo q."""


class BadShape(SlliftError):
    """Matrix has the wrong dimensions for this operation."""


class DependentRows(SlliftError):
    """Rows are linearly dependent over the rationals."""


class NotExtendableModQ(SlliftError):
    """Rows cannot be extended to SL_n(Z/qZ)."""


class NotExtendable(SlliftError):
    """Integer rows cannot be completed to an SL_n(Z) matrix."""


class SearchExhausted(SlliftError):
    """Search budget ran out before a witness was found."""


class InvalidInput(SlliftError):
    """Input violates a documented precondition."""


class BudgetExceeded(SlliftError):
    """Candidate space exceeds the configured enumeration budget."""


class SieveExhausted(SlliftError):
    """Prime budget ran out before enough pairs were found."""


class NoUnitAlpha(SlliftError):
    """No admissible unit exists within the search budget."""
