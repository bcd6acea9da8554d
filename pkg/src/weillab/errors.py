"""Error taxonomy shared by every weillab module."""


class WeillabError(Exception):
    """Base class for all errors raised by this package."""


class NonPrime(WeillabError):
    pass


class EvenCharacteristic(WeillabError):
    pass


class Reducible(WeillabError):
    pass


class DivisionByZero(WeillabError):
    pass


class FieldMismatch(WeillabError):
    pass


class NotInBaseImage(WeillabError):
    pass


class TableLimitExceeded(WeillabError):
    pass


class ZeroPolynomial(WeillabError):
    pass


class TrivialCharacter(WeillabError):
    pass


class ZeroArgument(WeillabError):
    pass


class DegreeDivisibleByP(WeillabError):
    pass


class NotRational(WeillabError):
    pass


class BudgetExceeded(WeillabError):
    pass


class HypothesisViolation(WeillabError):
    pass


class CriticalDataUnavailable(WeillabError):
    pass


class NotQuasiOdd(WeillabError):
    pass


class MatrixTooLarge(WeillabError):
    pass


class DegenerateDerivative(WeillabError):
    pass


class NoSolution(WeillabError):
    pass


class NotDivisible(WeillabError):
    pass


class RootFindingUnstable(WeillabError):
    pass


class DivisibilityViolation(WeillabError):
    pass


class NonIntegerMultiplicity(WeillabError):
    pass
