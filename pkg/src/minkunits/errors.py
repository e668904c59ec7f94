"""Exception hierarchy shared by every module.

Exit codes used by the command line front end are attached to the classes
so that ``cli`` does not need a lookup table.
"""


class MinkError(Exception):
    exit_code = 1


class Undecided(MinkError):
    """A certified comparison could not be decided at the current precision.

    Raised internally; the precision driver catches it and retries with more
    bits.  Never escapes a public entry point (it becomes PrecisionExhausted).
    """

    exit_code = 2


class PrecisionExhausted(MinkError):
    exit_code = 2


class InvalidFixture(MinkError):
    exit_code = 3


class ExcludedCase(MinkError):
    exit_code = 4


class NotInvertible(MinkError, ZeroDivisionError):
    pass


class DivisionByZero(NotInvertible):
    pass


class VerificationFailed(MinkError):
    pass


class NotNormal(MinkError):
    pass


class CaseViolation(MinkError):
    pass


class StructureViolation(MinkError):
    pass


class HypothesisViolated(MinkError):
    pass


class NotAUnit(MinkError):
    pass


class RankDeficient(MinkError):
    pass


class ConsistencyFailure(MinkError):
    pass


class IterationCapExceeded(MinkError):
    pass


class RawComparisonError(TypeError):
    """Raised when an interval is coerced to a float inside a strict region."""


class SingularWithinTolerance(Undecided):
    """A determinant enclosure contains zero at the current precision."""
