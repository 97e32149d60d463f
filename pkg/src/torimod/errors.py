"""Exception hierarchy.

Every domain failure raised by the library derives from :class:`TorimodError`;
the CLI maps those to exit status 1 and echoes the message verbatim.
"""


class TorimodError(Exception):
    pass


# exact arithmetic
class DivisionByZero(TorimodError, ZeroDivisionError):
    pass


class IncompatibleLevels(TorimodError):
    pass


class NotAUnit(TorimodError):
    pass


class LogOfNonUnit(TorimodError):
    pass


class InsufficientPrecision(TorimodError):
    pass


# geometry
class InvalidFan(TorimodError):
    pass


class InvalidDegree(TorimodError):
    pass


class NotPure(InvalidFan):
    pass


class NotComplete(InvalidFan):
    pass


class NotSimplicial(TorimodError):
    pass


class NotSmooth(TorimodError):
    pass


class WrongDegree(TorimodError):
    pass


# generators
class BadResidue(TorimodError):
    pass


class BadResidues(TorimodError):
    pass


class OddOrder(TorimodError):
    pass


class ReductionNotFound(TorimodError):
    pass


# toric forms
class PoleOnContinuation(TorimodError):
    pass


class NegativeValuation(TorimodError):
    pass


class IntegralDegreeError(TorimodError):
    pass


class NotInRing(TorimodError):
    pass


# hecke
class NotCoprime(TorimodError):
    pass


class WrongWeight(TorimodError):
    pass


class SmallLevel(TorimodError):
    pass
