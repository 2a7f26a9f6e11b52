"""Exception hierarchy shared by all modules."""


class DLCohError(Exception):
    pass


class ParseError(DLCohError, ValueError):
    pass


class BadMatrix(DLCohError, ValueError):
    pass


class NotFinite(DLCohError):
    pass


class NotAutomorphism(DLCohError, ValueError):
    pass


class NotDivisor(DLCohError, ValueError):
    pass


class NotA2(DLCohError, ValueError):
    pass


class DimensionMismatch(DLCohError, ValueError):
    pass


class HalfPowerResidue(DLCohError, ValueError):
    pass


class NonIntegralCoefficient(DLCohError, ArithmeticError):
    pass


class NotSmooth(DLCohError):
    pass


class NotScalar(DLCohError):
    pass


class NotUnderlinedProduct(DLCohError, ValueError):
    pass


class NotInTable(DLCohError, KeyError):
    pass


class PatternMismatch(DLCohError, ValueError):
    pass


class Unresolvable(DLCohError):
    pass


class HNotKnown(DLCohError):
    pass
