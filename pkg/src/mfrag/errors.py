"""Exception hierarchy shared by every mfrag module."""


class MfragError(Exception):
    """Base class for all library errors."""


# partial fields
class UnknownField(MfragError, ValueError):
    pass


class DescriptorMismatch(MfragError, TypeError):
    pass


class NotInvertible(MfragError, ZeroDivisionError):
    pass


class ParseError(MfragError, ValueError):
    """Malformed input text.

    ``offset`` is a byte offset into the parsed string for element literals;
    ``line`` and ``column`` are 1-based positions for file formats.
    """

    def __init__(self, message, offset=None, line=None, column=None):
        self.message = message
        self.offset = offset
        self.line = line
        self.column = column
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if offset is not None:
            where.append(f"offset {offset}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ValidationError(MfragError, ValueError):
    pass


# matrices
class NonSquareSelection(MfragError, ValueError):
    pass


class ZeroPivotEntry(MfragError, ValueError):
    pass


class ZeroScaleFactor(MfragError, ValueError):
    pass


class NotAPermutation(MfragError, ValueError):
    pass


class LabelMismatch(MfragError, ValueError):
    pass


class NotAPMatrix(MfragError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# matroids
class ExchangeAxiomViolation(MfragError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class UnknownLabel(MfragError, KeyError):
    pass


class EmptyGroundSet(MfragError, ValueError):
    pass


class TooLarge(MfragError, ValueError):
    pass


class NotABasis(MfragError, ValueError):
    pass


class BadBasepoint(MfragError, ValueError):
    pass


class LabelCollision(MfragError, ValueError):
    pass


class NotATriangle(MfragError, ValueError):
    pass


class NotATriad(MfragError, ValueError):
    pass


class TriangleNotCoindependent(MfragError, ValueError):
    pass


class UnknownName(MfragError, KeyError):
    pass


# connectivity
class DegenerateSide(MfragError, ValueError):
    pass


class Not3Connected(MfragError, ValueError):
    pass


class NoVerticalSeparation(MfragError, ValueError):
    pass


class NotAFan(MfragError, ValueError):
    pass


class HypothesisFailed(MfragError, ValueError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


# minors and excluded-minor setups
class NoNMinor(MfragError, ValueError):
    pass


class NoBasisMeetsConstraints(MfragError, ValueError):
    pass


class PreconditionViolated(MfragError, ValueError):
    pass


class NNotApplicable(MfragError, ValueError):
    pass


class InvalidSetup(MfragError, ValueError):
    pass


class MissingCompanion(MfragError, ValueError):
    pass


class PivotNotAllowable(MfragError, ValueError):
    pass


class NotRobustNonStrong(MfragError, ValueError):
    pass


class NotRepresentable(MfragError, ValueError):
    pass


class UnknownLemma(MfragError, KeyError):
    pass


class CorpusTooLarge(MfragError, ValueError):
    pass
