"""Exception hierarchy shared by all hnnkit modules.

Every error raised by the library derives from :class:`Error`, so callers
(and the CLI exit-code mapping) can catch one base class.
"""


class Error(Exception):
    pass


class ParseError(Error):
    pass


class AlphabetMismatch(Error):
    pass


class BasisNotFree(Error):
    pass


class MismatchedAssociationLengths(Error):
    pass


class RadiusTooLarge(Error):
    pass


class OutOfBall(Error):
    pass


class OracleRadiusExceeded(Error):
    pass


class NotTrivialWord(Error):
    pass


class MalformedDiagram(Error):
    pass


class NoCancellationAtPosition(Error):
    pass


class PieceNotTrivial(Error):
    pass


class SearchSpaceTooLarge(Error):
    pass


class AnnulusNotSeparating(Error):
    pass


class CrossingConditionViolated(Error):
    pass


class GeodesicConditionViolated(Error):
    pass


class NotARefinement(Error):
    pass


class ElementNotOutsideSubgroup(Error):
    pass


class NotEnoughStableLetters(Error):
    pass


class CertificationFailed(Error):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class DiameterTooLarge(Error):
    pass
