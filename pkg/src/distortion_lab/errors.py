"""Exception hierarchy shared by every module of the package."""


class DistortionLabError(Exception):
    """Base class for all errors raised by distortion_lab."""


class InstanceError(DistortionLabError, ValueError):
    pass


class TieDetected(InstanceError):
    """Two candidates are exactly equidistant from some voter."""


class EmptyCommittee(DistortionLabError, ValueError):
    pass


class GenerationFailed(DistortionLabError, RuntimeError):
    pass


class InvalidId(DistortionLabError, IndexError):
    pass


class InactiveCandidate(DistortionLabError, ValueError):
    pass


class InsufficientCandidates(DistortionLabError, ValueError):
    """A query simulation needs a third candidate that does not exist."""


class NotSinglePeaked(DistortionLabError, ValueError):
    pass


class NoActiveCandidate(DistortionLabError, ValueError):
    pass


class MissingGap(DistortionLabError, ValueError):
    pass


class TooLarge(DistortionLabError, ValueError):
    pass


class KTooLarge(DistortionLabError, ValueError):
    pass


class TooFewActive(DistortionLabError, ValueError):
    pass


class WrongM(DistortionLabError, ValueError):
    pass


class IntervalTooSmall(DistortionLabError, ValueError):
    pass


class KOutOfRange(DistortionLabError, ValueError):
    pass


class BadParams(DistortionLabError, ValueError):
    pass


class UnknownName(DistortionLabError, KeyError):
    pass


class ShapeMismatch(DistortionLabError, ValueError):
    pass


class BadInstance(DistortionLabError, ValueError):
    pass
