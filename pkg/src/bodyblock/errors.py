"""Exception hierarchy shared by all modules."""


class BodyBlockError(Exception):
    """Base class for every error raised by the package."""


# scene / config
class MissingKey(BodyBlockError, KeyError):
    pass


class UnknownKey(BodyBlockError, KeyError):
    pass


class InvalidValue(BodyBlockError, ValueError):
    pass


class ManifoldTooSmall(BodyBlockError, ValueError):
    pass


class WrongBodyKind(BodyBlockError, TypeError):
    pass


# fields
class InvalidFrequency(BodyBlockError, ValueError):
    pass


class SingularPoint(BodyBlockError, ValueError):
    pass


# diffraction
class GeometryError(BodyBlockError, ValueError):
    pass


class NoConvergence(BodyBlockError, RuntimeError):
    def __init__(self, message, index=None, level=None):
        super().__init__(message)
        self.index = index
        self.level = level


# mom2d
class TooCoarse(BodyBlockError, ValueError):
    pass


class SingularMatrix(BodyBlockError, RuntimeError):
    pass


class PointOnContour(BodyBlockError, ValueError):
    pass


class LengthMismatch(BodyBlockError, ValueError):
    pass


# ensemble / imaging / stats
class ZeroStates(BodyBlockError, ValueError):
    pass


class ZeroReference(BodyBlockError, ZeroDivisionError):
    pass


class DimsMismatch(BodyBlockError, ValueError):
    pass


class BadWeights(BodyBlockError, ValueError):
    pass


class OutOfRange(BodyBlockError, IndexError):
    pass


class EmptySamples(BodyBlockError, ValueError):
    pass


class BadBinWidth(BodyBlockError, ValueError):
    pass


# dataset io
class DatasetError(BodyBlockError, IOError):
    pass


class BadMagic(DatasetError):
    pass


class UnsupportedVersion(DatasetError):
    pass


class Truncated(DatasetError):
    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte offset {offset})")
        self.offset = offset
