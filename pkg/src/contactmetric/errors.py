"""Exception hierarchy shared by all modules."""


class GeometryError(ValueError):
    """Base class for every error raised by contactmetric."""


class ParseError(GeometryError):
    """Malformed expression source. ``offset`` is the 0-based character index."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifier(ParseError):
    pass


class DomainError(GeometryError):
    """Evaluation left the real domain of an elementary function."""


class UnboundParameter(GeometryError):
    pass


class NotPositiveDefinite(GeometryError):
    pass


class DegeneratePlane(GeometryError):
    pass


class FrameNotOrthonormal(GeometryError):
    pass


class NotContact(GeometryError):
    pass


class NotCompatible(GeometryError):
    pass


class UmbilicPoint(GeometryError):
    pass


class ZeroK(GeometryError):
    pass


class InvalidParams(GeometryError):
    pass
