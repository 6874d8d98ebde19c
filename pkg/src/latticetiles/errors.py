"""Exception types raised across the package."""


class GeometryError(ValueError):
    """Base class for invalid geometric input."""


class TooFewPoints(GeometryError):
    pass


class NotCentrallySymmetric(GeometryError):
    pass


class NotStrictlyConvex(GeometryError):
    pass


class NotCentered(GeometryError):
    pass


class VerticesNotOnLattice(GeometryError):
    pass


class SingularMap(GeometryError):
    pass


class ClosureViolated(GeometryError):
    pass


class ParameterOutOfRange(GeometryError):
    pass


class EdgeNotReducible(GeometryError):
    pass


class IrrationalInput(GeometryError):
    pass


class TilingError(Exception):
    """Base class for tiling verification outcomes that are not plain failures."""


class BolleFailed(TilingError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class NonIntegerMultiplicity(TilingError):
    """The edge conditions hold but area/det is not an integer.

    Signals an internal inconsistency; it cannot happen for correct input.
    """


class MultiplicityMismatch(TilingError):
    """The sampling oracle disagrees with the certified multiplicity."""


class NotCertified(TilingError):
    pass


class RankDeficientGenerators(TilingError):
    pass
