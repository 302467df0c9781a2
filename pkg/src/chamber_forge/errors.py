"""Exception hierarchy shared by all chamber_forge modules."""


class ChamberForgeError(Exception):
    """Base class for every error raised by this package."""


class ZeroVector(ChamberForgeError, ValueError):
    pass


class NotPointed(ChamberForgeError, ValueError):
    """The cone contains a line, so it has no Hilbert basis / ray form."""

    def __init__(self, message, lineality=None):
        super().__init__(message)
        self.lineality = lineality


class NotFullDimensional(ChamberForgeError, ValueError):
    pass


class NonConvexSupport(ChamberForgeError, ValueError):
    pass


class OverlapError(ChamberForgeError, ValueError):
    pass


class RayNotInSupport(ChamberForgeError, ValueError):
    pass


class NotFiniteType(ChamberForgeError, ValueError):
    pass


class ClosureBudgetExceeded(ChamberForgeError, RuntimeError):
    pass


class NotAdjoint(ChamberForgeError, ValueError):
    pass


class BudgetExceeded(ChamberForgeError, RuntimeError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NotStable(ChamberForgeError, ValueError):
    pass


class NotCovering(ChamberForgeError, ValueError):
    pass


class NotAFan(ChamberForgeError, ValueError):
    pass


class NoRayOffAxis(ChamberForgeError, ValueError):
    pass


class BoundExceeded(ChamberForgeError, RuntimeError):
    pass


class SearchExhausted(ChamberForgeError, RuntimeError):
    def __init__(self, message, box=None):
        super().__init__(message)
        self.box = box


class NotUnipotent(ChamberForgeError, ValueError):
    pass
