"""Exception hierarchy shared by all modules."""


class CrossTwinError(Exception):
    """Base class for every error raised by this package."""


class Singular(CrossTwinError):
    pass


class NotSymmetric(CrossTwinError):
    pass


class BadParams(CrossTwinError):
    pass


class NoTwin(CrossTwinError):
    pass


class Degenerate(CrossTwinError):
    pass


class NotTwinRelated(CrossTwinError):
    pass


class NoCounterpart(CrossTwinError):
    pass


class NoSharedNormal(CrossTwinError):
    pass


class NotInvertible(CrossTwinError):
    pass


class IsRotation(CrossTwinError):
    pass


class NoClassical(CrossTwinError):
    pass


class Incompatible(CrossTwinError):
    pass


class DenominatorVanishes(CrossTwinError):
    pass
