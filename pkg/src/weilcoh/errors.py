"""Exception types raised across the package."""


class WeilCohError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(WeilCohError, ValueError):
    pass


class IllDefined(WeilCohError):
    """A matrix does not send relations of the source into the relation lattice of the target."""


class InfiniteCohomology(WeilCohError):
    pass


class NotAutomorphism(WeilCohError):
    pass


class NotContinuous(WeilCohError):
    """phi^m is not the identity, so the level-m comparison map is undefined."""


class NotAComplex(WeilCohError):
    pass


class InconsistentShapes(WeilCohError):
    pass


class NotFinitelyGenerated(WeilCohError):
    pass


class SingularPairing(WeilCohError):
    pass


class InconsistentCounts(WeilCohError):
    pass


class IdentityViolation(WeilCohError):
    """A structural identity that must hold by construction failed to hold."""


class InvalidZeta(WeilCohError, ValueError):
    """The data does not describe a normalized rational zeta function."""
