"""Exception types raised by the laboratory."""


class CSDCError(Exception):
    """Base class for every error raised by this package."""


class DegenerateTriangle(CSDCError, ValueError):
    pass


class ViewpointOnControlPoint(CSDCError, ValueError):
    pass


class LeadingCoefficientVanishes(CSDCError, ArithmeticError):
    pass


class ZeroHeight(CSDCError, ValueError):
    pass


class SingularEliminationSystem(CSDCError, ArithmeticError):
    pass


class PathNotTransversal(CSDCError, ValueError):
    pass


class InsufficientSamples(CSDCError, ValueError):
    pass


class UnsupportedFormat(CSDCError, ValueError):
    pass


class PairNotReal(CSDCError):
    """The merging solution pair is complex for the requested direction.

    ``evidence`` carries the conjugate-pair measurements so callers can
    inspect the complex branch instead of just the failure.
    """

    def __init__(self, message: str, evidence: dict | None = None):
        super().__init__(message)
        self.evidence = evidence or {}


class ConfigInvalid(CSDCError, ValueError):
    pass


class RankDeficientBasis(UserWarning):
    """Smallest two singular values of a fit are not separated by the gap ratio."""


class TangentialContact(UserWarning):
    """The discriminant touches zero along a path without changing sign."""


class CrossingAtIntersection(UserWarning):
    """A crossing lies on both the danger cylinder and its companion surface."""
