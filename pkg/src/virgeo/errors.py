"""Exception hierarchy.

Domain errors (bad input, violated preconditions) derive from
:class:`DomainError`; numerical failures (divergence, instability) derive
from :class:`DivergenceError`.  The CLI maps the two families to distinct
exit codes.
"""


class VirgeoError(Exception):
    pass


class DomainError(VirgeoError, ValueError):
    pass


class DivergenceError(VirgeoError, ArithmeticError):
    def __init__(self, message, history=None):
        super().__init__(message)
        self.history = list(history or [])


# series
class DegenerateDivisor(DomainError):
    pass


class CompositionDomain(DomainError):
    pass


class NotInvertible(DomainError):
    pass


class BranchPoint(DomainError):
    pass


class LogarithmicTerm(DomainError):
    pass


# circle maps
class NotADiffeo(DomainError):
    pass


class NotAProbabilityDensity(DomainError):
    pass


class InversionDiverged(DivergenceError):
    pass


class FlowUnstable(DivergenceError):
    pass


# flag space / mirrors
class DegenerateTriple(DomainError):
    pass


class NotSymmetric(DomainError):
    pass


class UnsupportedSubsymmetry(DomainError):
    pass


class InvalidDeformationPoint(DomainError):
    pass


class LimitDiverged(DivergenceError):
    pass


# Neretin semigroup
class NotContracting(DomainError):
    pass


class GaugeSingular(DomainError):
    pass


class NotImmersive(DomainError):
    pass


class NotJordan(DomainError):
    pass


class BranchAmbiguity(DomainError):
    pass


class WeldingDiverged(DivergenceError):
    pass


class SplitLimit(DivergenceError):
    pass
