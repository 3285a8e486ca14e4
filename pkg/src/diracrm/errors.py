"""Exception hierarchy shared by all modules."""


class DiracRMError(Exception):
    """Base class for every error raised by this package."""


# special functions
class SpecialFunctionError(DiracRMError, ValueError):
    pass


class NonConvergent(SpecialFunctionError):
    pass


class InvalidC(SpecialFunctionError):
    pass


class DivergentAtOne(SpecialFunctionError):
    pass


class PoleAtNonPositiveInteger(SpecialFunctionError):
    pass


class ArgumentOutOfRange(SpecialFunctionError):
    pass


# model
class ModelError(DiracRMError, ValueError):
    pass


class InvalidConfig(ModelError):
    pass


class ZeroKappa(ModelError):
    pass


class OutsideBoundDomain(ModelError):
    """The exponent radicand under the decay exponent is not positive."""


class ComplexNu(ModelError):
    """The radicand of the second exponent is negative."""


class NegativeA(ModelError):
    """The constant under the third square root is negative."""


class EmptyWindow(ModelError):
    pass


class IllConditionedFit(ModelError):
    pass


# spectrum / wavefunction / oracle
class NodeCountMismatch(DiracRMError):
    def __init__(self, message, states=None):
        super().__init__(message)
        self.states = states or []


class EnergyAtDenominatorZero(DiracRMError, ZeroDivisionError):
    pass


class NotDecaying(DiracRMError):
    pass


class NonFinite(DiracRMError, FloatingPointError):
    pass


class UnknownState(DiracRMError, LookupError):
    pass
