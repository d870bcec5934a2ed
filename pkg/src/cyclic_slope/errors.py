"""Exception hierarchy.

Validation problems on user data derive from :class:`InvalidInput`; an
:class:`IdentityViolation` means two exact computations that must agree did
not, which is a bug rather than bad input.
"""


class CyclicSlopeError(Exception):
    pass


class InvalidInput(CyclicSlopeError, ValueError):
    pass


class NonIntegralR(InvalidInput):
    pass


class NotMultipleOfN(InvalidInput):
    pass


class UnsupportedOrder(InvalidInput):
    pass


class InvalidType(InvalidInput):
    pass


class InvalidProfile(InvalidInput):
    pass


class PreconditionViolated(InvalidInput):
    pass


class ModNViolation(InvalidInput):
    pass


class InvalidGerm(InvalidInput):
    def __init__(self, violations):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations)
        super().__init__(f"germ failed validation: {lines}")


class NonHalfIntegralM(InvalidInput):
    pass


class InconsistentModel(InvalidInput):
    pass


class DegenerateExample(InvalidInput):
    pass


class LedgerIncomplete(InvalidInput):
    pass


class IdentityViolation(CyclicSlopeError, AssertionError):
    """Two independent exact computations disagree."""
