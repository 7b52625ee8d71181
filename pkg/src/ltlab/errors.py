"""Exception types shared by every module.

Each exception carries a stable ``code`` used by the command-line front end
when it reports failures as JSON.
"""


class LtlabError(Exception):
    code = "LtlabError"


class SpecMismatch(LtlabError):
    code = "SpecMismatch"


class DomainMismatch(LtlabError):
    code = "DomainMismatch"


class InvalidSpec(LtlabError):
    code = "InvalidSpec"


class NotDivisible(LtlabError):
    code = "NotDivisible"


class NotAUnit(LtlabError):
    code = "NotAUnit"


class IllegalSubstituend(LtlabError):
    code = "IllegalSubstituend"


class DenominatorBudgetExceeded(LtlabError):
    code = "DenominatorBudgetExceeded"


class BadFrobenius(LtlabError):
    code = "BadFrobenius"


class PrecisionExhausted(LtlabError):
    code = "PrecisionExhausted"


class WindowTooSmall(LtlabError):
    code = "WindowTooSmall"


class NotInImage(LtlabError):
    """Raised when a series handed to a Frobenius preimage is not in the image."""

    code = "NotInImage"
