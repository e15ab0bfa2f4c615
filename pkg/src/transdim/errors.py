"""Exception hierarchy shared by every module.

Each error carries a short ``code`` used by the command line front end when
rendering structured JSON errors.
"""

from __future__ import annotations


class TransdimError(Exception):
    code = "DomainError"
    exit_status = 1

    def __init__(self, detail: str = "") -> None:
        super().__init__(detail or self.code)
        self.detail = detail


class ZeroPolynomial(TransdimError):
    code = "ZeroPolynomial"


class NotCoprime(TransdimError):
    code = "NotCoprime"


class ZeroSeries(TransdimError):
    code = "ZeroSeries"


class NotPurelyLarge(TransdimError):
    code = "NotPurelyLarge"


class NotMonomialTerm(TransdimError):
    code = "NotMonomialTerm"


class DivisionByZero(TransdimError):
    code = "DivisionByZero"


class InexactDivision(TransdimError):
    code = "InexactDivision"


class ArityMismatch(TransdimError):
    code = "ArityMismatch"


class ConstantPolynomial(TransdimError):
    code = "ConstantPolynomial"


class EmptyList(TransdimError):
    code = "EmptyList"


class OrderViolation(TransdimError):
    code = "OrderViolation"


class SizeLimitExceeded(TransdimError):
    code = "SizeLimitExceeded"


class NotVanishing(TransdimError):
    code = "NotVanishing"

    def __init__(self, index: int, detail: str = "") -> None:
        super().__init__(detail or f"polynomial {index} does not vanish at the point")
        self.index = index


class MalformedDescriptor(TransdimError):
    code = "MalformedDescriptor"


class Undecidable(TransdimError):
    code = "Undecidable"


class NoCertificate(TransdimError):
    code = "NoCertificate"


class ShapeMismatch(TransdimError):
    code = "ShapeMismatch"


class OutOfFragment(TransdimError):
    code = "OutOfFragment"


class ParseError(TransdimError):
    """Syntax error in textual input; ``position`` is a 0-based offset."""

    code = "SyntaxError"
    exit_status = 2

    def __init__(self, detail: str, position: int) -> None:
        super().__init__(f"{detail} at position {position}")
        self.position = position


class ArityViolation(ParseError):
    code = "ArityViolation"


class UsageError(TransdimError):
    """Bad command line usage or malformed argument file."""

    code = "UsageError"
    exit_status = 2
