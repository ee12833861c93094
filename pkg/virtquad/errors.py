"""Exception hierarchy for virtquad.

Every error raised by the library derives from VQSError and carries the CLI
exit status it maps to: 2 for bad input, 3 for an exhausted budget, 1 for
everything else.
"""

from typing import Optional, Sequence


class VQSError(Exception):
    """Base class for all virtquad errors."""
    exit_code = 1

    def __init__(self, msg: str = ""):
        super().__init__(msg)
        self.msg = msg


class InputError(VQSError):
    """The caller supplied something malformed."""
    exit_code = 2


# field_arith

class CompositeCharacteristic(InputError):
    pass


class ReducibleModulus(InputError):
    pass


class FieldTooLarge(InputError):
    pass


class MixedFields(InputError):
    pass


class DivisionByZero(VQSError, ZeroDivisionError):
    pass


class NotASquare(VQSError):
    pass


# exact_linalg

class ShapeMismatch(InputError):
    pass


class AmbientMismatch(InputError):
    pass


class SingularMatrix(VQSError):
    pass


# quad_core / embedding

class DegenerateAmbient(InputError):
    pass


class DegenerateGram(InputError):
    pass


class NotTotallyIsotropic(InputError):
    pass


class CharacteristicMismatch(InputError):
    pass


class OddDimension(InputError):
    """An alternating Gram matrix of odd size; `certificate` is a nonzero kernel vector."""

    def __init__(self, msg: str = "", certificate: Optional[Sequence] = None):
        super().__init__(msg)
        self.certificate = tuple(certificate) if certificate is not None else None


# classify / iso_groups

class NonTrivialRadical(InputError):
    pass


class NotSingular(InputError):
    pass


class InRadical(InputError):
    pass


class NotMinimal(InputError):
    pass


class Degenerate(InputError):
    pass


class ParityMismatch(InputError):
    pass


class BudgetExceeded(VQSError):
    exit_code = 3


class InvariantViolation(VQSError):
    """A postcondition the algorithms assert internally did not hold."""
    pass


# cli_app

class ParseError(InputError):
    """Malformed form JSON; `location` names the offending line/column or field path."""

    def __init__(self, msg: str = "", location: Optional[str] = None):
        full = f"{msg} (at {location})" if location else msg
        super().__init__(full)
        self.location = location


class FormValidationError(InputError):
    pass
