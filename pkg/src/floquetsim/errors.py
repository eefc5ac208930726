"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class FloquetError(Exception):
    """Base class; `code` is the machine-readable error name."""

    exit_code = 3

    @property
    def code(self) -> str:
        return type(self).__name__


class ValidationError(FloquetError):
    exit_code = 2


class NonHermitianPair(ValidationError):
    pass


class ProfileViolation(ValidationError):
    pass


class InvalidEpsilon(ValidationError):
    pass


class LTooSmall(ValidationError):
    pass


class IndexOutOfRange(ValidationError):
    pass


class NegativeCoefficient(ValidationError):
    pass


class NonUnitaryTerm(ValidationError):
    pass


class MissingModeEncoding(ValidationError):
    pass


class AllZero(ValidationError):
    pass


class NonHermitian(ValidationError):
    pass


class QuadratureResidual(FloquetError):
    pass


class StepUnderflow(FloquetError):
    pass


def check_epsilon(eps: float) -> None:
    if not (0.0 < eps < 1.0):
        raise InvalidEpsilon(f"epsilon must lie in (0, 1), got {eps!r}")
