from typing import Any, Optional


class ArflowError(Exception):
    exit_code = 1

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details: dict[str, Any] = details


class InputError(ArflowError, ValueError):
    exit_code = 2


class PreconditionError(InputError):
    pass


class UnsupportedDirectionError(InputError):
    pass


class NumericError(ArflowError, ArithmeticError):
    exit_code = 3


class ClassificationError(NumericError):
    pass


class ConjugatePairingError(NumericError):
    pass


class ComponentIdentityError(NumericError):
    pass


class RecursionViolation(ArflowError, ArithmeticError):
    exit_code = 4

    def __init__(
        self, message: str, *, offending_t: Optional[int] = None, **details: Any
    ) -> None:
        super().__init__(message, offending_t=offending_t, **details)
        self.offending_t = offending_t


class InconsistencyError(RecursionViolation):
    pass
