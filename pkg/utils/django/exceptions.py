from dataclasses import dataclass

import sentry_sdk

EXIT_LAW_FAILURE = 1
EXIT_INPUT_ERROR = 2


@dataclass(frozen=True)
class BaseException(Exception):
    item: str
    message: str
    exit_code: int = EXIT_INPUT_ERROR

    def error_data(self) -> dict:
        error_data = {"item": self.item, "message": self.message}
        sentry_sdk.capture_exception(
            self, tags={"custom-exceptions": "custom-exceptions"}
        )

        return error_data

    def __str__(self):
        return "{}: {}".format(self.item, self.message)


# General exception classes with exit codes


class InputError(BaseException):
    def __init__(self, item, message):
        super().__init__(item, message, exit_code=EXIT_INPUT_ERROR)


class LawFailure(BaseException):
    def __init__(self, item, message):
        super().__init__(item, message, exit_code=EXIT_LAW_FAILURE)


class MalformedTable(InputError):
    pass


class ShapeMismatch(InputError):
    pass


class UnknownObject(InputError):
    pass


class SizeLimitExceeded(InputError):
    pass


class TypeMismatch(InputError):
    pass


class UniverseOverflow(InputError):
    pass


class BaseNotCocartesian(InputError):
    pass


class NotUniversal(InputError):
    pass


class ParseError(InputError):
    """
    Raised when an interchange document cannot be read.

    Attributes:
    - line (int | None): The 1-based line of the offending token, when the YAML parser reports one.
    - field (str | None): The dotted path of the offending field, when schema validation fails.
    """

    def __init__(self, item, message, line=None, field=None):
        super().__init__(item, message)
        object.__setattr__(self, "line", line)
        object.__setattr__(self, "field", field)

    def error_data(self) -> dict:
        error_data = super().error_data()
        error_data.update(line=self.line, field=self.field)
        return error_data


class MissingLift(LawFailure):
    pass


class ComparisonFailed(LawFailure):
    pass


class MonoidLawFailure(LawFailure):
    """A constituent monoid of a network model, or a map between them, breaks a monoid law."""

    def __init__(self, item, message, witness=()):
        super().__init__(item, message)
        object.__setattr__(self, "witness", tuple(witness))
