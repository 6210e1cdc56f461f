"""Exception hierarchy with machine-readable codes and CLI exit statuses."""

from __future__ import annotations

from typing import Any


class TrapEntError(Exception):
    """Base class. ``code`` and ``exit_code`` feed the CLI error document."""

    code = "error"
    exit_code = 2

    def __init__(self, message: str, **context: Any) -> None:
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> dict[str, Any]:
        return {"code": self.code, "message": self.message, "context": self.context}


class ConfigurationError(TrapEntError, ValueError):
    code = "invalid_config"
    exit_code = 1


class InvalidInputError(TrapEntError, ValueError):
    code = "invalid_input"
    exit_code = 1


class AliasingError(InvalidInputError):
    code = "aliasing"


class StateError(TrapEntError, RuntimeError):
    code = "invalid_state"
    exit_code = 2


class NumericalError(TrapEntError, RuntimeError):
    code = "numerical_failure"
    exit_code = 2


class ResolutionError(NumericalError):
    code = "resolution"


class UndefinedChannelError(NumericalError):
    code = "undefined_channel"


class ConsistencyError(NumericalError):
    code = "consistency"


class ExtrapolationError(NumericalError):
    code = "extrapolation_quality"
