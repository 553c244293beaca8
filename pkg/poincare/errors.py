from typing import Any, Dict, Optional

# =========================================================
# EXIT CODES
# =========================================================
EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_BAD_INPUT = 2


class PoincareError(Exception):
    """Base class for every error raised by the engine."""

    exit_code = EXIT_BAD_INPUT
    kind = "poincare_error"

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None) -> None:
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def to_response(self) -> Dict[str, Any]:
        return {
            "success": False,
            "data": None,
            "error": {"kind": self.kind, "message": self.message, "details": self.details},
        }


class TableMismatchError(PoincareError):
    kind = "table_mismatch"


class UnknownVariableError(PoincareError):
    kind = "unknown_variable"


class SelfReferenceError(PoincareError):
    kind = "self_reference"


class EvaluationError(PoincareError):
    kind = "evaluation"


class ParameterError(PoincareError):
    kind = "invalid_parameters"


class DegenerateFormError(PoincareError):
    kind = "degenerate_form"


class ShapeMismatchError(PoincareError):
    kind = "shape_mismatch"


class EmptyWindowError(PoincareError):
    kind = "empty_window"


class ExpansionError(PoincareError):
    kind = "expansion"


class UnknownFixtureError(PoincareError):
    kind = "unknown_fixture"


class ConfigError(PoincareError):
    kind = "config"


class VerificationFailure(PoincareError):
    """Raised when a named check does not hold; carries exit code 1."""

    exit_code = EXIT_VERIFICATION_FAILED
    kind = "verification_failed"
