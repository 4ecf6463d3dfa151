"""Exception types shared across the package."""


class GerstError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(GerstError):
    """Malformed or inconsistent user input."""

    exit_code = 2

    def __init__(self, code: str, path: str, message: str):
        super().__init__(f"[{code}] {path}: {message}" if path else f"[{code}] {message}")
        self.code = code
        self.path = path
        self.message = message

    def to_json(self) -> dict:
        return {"code": self.code, "path": self.path, "message": self.message}


class ManifestError(InputError):
    """Carries every violation found while validating a manifest."""

    def __init__(self, violations):
        self.violations = list(violations)
        first = self.violations[0]
        super().__init__(first.code, first.path,
                         "; ".join(v.message for v in self.violations))


class UnresolvableError(GerstError):
    """The triviality oracle cannot decide a character."""

    exit_code = 2


class StructuralError(GerstError):
    """A model or operator fails a structural requirement."""


class ClosureError(StructuralError):
    """An operation produced a term outside the model basis."""


class AssumptionError(GerstError):
    """A hypothesis of a construction does not hold for the given input."""


class RejectionError(GerstError):
    """A computation rejected its input, e.g. a bivector that is not Poisson."""

    def __init__(self, message: str, residual=None, residual_text: str = ""):
        super().__init__(message)
        self.residual = residual
        self.residual_text = residual_text
