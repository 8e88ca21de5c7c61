"""Exception types shared across the package."""


class OpmeasError(ValueError):
    """Base class for validation and geometry failures."""


class DimensionMismatchError(OpmeasError):
    pass


class NotHermitianError(OpmeasError):
    pass


class SpectrumOutOfRangeError(OpmeasError):
    """An eigenvalue fell outside the admissible interval."""

    def __init__(self, eigenvalue: float, message: str | None = None):
        self.eigenvalue = float(eigenvalue)
        super().__init__(message or f"eigenvalue {self.eigenvalue} outside [0, 1]")


class InvalidEffectError(OpmeasError):
    """An entry of an operator list failed effect validation."""

    def __init__(self, index: int, cause: Exception):
        self.index = index
        self.cause = cause
        super().__init__(f"effect {index} invalid: {cause}")


class SumExceedsIdentityError(OpmeasError):
    pass


class NotNormalizedError(OpmeasError):
    pass


class UnknownOutcomeError(OpmeasError):
    pass


class GeometryError(OpmeasError):
    """Spacetime geometry precondition violated (overlap, wrong slice, wrapped cone)."""
