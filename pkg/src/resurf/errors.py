"""Exception hierarchy shared by all modules."""


class ResurfError(Exception):
    """Base class for every error raised by the package."""


class DomainError(ResurfError, ValueError):
    """An argument lies outside the domain of an operation."""


class SingularSurfaceError(DomainError):
    """The Weierstrass discriminant vanishes identically."""


class ClassificationError(ResurfError):
    """No row of a classification table matched the input."""


class IncompletePlacesError(DomainError):
    """A multiple root of the discriminant is not covered by the given places."""


class InconsistencyError(ResurfError):
    """A computed quantity contradicts a stored record."""


class DataIntegrityError(ResurfError):
    """A dataset row or reference table failed validation."""

    def __init__(self, message, row=None):
        if row is not None:
            message = f"row {row}: {message}"
        super().__init__(message)
        self.row = row
