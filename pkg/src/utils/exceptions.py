"""Custom exceptions for vortex-spectra."""


class VortexSpectraError(Exception):
    """Base exception for vortex-spectra."""

    def __init__(self, message: str, details: dict | None = None) -> None:
        """Initialize exception with message and optional details."""
        self.message = message
        self.details = details or {}
        super().__init__(self.message)


class ConfigurationError(VortexSpectraError):
    """Raised when there is a configuration error."""

    pass


class ValidationError(VortexSpectraError):
    """Raised when an input violates the precondition of an operation."""

    pass


class ProfileError(VortexSpectraError):
    """Raised when a vortex profile cannot be built or evaluated."""

    pass


class ClassViolationError(ProfileError):
    """Raised when an operation requiring an admissible profile receives one outside the class."""

    pass


class QuadratureError(VortexSpectraError):
    """Raised when adaptive quadrature does not converge."""

    pass


class BiotSavartError(VortexSpectraError):
    """Raised when the velocity cannot be recovered from a vorticity field."""

    pass


class EigensolverError(VortexSpectraError):
    """Raised when a dense eigenvalue or singular value computation fails."""

    pass


class IntegrationError(VortexSpectraError):
    """Raised when the shooting ODE integrator fails."""

    pass


class ContourError(VortexSpectraError):
    """Raised when an argument-principle contour cannot be resolved."""

    pass


class CriticalLayerError(VortexSpectraError):
    """Raised when a Frobenius expansion or connection problem is ill-posed."""

    pass


class SpecialFunctionError(VortexSpectraError):
    """Raised when a special function is evaluated outside its domain."""

    pass


class InvariantViolationError(VortexSpectraError):
    """Raised when a computed result contradicts a proven structural property."""

    pass
