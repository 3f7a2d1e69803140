"""Exception types for the beamforming services and their HTTP conversion."""

from fastapi import HTTPException, status


class BeamformingError(Exception):
    """Base exception for beamformer design and evaluation errors."""
    def __init__(self, message: str, status_code: int = status.HTTP_400_BAD_REQUEST):
        self.message = message
        self.status_code = status_code
        super().__init__(self.message)


class InvalidParameterError(BeamformingError):
    """Exception raised when a numerical parameter is outside its valid range."""
    def __init__(self, message: str, status_code: int = status.HTTP_400_BAD_REQUEST):
        super().__init__(message, status_code)


class SelectionMatrixError(BeamformingError):
    """Exception raised when a selection matrix violates the one-entry-per-row rule."""
    def __init__(self, message: str, status_code: int = status.HTTP_422_UNPROCESSABLE_ENTITY):
        super().__init__(message, status_code)


class ExactSolverBudgetError(BeamformingError):
    """Exception raised when exhaustive analog search exceeds its enumeration budget."""
    def __init__(self, message: str, status_code: int = status.HTTP_413_REQUEST_ENTITY_TOO_LARGE):
        super().__init__(message, status_code)


class DualitySingularError(BeamformingError):
    """Exception raised when the downlink power-mapping system is singular."""
    def __init__(
        self,
        message: str = "Downlink power mapping is singular",
        status_code: int = status.HTTP_422_UNPROCESSABLE_ENTITY,
    ):
        super().__init__(message, status_code)


def convert_service_exception(exception: Exception) -> HTTPException:
    """
    Convert a service exception to an HTTP exception.

    Args:
        exception: Service exception to convert

    Returns:
        HTTPException: Converted HTTP exception
    """
    if isinstance(exception, HTTPException):
        return exception
    if isinstance(exception, BeamformingError):
        return HTTPException(status_code=exception.status_code, detail=exception.message)
    return HTTPException(
        status_code=status.HTTP_500_INTERNAL_SERVER_ERROR,
        detail="Internal server error"
    )


def handle_service_exception(exception: Exception) -> None:
    """
    Unified exception handler for all routers.
    Raises HTTPException with proper status code and message.

    Args:
        exception: Service exception to handle

    Raises:
        HTTPException: Converted HTTP exception
    """
    raise convert_service_exception(exception)
