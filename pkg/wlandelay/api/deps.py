"""Translation of domain errors into HTTP errors."""

from fastapi import HTTPException, status

from wlandelay.core.exceptions import (
    ConfigError,
    ConvergenceError,
    DomainError,
    InstabilityError,
    WlanDelayError,
)

UNPROCESSABLE = 422


def http_error(error: WlanDelayError) -> HTTPException:
    """HTTP counterpart of a domain error."""
    if isinstance(error, InstabilityError):
        code = status.HTTP_409_CONFLICT
    elif isinstance(error, DomainError | ConfigError):
        code = UNPROCESSABLE
    elif isinstance(error, ConvergenceError):
        code = status.HTTP_500_INTERNAL_SERVER_ERROR
    else:
        code = status.HTTP_400_BAD_REQUEST
    return HTTPException(status_code=code, detail=str(error))
