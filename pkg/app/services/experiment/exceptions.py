"""
Experiment-specific exceptions for the harness.

These exceptions follow the same pattern as the beamforming service
exceptions.
"""

from typing import Iterable

from fastapi import status
from pydantic import ValidationError

from app.utils.exceptions import BeamformingError


class ExperimentConfigError(BeamformingError):
    """Raised when an experiment configuration cannot be read or validated."""
    def __init__(self, message: str, status_code: int = status.HTTP_400_BAD_REQUEST):
        super().__init__(f"Experiment configuration error: {message}", status_code)

    @classmethod
    def from_validation(cls, error: ValidationError) -> "ExperimentConfigError":
        """One ``field: message`` line per pydantic error."""
        return cls("\n" + "\n".join(_field_messages(error.errors())))


def _field_messages(errors: Iterable[dict]) -> list:
    lines = []
    for err in errors:
        location = ".".join(str(part) for part in err.get("loc", ())) or "config"
        lines.append(f"  {location}: {err.get('msg', 'invalid value')}")
    return lines
