"""Globular workbench: planar trees, globular sets, Theta, theories, cylinders."""

from .errors import (
    GlobworkError,
    ParseError,
    InvalidTableError,
    DomainError,
    SizeGuardError,
    AdmissibilityError,
    TypingError,
)

__all__ = [
    "GlobworkError",
    "ParseError",
    "InvalidTableError",
    "DomainError",
    "SizeGuardError",
    "AdmissibilityError",
    "TypingError",
]
