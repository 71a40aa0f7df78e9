"""
errors.py

Exception hierarchy for the qpse library.

Library code raises these; the CLI and the pipeline stages turn them into
exit codes (ValidationError -> 2, NumericalGuard -> 3).
"""

from __future__ import annotations


class QpseError(Exception):
    """Base class for every error raised by qpse."""


class ValidationError(QpseError):
    """Bad input: malformed spec files, out-of-domain parameters."""

    def __init__(self, msg: str, line: int | None = None) -> None:
        self.line = line
        if line is not None:
            msg = f"line {line}: {msg}"
        super().__init__(msg)


class NumericalGuard(QpseError):
    """A numerical safety guard tripped; the result would not be trustworthy."""

    @property
    def guard(self) -> str:
        return type(self).__name__


class GridTooSmall(NumericalGuard):
    pass


class AliasedMomentum(NumericalGuard):
    pass


class EdgeMassExceeded(NumericalGuard):
    pass


class NonFinite(NumericalGuard):
    pass


class ZeroNorm(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class GridMismatch(ValidationError):
    pass


class UnsupportedSpin(ValidationError):
    pass
