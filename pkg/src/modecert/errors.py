"""Exception hierarchy shared by every module."""

from __future__ import annotations


class ModeCertError(Exception):
    """Base class for all engine errors."""


class DivisionByZeroPoly(ModeCertError, ZeroDivisionError):
    pass


class UnsupportedCase(ModeCertError):
    pass


class InvalidIndex(ModeCertError, ValueError):
    pass


class EigenvalueMismatch(ModeCertError):
    def __init__(self, message: str, residual=None):
        super().__init__(message)
        self.residual = residual


class TableMismatch(ModeCertError):
    def __init__(self, message: str, derived=None, expected=None):
        super().__init__(message)
        self.derived = derived
        self.expected = expected


class NotRegularSingular(ModeCertError):
    pass


class RatioBreakdown(ModeCertError):
    def __init__(self, message: str, index: int | None = None):
        super().__init__(message)
        self.index = index


class NoBoundsRow(ModeCertError):
    def __init__(self, message: str, model=None):
        super().__init__(message)
        self.model = model


class CertificateFailed(ModeCertError):
    def __init__(self, message: str, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SignAmbiguousDenominator(CertificateFailed):
    pass


class DegenerateDivision(ModeCertError):
    pass


class NotCertified(ModeCertError):
    pass
