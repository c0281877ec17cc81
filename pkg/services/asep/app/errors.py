"""
Typed domain errors.

Every error carries a machine-readable code (mirrored in ErrorResponse) so the
CLI can report failures as JSON on stderr.
"""
from typing import Any


class AsepError(Exception):
    """Base class for all harness errors."""

    code = "ASEP_ERROR"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_response(self):
        from .models import ErrorResponse

        return ErrorResponse(code=self.code, message=self.message, details=self.details)


class FanRegionViolation(AsepError):
    """AC >= 1: outside the region where the process representation holds."""

    code = "FAN_REGION_VIOLATION"

    def __init__(self, A: float, C: float):
        super().__init__(f"A*C = {A * C:.6g} >= 1 (A={A:.6g}, C={C:.6g})", A=A, C=C)
        self.A = A
        self.C = C


class InvalidAwParams(AsepError):
    code = "INVALID_AW_PARAMS"


class SizeLimitExceeded(AsepError):
    code = "SIZE_LIMIT_EXCEEDED"


class SingularSystem(AsepError):
    code = "SINGULAR_SYSTEM"


class LengthMismatch(AsepError):
    code = "LENGTH_MISMATCH"


class DegenerateDenominator(AsepError):
    code = "DEGENERATE_DENOMINATOR"

    def __init__(self, factor: str, n: int):
        super().__init__(f"denominator factor {factor} vanishes at n={n}", factor=factor, n=n)
        self.factor = factor


class LinearityViolation(AsepError):
    code = "LINEARITY_VIOLATION"


class DomainError(AsepError):
    code = "DOMAIN_ERROR"


class UnsupportedAtomConfiguration(AsepError):
    code = "UNSUPPORTED_ATOM_CONFIGURATION"


class ParameterOutOfRange(AsepError):
    code = "PARAMETER_OUT_OF_RANGE"


class IndexOutOfRange(AsepError):
    code = "INDEX_OUT_OF_RANGE"


class NonMonotoneTimes(AsepError):
    code = "NON_MONOTONE_TIMES"


class QuadratureFailure(AsepError):
    code = "QUADRATURE_FAILURE"
