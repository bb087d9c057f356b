"""
Exception hierarchy for mass-center computations

Library code raises these; only the CLI turns them into exit codes.
"""
from __future__ import annotations


class MassCenterError(Exception):
    """Base class for every error raised by this package"""

    exit_code: int = 1


class DimensionMismatchError(MassCenterError, ValueError):
    """Vector or matrix size disagrees with the geometry"""

    exit_code = 64


class InputFormatError(MassCenterError, ValueError):
    """Malformed JSON, unknown keys or unknown names"""

    exit_code = 64


class OffSpaceError(MassCenterError, ValueError):
    """A point is not on the space, or a material vector is off the cone"""

    exit_code = 65


class DomainError(MassCenterError, ValueError):
    """A parameter lies outside its validity range"""

    exit_code = 65


class NoMassCenterError(MassCenterError):
    """The material vector is zero, so no mass center exists"""

    exit_code = 2


class QuadratureError(MassCenterError, ArithmeticError):
    """Quadrature failed to converge within its budget"""

    exit_code = 70


class OracleError(MassCenterError):
    """A verification oracle could not produce an estimate"""

    exit_code = 70


__all__ = [
    "MassCenterError",
    "DimensionMismatchError",
    "InputFormatError",
    "OffSpaceError",
    "DomainError",
    "NoMassCenterError",
    "QuadratureError",
    "OracleError",
]
