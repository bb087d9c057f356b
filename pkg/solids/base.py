"""
Base class for the Pappus solids of the volume catalogue
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ambient import Geometry, cosx
from errors import DimensionMismatchError, InputFormatError
from pappus import PappusProfile, pappus_total_mass
from quadrature import QuadratureConfig, QuadratureResult


class BaseSolid(ABC):
    """Abstract solid with closed-form, Pappus and oracle volumes

    Subclasses declare their parameters in param_types; optional_params may be
    omitted from a spec.
    """

    key: str = "base"
    display_name: str = "Base Solid"
    param_types: Dict[str, type] = {}
    optional_params: Tuple[str, ...] = ()
    default_dimension: int = 3

    def __init__(self, geometry: Geometry, **params: Any):
        unknown = set(params) - set(self.param_types)
        if unknown:
            raise InputFormatError(f"{self.key}: unknown parameters {sorted(unknown)}")
        missing = set(self.param_types) - set(params) - set(self.optional_params)
        if missing:
            raise InputFormatError(f"{self.key}: missing parameters {sorted(missing)}")
        self.geometry = geometry
        self.params: Dict[str, Any] = {}
        for name, value in params.items():
            if value is None:
                continue
            try:
                self.params[name] = self.param_types[name](value)
            except (TypeError, ValueError):
                raise InputFormatError(f"{self.key}: parameter {name}={value!r} is not a number") from None
        self.validate()

    def _require_dimension(self, n: int) -> None:
        if self.geometry.n != n:
            raise DimensionMismatchError(f"{self.display_name} lives in dimension {n}, not {self.geometry}")

    @abstractmethod
    def validate(self) -> None:
        """Raise DomainError when parameters leave the validity range"""

    @abstractmethod
    def closed_form_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        """Closed form, or its one-dimensional integral where no antiderivative is known"""

    @abstractmethod
    def profile(self) -> PappusProfile:
        """Leaf centered mass and slant along the centroid curve"""

    @abstractmethod
    def contains(self, points: NDArray[np.float64]) -> NDArray[np.bool_]:
        """Membership of (M, n+1) on-space points"""

    @abstractmethod
    def bounding_radius(self) -> float:
        """Radius of a ball about the pole containing the solid"""

    @abstractmethod
    def oracle_quadrature(self, q: QuadratureConfig) -> QuadratureResult:
        """Full-dimensional volume integral over an explicit parametrisation"""

    def pappus_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        return pappus_total_mass(self.profile(), q)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'solid': self.key,
            'geometry': self.geometry.to_dict(),
            'params': dict(self.params),
        }

    @classmethod
    def describe(cls) -> Dict[str, Any]:
        return {
            'key': cls.key,
            'name': cls.display_name,
            'params': list(cls.param_types),
            'optional': list(cls.optional_params),
        }

    def __repr__(self) -> str:
        args = ", ".join(f"{k}={v:g}" for k, v in self.params.items())
        return f"{type(self).__name__}({self.geometry}, {args})"


def slant_height(h: float, c: float, g: Geometry) -> float:
    """Hypotenuse of the right triangle with legs h and c: cos_X s = cos_X h cos_X c"""
    if g.is_euclidean:
        return float(np.hypot(h, c))
    product = float(cosx(h, g) * cosx(c, g))
    return float(np.arccos(product) if g.is_spherical else np.arccosh(product))
