"""
Finite point sets and the two-point mass-center calculus

The mass center of a finite set is the point of the summed material vector
a_1 + ... + a_N.  In E^n the centered mass equals the total mass; in S^n it
is smaller and in H^n larger, by 2 m_a m_b (cos_X d - 1) for a pair.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterator, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.optimize import bisect

from ambient import (
    Geometry,
    Isometry,
    MaterialVector,
    apply_isometry,
    cosx,
    decompose,
    exp_point,
    project_to_space,
    sinx,
)
from errors import DimensionMismatchError, DomainError, InputFormatError, NoMassCenterError

logger = logging.getLogger(__name__)

ANTIPODAL_TOL = 1e-8
LEVER_TOL = 1e-10


def pairwise_sum(values: ArrayLike) -> NDArray[np.float64]:
    """Tree summation along the first axis"""
    arr = np.asarray(values, dtype=float)
    if arr.shape[0] == 0:
        return np.zeros(arr.shape[1:])
    while arr.shape[0] > 1:
        if arr.shape[0] % 2:
            arr = np.concatenate([arr, np.zeros((1,) + arr.shape[1:])])
        arr = arr[0::2] + arr[1::2]
    return arr[0]


@dataclass(frozen=True)
class PointSet:
    """A nonempty finite collection of material vectors on one geometry"""

    geometry: Geometry
    vectors: Tuple[MaterialVector, ...]

    def __post_init__(self):
        vectors = tuple(self.vectors)
        if not vectors:
            raise InputFormatError("A point set needs at least one material vector")
        for v in vectors:
            if v.geometry != self.geometry:
                raise DimensionMismatchError(f"Point set on {self.geometry} got a vector on {v.geometry}")
        object.__setattr__(self, 'vectors', vectors)

    @classmethod
    def from_masses_points(cls, g: Geometry, masses: Sequence[float], points: ArrayLike) -> "PointSet":
        points = np.asarray(points, dtype=float)
        if len(masses) != len(points):
            raise DimensionMismatchError(f"{len(masses)} masses for {len(points)} points")
        return cls(g, tuple(MaterialVector.from_mass_point(g, m, p) for m, p in zip(masses, points)))

    @classmethod
    def from_json(cls, data: Union[str, Dict[str, Any]]) -> "PointSet":
        """Parse {"geometry": {...}, "points": [{"mass", "point"} | {"vector"}, ...]}"""
        if isinstance(data, str):
            try:
                data = json.loads(data)
            except json.JSONDecodeError as e:
                raise InputFormatError(f"Point set is not valid JSON: {e}") from None
        if not isinstance(data, dict):
            raise InputFormatError("Point set must be a JSON object")
        unknown = set(data) - {'geometry', 'points'}
        if unknown:
            raise InputFormatError(f"Unknown point-set keys: {sorted(unknown)}")
        if 'geometry' not in data or 'points' not in data:
            raise InputFormatError("Point set needs 'geometry' and 'points'")
        g = Geometry.from_dict(data['geometry'])
        if not isinstance(data['points'], list):
            raise InputFormatError("'points' must be a list")
        return cls(g, tuple(MaterialVector.from_dict(g, entry) for entry in data['points']))

    def to_json(self) -> Dict[str, Any]:
        return {
            'geometry': self.geometry.to_dict(),
            'points': [v.to_dict() for v in self.vectors],
        }

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self) -> Iterator[MaterialVector]:
        return iter(self.vectors)

    @property
    def coords(self) -> NDArray[np.float64]:
        return np.stack([v.coords for v in self.vectors])

    @property
    def masses(self) -> NDArray[np.float64]:
        return np.array([v.mass for v in self.vectors])

    def split(self, mask: Sequence[bool]) -> Tuple["PointSet", "PointSet"]:
        """Two-part partition; both parts must be nonempty"""
        mask = list(mask)
        first = tuple(v for v, keep in zip(self.vectors, mask) if keep)
        second = tuple(v for v, keep in zip(self.vectors, mask) if not keep)
        return PointSet(self.geometry, first), PointSet(self.geometry, second)

    def mapped(self, iso: Isometry) -> "PointSet":
        return PointSet(self.geometry, tuple(apply_isometry(iso, v) for v in self.vectors))

    def scaled(self, r: float) -> "PointSet":
        return PointSet(self.geometry, tuple(v.scaled(r) for v in self.vectors))


def random_points(g: Geometry, size: int, rng: np.random.Generator, spread: float = 1.5) -> NDArray[np.float64]:
    """Random points of the space; hyperbolic and Euclidean ones within distance spread of the pole"""
    if g.is_spherical:
        x = rng.standard_normal((size, g.dim))
        return x / np.linalg.norm(x, axis=1, keepdims=True)
    unit = rng.standard_normal((size, g.n))
    unit /= np.linalg.norm(unit, axis=1, keepdims=True)
    direction = np.concatenate([unit, np.zeros((size, 1))], axis=1)
    return exp_point(g.pole(), direction, rng.uniform(0.0, spread, size), g)


def random_point_set(g: Geometry, size: int, rng: np.random.Generator) -> PointSet:
    masses = rng.uniform(0.1, 3.0, size)
    return PointSet.from_masses_points(g, list(masses), random_points(g, size, rng))


# ============================================================================
# Aggregates of a point set
# ============================================================================

def oplus(s: PointSet) -> MaterialVector:
    """a_1 + ... + a_N; the zero vector when masses cancel on S^n"""
    return MaterialVector(s.geometry, pairwise_sum(s.coords))


def total_mass(s: PointSet) -> float:
    return float(pairwise_sum(s.masses))


def centered_mass(s: PointSet) -> float:
    return oplus(s).mass


def mass_center(s: PointSet) -> NDArray[np.float64]:
    """Point of the summed vector; NoMassCenterError when it vanishes"""
    return decompose(oplus(s))[1]


# ============================================================================
# Two material points
# ============================================================================

def _validate_pair(m_a: float, m_b: float, d: float, g: Geometry) -> None:
    if not (m_a > 0 and m_b > 0):
        raise DomainError(f"Masses must be positive, got {m_a!r} and {m_b!r}")
    if not d >= 0:
        raise DomainError(f"Distance must be non-negative, got {d!r}")
    if g.is_spherical and d > np.pi:
        raise DomainError(f"Spherical distance {d!r} exceeds pi")


def deviation(m_a: float, m_b: float, d: float, g: Geometry) -> float:
    """m_cen^2 - m_tot^2 = 2 m_a m_b (cos_X d - 1)"""
    _validate_pair(m_a, m_b, d, g)
    if g.is_euclidean:
        return 0.0
    return float(-g.delta * 4.0 * m_a * m_b * sinx(d / 2.0, g) ** 2)


def centered_mass_two(m_a: float, m_b: float, d: float, g: Geometry) -> float:
    """sqrt(m_a^2 + m_b^2 + 2 m_a m_b cos_X d)"""
    _validate_pair(m_a, m_b, d, g)
    if g.is_spherical:
        # half-angle form stays accurate near the antipodal limit
        sq = (m_a - m_b) ** 2 + 4.0 * m_a * m_b * np.cos(d / 2.0) ** 2
    else:
        sq = (m_a + m_b) ** 2 + deviation(m_a, m_b, d, g)
    return float(np.sqrt(max(sq, 0.0)))


def place_pair(m_a: float, m_b: float, d: float, g: Geometry) -> Tuple[MaterialVector, MaterialVector]:
    """Explicit material vectors: m_a at the pole, m_b at distance d along e_1"""
    _validate_pair(m_a, m_b, d, g)
    pole = g.pole()
    b_point = exp_point(pole, g.basis_vector(0), d, g)
    return MaterialVector(g, m_a * pole), MaterialVector(g, m_b * b_point)


@dataclass(frozen=True)
class TwoPointSolution:
    geometry: Geometry
    m_a: float
    m_b: float
    d: float
    d1: float
    d2: float
    m_cen: float
    m_tot: float

    @property
    def m_cen_lever(self) -> float:
        """m_a cos_X d1 + m_b cos_X d2, a second expression for m_cen"""
        g = self.geometry
        return float(self.m_a * cosx(self.d1, g) + self.m_b * cosx(self.d2, g))

    @property
    def lever_residual(self) -> float:
        g = self.geometry
        return float(abs(self.m_a * sinx(self.d1, g) - self.m_b * sinx(self.d2, g)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'geometry': self.geometry.to_dict(),
            'm_a': self.m_a,
            'm_b': self.m_b,
            'd': self.d,
            'd1': self.d1,
            'd2': self.d2,
            'm_cen': self.m_cen,
            'm_cen_lever': self.m_cen_lever,
            'm_tot': self.m_tot,
            'deviation': deviation(self.m_a, self.m_b, self.d, self.geometry),
            'lever_residual': self.lever_residual,
        }


def _lever_closed_form(m_a: float, m_b: float, d: float, g: Geometry) -> float:
    if g.is_euclidean:
        return m_b * d / (m_a + m_b)
    if g.is_spherical:
        return float(np.arctan2(m_b * np.sin(d), m_a + m_b * np.cos(d)))
    # atanh(N / D) written as half the log of (D + N) / (D - N)
    la, lb = np.log(m_a), np.log(m_b)
    return float(0.5 * (np.logaddexp(la, lb + d) - np.logaddexp(la, lb - d)))


def locate_center(m_a: float, m_b: float, d: float, g: Geometry) -> TwoPointSolution:
    """Distances d1, d2 from each point to the mass center (lever law m_a sin_X d1 = m_b sin_X d2)"""
    _validate_pair(m_a, m_b, d, g)
    if g.is_spherical and np.pi - d < ANTIPODAL_TOL and abs(m_a - m_b) <= ANTIPODAL_TOL * max(m_a, m_b):
        raise NoMassCenterError("Antipodal points with equal masses have no mass center")

    d1 = min(max(_lever_closed_form(m_a, m_b, d, g), 0.0), d)
    residual = abs(m_a * sinx(d1, g) - m_b * sinx(d - d1, g))
    if residual > LEVER_TOL * max(1.0, m_a + m_b):
        logger.debug(f"Lever closed form residual {residual:.3e}; bisecting on [0, {d}]")
        d1 = bisect(lambda x: m_a * sinx(x, g) - m_b * sinx(d - x, g), 0.0, d, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    return TwoPointSolution(
        geometry=g,
        m_a=float(m_a),
        m_b=float(m_b),
        d=float(d),
        d1=float(d1),
        d2=float(d - d1),
        m_cen=centered_mass_two(m_a, m_b, d, g),
        m_tot=float(m_a + m_b),
    )


def midpoint(p: ArrayLike, q: ArrayLike, g: Geometry) -> NDArray[np.float64]:
    """[p + q], the mass center of equal masses at p and q"""
    p = project_to_space(p, g)
    q = project_to_space(q, g)
    if g.is_spherical and np.linalg.norm(p + q) < ANTIPODAL_TOL:
        raise NoMassCenterError("The midpoint of antipodal points does not exist")
    return decompose(MaterialVector(g, p + q))[1]


__all__ = [
    "PointSet",
    "TwoPointSolution",
    "pairwise_sum",
    "random_points",
    "random_point_set",
    "oplus",
    "total_mass",
    "centered_mass",
    "mass_center",
    "deviation",
    "centered_mass_two",
    "place_pair",
    "locate_center",
    "midpoint",
]
