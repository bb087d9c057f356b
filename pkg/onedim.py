"""
One-dimensional mass-center systems

E^1 and H^1 admit a whole family F_k of mass-center systems, all invariant
under translations and the reflection x -> -x; k = 0 is the vector sum on E^1
and k = 1 the vector sum on H^1.  S^1 has only one, which the split-and-merge
process exhibits by halving the distance between two material points until
they meet at the mass center.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.special import logsumexp

from ambient import Geometry, MaterialVector, decompose, distance
from errors import DimensionMismatchError, DomainError, InputFormatError, NoMassCenterError
from masscenter import ANTIPODAL_TOL, PointSet, midpoint, oplus, place_pair

logger = logging.getLogger(__name__)

K_MAX = 50.0
EQUAL_MASS_RTOL = 1e-12


@dataclass(frozen=True)
class FkSystem:
    k: float
    geometry: Geometry

    def __post_init__(self):
        if self.geometry.n != 1 or self.geometry.is_spherical:
            raise DimensionMismatchError(f"F_k systems live on E^1 or H^1, not {self.geometry}")
        if not 0.0 <= self.k <= K_MAX:
            raise DomainError(f"k must lie in [0, {K_MAX:g}], got {self.k!r}")
        object.__setattr__(self, 'k', float(self.k))


def _validate_input(masses: ArrayLike, positions: ArrayLike) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    m = np.atleast_1d(np.asarray(masses, dtype=float))
    x = np.atleast_1d(np.asarray(positions, dtype=float))
    if m.size == 0:
        raise InputFormatError("F_k center of an empty input")
    if m.shape != x.shape:
        raise DimensionMismatchError(f"{m.size} masses for {x.size} positions")
    if not np.all(m > 0):
        raise DomainError("F_k masses must be positive")
    if not np.all(np.isfinite(x)):
        raise DomainError("F_k positions must be finite")
    return m, x


def fk_center(sys: FkSystem, masses: ArrayLike, positions: ArrayLike) -> Tuple[float, float]:
    """Mass and intrinsic position of the F_k mass center

    Uses M_k^2 = sum_{i,j} m_i m_j cosh k(x_i - x_j) = A B with
    A = sum m e^{kx}, B = sum m e^{-kx}, so that log M_k and
    X_k = asinh(sum m sinh(kx) / M_k) / k = log(A / B) / (2k)
    come out of two log-sum-exps.
    """
    m, x = _validate_input(masses, positions)
    if sys.k == 0.0:
        total = float(np.sum(m))
        return total, float(np.sum(m * x) / total)
    log_a = logsumexp(sys.k * x, b=m)
    log_b = logsumexp(-sys.k * x, b=m)
    return float(np.exp(0.5 * (log_a + log_b))), float((log_a - log_b) / (2.0 * sys.k))


def fk_embed(sys: FkSystem, mass: float, position: float) -> MaterialVector:
    """M (X, 1) on E^1, M (sinh X, cosh X) on H^1"""
    if sys.geometry.is_euclidean:
        point = np.array([position, 1.0])
    else:
        point = np.array([np.sinh(position), np.cosh(position)])
    return MaterialVector(sys.geometry, mass * point)


def intrinsic_position(point: ArrayLike, g: Geometry) -> float:
    """Inverse of the E^1 / H^1 embedding"""
    point = np.asarray(point, dtype=float)
    return float(point[0]) if g.is_euclidean else float(np.arcsinh(point[0]))


def standard_center(g: Geometry, masses: ArrayLike, positions: ArrayLike) -> Tuple[float, float]:
    """The vector-sum mass center expressed in the intrinsic coordinate"""
    m, x = _validate_input(masses, positions)
    unit = FkSystem(0.0, g)
    s = PointSet(g, tuple(fk_embed(unit, mi, xi) for mi, xi in zip(m, x)))
    mass, point = decompose(oplus(s))
    return mass, intrinsic_position(point, g)


def fk_invariance_check(sys: FkSystem, masses: ArrayLike, positions: ArrayLike,
                        shift: float = 0.0, reflect: bool = False) -> float:
    """Residual of F_k under x -> (+-x) + shift, in relative mass and absolute position"""
    m, x = _validate_input(masses, positions)
    mass, pos = fk_center(sys, m, x)
    sign = -1.0 if reflect else 1.0
    moved_mass, moved_pos = fk_center(sys, m, sign * x + shift)
    expected_pos = sign * pos + shift
    return float(max(abs(moved_mass - mass) / mass, abs(moved_pos - expected_pos)))


# ============================================================================
# Split and merge on S^1
# ============================================================================

@dataclass
class SplitMergeTrace:
    geometry: Geometry
    pairs: List[Tuple[MaterialVector, MaterialVector]] = field(default_factory=list)
    distances: List[float] = field(default_factory=list)
    equalized: bool = False

    @property
    def steps(self) -> int:
        return len(self.pairs)

    @property
    def limit_point(self) -> NDArray[np.float64]:
        """Midpoint of the last pair, where the nested segments shrink to"""
        a, b = self.pairs[-1]
        return midpoint(a.point, b.point, self.geometry)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'geometry': self.geometry.to_dict(),
            'steps': self.steps,
            'equalized': self.equalized,
            'distances': list(self.distances),
            'masses': [[a.mass, b.mass] for a, b in self.pairs],
            'limit_point': [float(v) for v in self.limit_point],
        }


def split_merge(a: MaterialVector, b: MaterialVector, max_steps: int = 40) -> SplitMergeTrace:
    """Repeatedly split the heavier vector so one part matches the lighter mass, then merge the equal pair

    Each step replaces (heavy, light) by ((1 - k) heavy, k heavy + light) with
    k = m_light / m_heavy; the merged part sits at the midpoint, so the
    distance halves while the vector sum is unchanged.  Stops once the two
    masses agree.
    """
    g = a.geometry
    if g != b.geometry or not g.is_spherical or g.n != 1:
        raise DimensionMismatchError(f"Split and merge runs on S^1, got {a.geometry} and {b.geometry}")
    if a.is_zero or b.is_zero:
        raise DomainError("Split and merge needs two positive masses")
    if max_steps < 1:
        raise DomainError(f"max_steps must be at least 1, got {max_steps!r}")
    if distance(a.point, b.point, g) > np.pi - ANTIPODAL_TOL:
        raise NoMassCenterError("Split and merge of antipodal points has no limit")

    trace = SplitMergeTrace(geometry=g)
    for step in range(max_steps):
        trace.pairs.append((a, b))
        trace.distances.append(distance(a.point, b.point, g))
        m_a, m_b = a.mass, b.mass
        if abs(m_a - m_b) <= EQUAL_MASS_RTOL * max(m_a, m_b):
            trace.equalized = True
            break
        if step == max_steps - 1:
            break
        heavy, light = (a, b) if m_a > m_b else (b, a)
        k = light.mass / heavy.mass
        a = MaterialVector(g, heavy.coords - k * heavy.coords)
        b = MaterialVector(g, k * heavy.coords + light.coords)
        logger.debug(f"split-merge step {step + 1}: masses {a.mass:.6g}, {b.mass:.6g}")
    return trace


def split_merge_pair(m_a: float, m_b: float, d: float, max_steps: int = 40) -> SplitMergeTrace:
    """split_merge on two material points of S^1 at distance d"""
    a, b = place_pair(m_a, m_b, d, Geometry.spherical(1))
    return split_merge(a, b, max_steps)


__all__ = [
    "K_MAX",
    "FkSystem",
    "SplitMergeTrace",
    "fk_center",
    "fk_embed",
    "intrinsic_position",
    "standard_center",
    "fk_invariance_check",
    "split_merge",
    "split_merge_pair",
]
