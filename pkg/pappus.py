"""
Pappus solids: volumes as line integrals along the centroid curve

A solid laminated by hyperplanar leaves L_t, whose mass centers trace a curve
parametrised by arclength t in [0, T], has total mass equal to the integral
of m_cen(L_t) cos(theta_t) dt, theta_t being the angle between the curve and
the leaf's polar vector.  The catalogue solids (torus and cones) all have
theta_t = 0.

Oracles estimate the same volumes without the line integral: Monte Carlo in
polar coordinates around the pole, and full-dimensional quadrature over an
explicit parametrisation of the solid.
"""
from __future__ import annotations

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Callable, Dict, Optional, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ambient import Geometry, arctanx, polar_box, polar_chart, polar_volume_weight, sinx, tanx
from errors import DomainError, OracleError
from manifolds import ngon_apothem, ngon_centered_area, unit_ball_volume
from masscenter import pairwise_sum
from quadrature import QuadratureConfig, QuadratureResult, integrate_1d

if TYPE_CHECKING:
    from solids.base import BaseSolid

logger = logging.getLogger(__name__)

MC_CHUNK = 1 << 18
PROFILE_SAMPLES = 257
_PAPPUS_QUAD = QuadratureConfig(rel_tol=1e-12, abs_tol=1e-15)

ProfileFunction = Callable[[float], float]


@dataclass(frozen=True, eq=False)
class PappusProfile:
    """Leaf centered mass and slant cosine along a centroid curve of length T"""

    length: float
    leaf_centered_mass: ProfileFunction
    slant_cos: ProfileFunction = lambda t: 1.0
    breakpoints: Tuple[float, ...] = ()
    name: str = "profile"

    def validate(self, samples: int = PROFILE_SAMPLES) -> None:
        if not self.length >= 0:
            raise DomainError(f"Profile length must be non-negative, got {self.length!r}")
        if self.length == 0:
            return
        ts = np.linspace(0.0, self.length, samples)
        dt = ts[1] - ts[0]
        leaf = np.array([float(self.leaf_centered_mass(t)) for t in ts])
        slant = np.array([float(self.slant_cos(t)) for t in ts])
        if np.any(~np.isfinite(leaf)) or np.any(leaf < -1e-14):
            raise DomainError(f"{self.name}: leaf centered mass must be finite and non-negative")
        if np.any(slant < -1e-14) or np.any(slant > 1.0 + 1e-14):
            raise DomainError(f"{self.name}: slant cosine must lie in [0, 1]")
        for label, f, values in (("leaf centered mass", self.leaf_centered_mass, leaf),
                                 ("slant cosine", self.slant_cos, slant)):
            for i in np.flatnonzero(np.abs(np.diff(values)) > 1e3 * dt):
                if _is_jump(f, float(ts[i]), float(ts[i + 1])):
                    raise DomainError(f"{self.name}: {label} jumps near t={ts[i]:.6g}")


def _is_jump(f: ProfileFunction, a: float, b: float, levels: int = 30) -> bool:
    """Bisect toward the larger increment; a continuous f shrinks it, a jump keeps it"""
    fa, fb = float(f(a)), float(f(b))
    size = abs(fb - fa)
    for _ in range(levels):
        mid = 0.5 * (a + b)
        fm = float(f(mid))
        if abs(fm - fa) >= abs(fb - fm):
            b, fb = mid, fm
        else:
            a, fa = mid, fm
    return abs(fb - fa) > 0.5 * size


def pappus_integral(p: PappusProfile, q: Optional[QuadratureConfig] = None) -> QuadratureResult:
    p.validate()
    split = min(p.length / 10.0, 0.05)
    points = sorted(set((split,) + tuple(p.breakpoints)))
    return integrate_1d(lambda t: p.leaf_centered_mass(t) * p.slant_cos(t), 0.0, p.length,
                        q or _PAPPUS_QUAD, points=points)


def pappus_total_mass(p: PappusProfile, q: Optional[QuadratureConfig] = None) -> float:
    """Integral of m_cen(L_t) cos(theta_t) over the centroid curve"""
    return float(pappus_integral(p, q).value)


def slant_angle_profile(leaf_centered_mass: Union[float, ProfileFunction],
                        angle: Union[float, ProfileFunction], length: float) -> PappusProfile:
    """Profile with slanted leaves, the angle given in radians within [0, pi/2]"""
    leaf = leaf_centered_mass if callable(leaf_centered_mass) else (lambda t, m=float(leaf_centered_mass): m)
    theta = angle if callable(angle) else (lambda t, a=float(angle): a)
    return PappusProfile(length, leaf, lambda t: float(np.cos(theta(t))), name="slanted")


# ============================================================================
# Validity ranges
# ============================================================================

def check_torus(R: float, r: float, g: Geometry) -> None:
    if not (R > 0 and r >= 0):
        raise DomainError(f"Torus needs R > 0 and r >= 0, got R={R!r}, r={r!r}")
    if r > R:
        raise DomainError(f"Torus tube radius {r!r} exceeds its center radius {R!r}")
    if g.is_spherical and not R + r < np.pi / 2:
        raise DomainError(f"Spherical torus needs R + r < pi/2, got {R + r!r}")


def check_cone(r: float, h: float, g: Geometry) -> None:
    if not (r >= 0 and h >= 0):
        raise DomainError(f"Cone needs r >= 0 and h >= 0, got r={r!r}, h={h!r}")
    if g.is_spherical and not (r < np.pi / 2 and h < np.pi / 2):
        raise DomainError(f"Spherical cone needs r, h < pi/2, got r={r!r}, h={h!r}")


# ============================================================================
# Closed forms and sections
# ============================================================================

def volume_torus(R: float, r: float, g: Geometry) -> float:
    """2 pi^2 sin_X R sin_X^2 r"""
    check_torus(R, r, g)
    return float(2.0 * np.pi ** 2 * sinx(R, g) * sinx(r, g) ** 2)


def cone_section_radius(r: float, h: float, t: ArrayLike, g: Geometry):
    """Radius alpha of the section at height t: cot_X alpha sin_X t = cot_X r sin_X h"""
    check_cone(r, h, g)
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0) or np.any(t_arr > h * (1 + 1e-12)):
        raise DomainError(f"Section height must lie in [0, {h!r}]")
    if h == 0:
        return np.zeros_like(t_arr) if t_arr.ndim else 0.0
    alpha = arctanx(tanx(r, g) * sinx(np.minimum(t_arr, h), g) / sinx(h, g), g)
    return alpha if np.ndim(alpha) else float(alpha)


def volume_right_circular_cone(r: float, h: float, g: Geometry) -> float:
    check_cone(r, h, g)
    if g.is_euclidean:
        return float(np.pi * r ** 2 * h / 3.0)
    if h == 0 or r == 0:
        return 0.0
    if g.is_spherical:
        root = np.sqrt(np.tan(r) ** 2 + np.sin(h) ** 2)
        return float(np.pi * (h - np.sin(h) / root * np.arctan(root / np.cos(h))))
    root = np.sqrt(np.tanh(r) ** 2 + np.sinh(h) ** 2)
    return float(np.pi * (-h + np.sinh(h) / root * np.arctanh(root / np.cosh(h))))


def _ball_cone_integrand(a: float, n: int, g: Geometry) -> ProfileFunction:
    """sin_X^{n-1} of the section radius, written as (sin_X^2 t / (a^2 -+ sin_X^2 t))^{(n-1)/2}"""
    def f(t):
        s2 = sinx(t, g) ** 2
        return (s2 / (a ** 2 + g.delta * s2)) ** (0.5 * (n - 1))
    return f


def volume_ball_base_cone(n: int, r: float, h: float, g: Geometry, q: Optional[QuadratureConfig] = None) -> float:
    """Cone over an (n-1)-ball of radius r at height h in X^n"""
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"Ball-base cone needs dimension n >= 2, got {n!r}")
    check_cone(r, h, g)
    base = unit_ball_volume(n - 1)
    if g.is_euclidean:
        return base * r ** (n - 1) * h / n
    if h == 0 or r == 0:
        return 0.0
    a = sinx(h, g) / tanx(r, g)
    f = _ball_cone_integrand(a, n, g)
    if g.is_hyperbolic and not a ** 2 > np.sinh(h) ** 2:
        raise DomainError("Hyperbolic ball-base cone integrand has a pole inside [0, h]")
    return base * integrate_1d(f, 0.0, h, q or _PAPPUS_QUAD, points=[min(h / 10.0, 0.05)]).value


def ngon_section(n: int, a: float, h: float, t: float, g: Geometry) -> Tuple[float, float]:
    """Apothem alpha and edge gamma of the n-gon section at height t"""
    check_cone(0.0, h, g)
    if not 0 <= t <= h * (1 + 1e-12):
        raise DomainError(f"Section height must lie in [0, {h!r}]")
    if h == 0:
        return 0.0, 0.0
    b = ngon_apothem(n, a, g)
    alpha = float(arctanx(tanx(b, g) * sinx(min(t, h), g) / sinx(h, g), g))
    gamma = float(2.0 * arctanx(np.tan(np.pi / n) * sinx(alpha, g), g))
    return alpha, gamma


def check_ngon_cone(n: int, a: float, h: float, g: Geometry) -> None:
    ngon_apothem(n, a, g)
    check_cone(0.0, h, g)


def volume_ngon_cone(n: int, a: float, h: float, g: Geometry, q: Optional[QuadratureConfig] = None) -> float:
    """Pyramid over a regular n-gon of edge a at height h in X^3"""
    check_ngon_cone(n, a, h, g)
    if g.is_euclidean:
        return ngon_centered_area(n, a, g) * h / 3.0
    if h == 0 or a == 0:
        return 0.0
    cot_b = 1.0 / float(tanx(ngon_apothem(n, a, g), g))
    tan_pi_n = np.tan(np.pi / n)

    def f(t):
        s = sinx(t, g)
        sin_alpha = s / np.sqrt((cot_b * sinx(h, g)) ** 2 + g.delta * s ** 2)
        return n * arctanx(tan_pi_n * sin_alpha, g) * sin_alpha

    return integrate_1d(f, 0.0, h, q or _PAPPUS_QUAD, points=[min(h / 10.0, 0.05)]).value


# ============================================================================
# Profiles of the catalogue solids
# ============================================================================

def torus_profile(R: float, r: float, g: Geometry) -> PappusProfile:
    check_torus(R, r, g)
    leaf = float(np.pi * sinx(r, g) ** 2)
    return PappusProfile(float(2.0 * np.pi * sinx(R, g)), lambda t: leaf, name="torus")


def cone_profile(r: float, h: float, g: Geometry) -> PappusProfile:
    check_cone(r, h, g)
    return PappusProfile(h, lambda t: float(np.pi * sinx(cone_section_radius(r, h, t, g), g) ** 2),
                         name="cone")


def ball_cone_profile(n: int, r: float, h: float, g: Geometry) -> PappusProfile:
    check_cone(r, h, g)
    base = unit_ball_volume(n - 1)
    return PappusProfile(h, lambda t: float(base * sinx(cone_section_radius(r, h, t, g), g) ** (n - 1)),
                         name=f"ball-cone n={n}")


def ngon_cone_profile(n: int, a: float, h: float, g: Geometry) -> PappusProfile:
    check_ngon_cone(n, a, h, g)
    return PappusProfile(h, lambda t: ngon_centered_area(n, ngon_section(n, a, h, t, g)[1], g),
                         name=f"{n}-gon cone")


# ============================================================================
# Oracles
# ============================================================================

@dataclass
class OracleReport:
    value: float
    error_estimate: float
    count: int
    method: str
    seed: Optional[int] = None
    elapsed: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        data = {
            'method': self.method,
            'value': self.value,
            'stderr': self.error_estimate,
            'n': self.count,
        }
        if self.seed is not None:
            data['seed'] = self.seed
        return data


def _mc_chunk(solid: "BaseSolid", seed: int, index: int, count: int,
              lower: NDArray[np.float64], upper: NDArray[np.float64], box_volume: float) -> Tuple[float, float, int]:
    rng = np.random.Generator(np.random.Philox(seed, counter=[0, index, 0, 0]))
    params = lower + (upper - lower) * rng.random((count, len(lower)))
    inside = solid.contains(polar_chart(params, solid.geometry))
    values = np.where(inside, box_volume * polar_volume_weight(params, solid.geometry), 0.0)
    return float(np.sum(values)), float(np.sum(values ** 2)), int(np.count_nonzero(inside))


def oracle_volume_mc(solid: "BaseSolid", samples: int = 1_000_000, seed: int = 0, workers: int = 1) -> OracleReport:
    """Monte Carlo volume in polar coordinates about the pole

    Samples the polar box out to solid.bounding_radius() uniformly and averages
    the polar volume element over points inside the solid.  Chunk i draws from
    Philox(seed) with counter offset i, so the estimate depends only on seed
    and samples.
    """
    if samples < 2:
        raise OracleError(f"Monte Carlo needs at least 2 samples, got {samples}")
    if seed < 0:
        raise OracleError(f"Monte Carlo seed must be non-negative, got {seed}")
    g = solid.geometry
    radius = solid.bounding_radius()
    if g.is_spherical:
        radius = min(radius, np.pi)
    lower, upper = polar_box(radius, g)
    box_volume = float(np.prod(upper - lower))
    chunks = [(i, min(MC_CHUNK, samples - start)) for i, start in enumerate(range(0, samples, MC_CHUNK))]

    started = time.perf_counter()
    logger.info(f"Monte Carlo {solid.key} on {g}: {samples} samples, seed {seed}")

    def run(chunk):
        return _mc_chunk(solid, seed, chunk[0], chunk[1], lower, upper, box_volume)

    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partial = list(pool.map(run, chunks))
    else:
        partial = [run(c) for c in chunks]

    sums = pairwise_sum(np.array([p[:2] for p in partial]))
    accepted = sum(p[2] for p in partial)
    if accepted == 0:
        raise OracleError(f"No Monte Carlo sample landed inside {solid.key}; bounding radius {radius:g} is wrong")
    mean = sums[0] / samples
    variance = max(sums[1] / samples - mean ** 2, 0.0) * samples / (samples - 1)
    elapsed = time.perf_counter() - started
    logger.info(f"Monte Carlo {solid.key}: {mean:.8g} +- {np.sqrt(variance / samples):.2g} in {elapsed:.2f}s")
    return OracleReport(float(mean), float(np.sqrt(variance / samples)), samples, "mc", seed, elapsed)


def oracle_volume_quadrature(solid: "BaseSolid", q: Optional[QuadratureConfig] = None) -> OracleReport:
    """Full-dimensional quadrature over the solid's own parametrisation"""
    q = q or QuadratureConfig(points_per_axis=48)
    started = time.perf_counter()
    result = solid.oracle_quadrature(q)
    elapsed = time.perf_counter() - started
    logger.info(f"Quadrature {solid.key} on {solid.geometry}: {result.value:.12g} "
                f"({result.evaluations} evaluations, {elapsed:.2f}s)")
    return OracleReport(float(result.value), float(result.error), result.evaluations, "quad", None, elapsed)


__all__ = [
    "PappusProfile",
    "OracleReport",
    "pappus_integral",
    "pappus_total_mass",
    "slant_angle_profile",
    "check_torus",
    "check_cone",
    "check_ngon_cone",
    "volume_torus",
    "cone_section_radius",
    "volume_right_circular_cone",
    "volume_ball_base_cone",
    "ngon_section",
    "volume_ngon_cone",
    "torus_profile",
    "cone_profile",
    "ball_cone_profile",
    "ngon_cone_profile",
    "oracle_volume_mc",
    "oracle_volume_quadrature",
]
