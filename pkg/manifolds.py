"""
Mass centers of continuous distributions

A patch is a chart from an axis-aligned parameter box into the ambient space
with a density; its mass-center vector is the integral of rho * r dV and its
total mass the integral of rho dV, where dV is the volume element
sqrt|det(Dr^T J Dr)|.  Closed forms for balls, spheres and regular polygons
live here too.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from numpy.typing import NDArray
from scipy.special import gammaln

from ambient import (
    Geometry,
    MaterialVector,
    arcsinx,
    arctanx,
    cosx,
    exp_point,
    on_space_defect,
    polar_box,
    polar_chart,
    sinx,
    sphere_direction,
    tanx,
)
from errors import DimensionMismatchError, DomainError, OffSpaceError, QuadratureError
from masscenter import pairwise_sum
from quadrature import QuadratureConfig, QuadratureResult, integrate_1d, integrate_box

logger = logging.getLogger(__name__)

FD_STEP = 1e-6
CHART_TOL = 1e-9
_CLOSED_FORM_QUAD = QuadratureConfig(rel_tol=1e-13, abs_tol=1e-15)

Chart = Callable[[NDArray[np.float64]], NDArray[np.float64]]


@dataclass(frozen=True, eq=False)
class ManifoldPatch:
    """A k-dimensional chart with density

    Args:
        geometry: space the chart maps into
        k: parameter dimension
        lower, upper: parameter box
        chart: (M, k) parameters -> (M, n+1) points on the space
        density: (M, k) -> (M,) non-negative weights; None means rho = 1
        jacobian: optional analytic derivative (M, k) -> (M, n+1, k)
    """

    geometry: Geometry
    k: int
    lower: NDArray[np.float64]
    upper: NDArray[np.float64]
    chart: Chart
    density: Optional[Callable[[NDArray[np.float64]], NDArray[np.float64]]] = None
    jacobian: Optional[Callable[[NDArray[np.float64]], NDArray[np.float64]]] = None
    name: str = "patch"

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float))
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float))
        if self.k < 1 or lower.shape != (self.k,) or upper.shape != (self.k,):
            raise DimensionMismatchError(f"Patch box must have {self.k} axes")
        if self.k > self.geometry.n:
            raise DimensionMismatchError(f"A {self.k}-dimensional patch does not fit in {self.geometry}")
        if np.any(upper < lower):
            raise DomainError("Patch box bounds are reversed")
        object.__setattr__(self, 'lower', lower)
        object.__setattr__(self, 'upper', upper)

    def rho(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        if self.density is None:
            return np.ones(len(params))
        return np.asarray(self.density(params), dtype=float)

    def chart_jacobian(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        """(M, n+1, k) derivative of the chart, central differences unless supplied"""
        if self.jacobian is not None:
            return np.asarray(self.jacobian(params), dtype=float)
        columns = []
        for axis in range(self.k):
            step = np.zeros(self.k)
            step[axis] = FD_STEP
            columns.append((self.chart(params + step) - self.chart(params - step)) / (2.0 * FD_STEP))
        return np.stack(columns, axis=-1)

    def volume_element(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        jac = self.chart_jacobian(params)
        gram = np.einsum('mik,ij,mjl->mkl', jac, self.geometry.J, jac)
        return np.sqrt(np.abs(np.linalg.det(gram)))

    def validate(self, samples: int = 16, seed: int = 0) -> None:
        """Spot-check that the chart lands on the space and the density is non-negative"""
        rng = np.random.default_rng(seed)
        params = rng.uniform(self.lower, self.upper, (samples, self.k))
        defect = np.max(on_space_defect(self.chart(params), self.geometry))
        if defect >= CHART_TOL:
            raise OffSpaceError(f"Chart of {self.name} leaves {self.geometry}: defect {defect:.3e}")
        if np.any(self.rho(params) < 0):
            raise DomainError(f"Density of {self.name} is negative")


@dataclass(frozen=True)
class PatchIntegral:
    vector: MaterialVector
    total_mass: float
    error: float
    evaluations: int


def integrate_patch(m: ManifoldPatch, q: Optional[QuadratureConfig] = None) -> PatchIntegral:
    """One tensor pass for both integral of rho r dV and integral of rho dV"""
    q = q or QuadratureConfig.preset("standard", m.k)
    m.validate()
    dim = m.geometry.dim

    def integrand(params):
        vol = m.volume_element(params)
        weight = m.rho(params) * vol
        return np.concatenate([weight[:, None] * m.chart(params), weight[:, None], vol[:, None]], axis=1)

    result: QuadratureResult = integrate_box(integrand, m.lower, m.upper, q)
    value = np.asarray(result.value)
    if value[dim + 1] <= 0 and np.all(m.upper > m.lower):
        raise QuadratureError(f"Chart of {m.name} is degenerate across its whole box")
    coords = value[:dim]
    logger.debug(f"{m.name}: {result.evaluations} evaluations, error {result.error:.3e}")
    return PatchIntegral(
        vector=MaterialVector(m.geometry, coords),
        total_mass=float(value[dim]),
        error=result.error,
        evaluations=result.evaluations,
    )


def mass_center_integral(m: ManifoldPatch, q: Optional[QuadratureConfig] = None) -> MaterialVector:
    return integrate_patch(m, q).vector


def total_mass_integral(m: ManifoldPatch, q: Optional[QuadratureConfig] = None) -> float:
    return integrate_patch(m, q).total_mass


def mass_center_of_union(patches: Sequence[ManifoldPatch], q: Optional[QuadratureConfig] = None) -> MaterialVector:
    """Sum of the pieces' mass-center vectors, for a partition into patches"""
    if not patches:
        raise DimensionMismatchError("Union of no patches")
    g = patches[0].geometry
    if any(p.geometry != g for p in patches):
        raise DimensionMismatchError("Patches of a union must share a geometry")
    return MaterialVector(g, pairwise_sum(np.stack([mass_center_integral(p, q).coords for p in patches])))


def total_mass_of_union(patches: Sequence[ManifoldPatch], q: Optional[QuadratureConfig] = None) -> float:
    return float(pairwise_sum(np.array([total_mass_integral(p, q) for p in patches])))


# ============================================================================
# Closed forms: balls and spheres
# ============================================================================

def unit_ball_volume(k: int) -> float:
    """pi^{k/2} / Gamma(k/2 + 1)"""
    return float(np.exp(0.5 * k * np.log(np.pi) - gammaln(0.5 * k + 1.0)))


def _check_radius(k: int, r: float, g: Geometry, min_k: int = 1) -> None:
    if isinstance(k, bool) or int(k) != k or k < min_k:
        raise DomainError(f"Dimension must be an integer >= {min_k}, got {k!r}")
    if not r >= 0:
        raise DomainError(f"Radius must be non-negative, got {r!r}")
    if g.is_spherical and r > np.pi:
        raise DomainError(f"Spherical radius {r!r} exceeds pi")


def _sinx_snapped(r: float, g: Geometry) -> float:
    if g.is_spherical and np.isclose(r, np.pi, rtol=0.0, atol=1e-12):
        return 0.0
    return float(sinx(r, g))


def ball_centered_mass(k: int, r: float, g: Geometry) -> float:
    """V_k sin_X^k r; zero for the spherical ball of radius pi"""
    _check_radius(k, r, g)
    return unit_ball_volume(k) * _sinx_snapped(r, g) ** k


def ball_total_mass(k: int, r: float, g: Geometry) -> float:
    """V_k k times the integral of sin_X^{k-1} over [0, r]"""
    _check_radius(k, r, g)
    if g.is_euclidean:
        return unit_ball_volume(k) * r ** k
    if k == 1:
        return 2.0 * r
    radial = integrate_1d(lambda t: sinx(t, g) ** (k - 1), 0.0, r, _CLOSED_FORM_QUAD)
    return unit_ball_volume(k) * k * radial.value


def sphere_total_mass(k: int, r: float, g: Geometry) -> float:
    """(k + 1) V_{k+1} sin_X^k r"""
    _check_radius(k, r, g, min_k=0)
    return (k + 1) * unit_ball_volume(k + 1) * _sinx_snapped(r, g) ** k


def sphere_centered_mass(k: int, r: float, g: Geometry) -> float:
    """Total mass times cos_X r; negative past the equator of S^n"""
    return sphere_total_mass(k, r, g) * float(cosx(r, g))


# ============================================================================
# Closed forms: regular n-gons
# ============================================================================

def _check_ngon(n: int, a: float, g: Geometry) -> None:
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise DomainError(f"A regular polygon needs n >= 3 sides, got {n!r}")
    if not a >= 0:
        raise DomainError(f"Edge length must be non-negative, got {a!r}")
    if g.is_spherical and not a / 2.0 < np.pi / n:
        raise DomainError(f"Spherical {n}-gon with edge {a!r} does not fit in an open hemisphere")


def ngon_centered_area(n: int, a: float, g: Geometry) -> float:
    """(n a / 2) tan_X(a/2) cot(pi/n)"""
    _check_ngon(n, a, g)
    return float(0.5 * n * a * tanx(0.5 * a, g) / np.tan(np.pi / n))


def ngon_total_area(n: int, a: float, g: Geometry) -> float:
    """Area from the interior angle beta: sin(beta/2) = cos(pi/n) / cos_X(a/2)"""
    _check_ngon(n, a, g)
    if g.is_euclidean:
        return float(0.25 * n * a ** 2 / np.tan(np.pi / n))
    half_angle = np.arcsin(min(np.cos(np.pi / n) / float(cosx(0.5 * a, g)), 1.0))
    excess = n * 2.0 * half_angle - (n - 2) * np.pi
    return float(g.delta * excess)


def ngon_apothem(n: int, a: float, g: Geometry) -> float:
    """b with tan_X(a/2) = tan(pi/n) sin_X b"""
    _check_ngon(n, a, g)
    return float(arcsinx(tanx(0.5 * a, g) / np.tan(np.pi / n), g))


def ngon_circumradius(n: int, a: float, g: Geometry) -> float:
    """r with sin_X(a/2) = sin(pi/n) sin_X r"""
    _check_ngon(n, a, g)
    return float(arcsinx(sinx(0.5 * a, g) / np.sin(np.pi / n), g))


def ngon_edge_from_circumradius(n: int, c: float, g: Geometry) -> float:
    if isinstance(n, bool) or int(n) != n or n < 3:
        raise DomainError(f"A regular polygon needs n >= 3 sides, got {n!r}")
    if not c >= 0 or (g.is_spherical and c >= np.pi / 2):
        raise DomainError(f"Circumradius {c!r} out of range for {g}")
    return float(2.0 * arcsinx(np.sin(np.pi / n) * sinx(c, g), g))


# ============================================================================
# Built-in patches
# ============================================================================

def _embed(points: NDArray[np.float64], ambient_n: int) -> NDArray[np.float64]:
    """X^k sits in X^N as the span of e_1..e_k and e_{N+1}"""
    k = points.shape[-1] - 1
    if ambient_n == k:
        return points
    pad = np.zeros(points.shape[:-1] + (ambient_n - k,))
    return np.concatenate([points[..., :-1], pad, points[..., -1:]], axis=-1)


def _ambient(k: int, g: Geometry, ambient_n: Optional[int]) -> Geometry:
    ambient_n = k if ambient_n is None else int(ambient_n)
    if ambient_n < k:
        raise DimensionMismatchError(f"Cannot place a {k}-dimensional patch in dimension {ambient_n}")
    return g.with_dimension(ambient_n)


def ball_patch(k: int, r: float, g: Geometry, ambient_n: Optional[int] = None) -> List[ManifoldPatch]:
    """Geodesic ball B^k(r) about the pole in polar coordinates"""
    _check_radius(k, r, g)
    inner = g.with_dimension(k)
    outer = _ambient(k, g, ambient_n)
    lower, upper = polar_box(r, inner)
    return [ManifoldPatch(
        geometry=outer,
        k=k,
        lower=lower,
        upper=upper,
        chart=lambda params: _embed(polar_chart(params, inner), outer.n),
        name=f"ball B^{k}({r:g}) in {outer}",
    )]


def sphere_shell_patch(k: int, r: float, g: Geometry, ambient_n: Optional[int] = None) -> List[ManifoldPatch]:
    """Geodesic sphere S^k(r) about the pole of X^{k+1}"""
    _check_radius(k, r, g)
    inner = g.with_dimension(k + 1)
    outer = _ambient(k + 1, g, ambient_n)
    upper = np.full(k, np.pi)
    upper[-1] = 2.0 * np.pi

    def chart(params):
        direction = np.concatenate([sphere_direction(params), np.zeros((len(params), 1))], axis=1)
        return _embed(exp_point(inner.pole(), direction, r, inner), outer.n)

    return [ManifoldPatch(outer, k, np.zeros(k), upper, chart, name=f"sphere S^{k}({r:g}) in {outer}")]


def ngon_patch(n: int, a: float, g: Geometry) -> List[ManifoldPatch]:
    """Regular n-gon about the pole of X^2, one triangular sector per edge

    A sector is (s, psi) in [0, 1] x [-pi/n, pi/n] with radius s * rho_max(psi)
    and tan_X rho_max(psi) cos psi = tan_X(apothem).
    """
    _check_ngon(n, a, g)
    g2 = g.with_dimension(2)
    tan_b = float(tanx(ngon_apothem(n, a, g2), g2))
    patches = []
    for j in range(n):
        offset = 2.0 * np.pi * j / n

        def chart(params, offset=offset):
            s, psi = params[:, 0], params[:, 1]
            rho = s * arctanx(tan_b / np.cos(psi), g2)
            return polar_chart(np.stack([rho, psi + offset], axis=-1), g2)

        patches.append(ManifoldPatch(g2, 2, [0.0, -np.pi / n], [1.0, np.pi / n], chart,
                                     name=f"{n}-gon sector {j}"))
    return patches


_PATCH_REGISTRY: Dict[str, Callable[..., List[ManifoldPatch]]] = {
    'ball': ball_patch,
    'sphere-shell': sphere_shell_patch,
    'ngon': ngon_patch,
}


def get_patch_builder(name: str) -> Optional[Callable[..., List[ManifoldPatch]]]:
    """Return the builder registered under name"""
    if not name:
        return None
    return _PATCH_REGISTRY.get(name.lower())


def list_registered_patches() -> List[str]:
    return sorted(_PATCH_REGISTRY)


__all__ = [
    "ManifoldPatch",
    "PatchIntegral",
    "integrate_patch",
    "mass_center_integral",
    "total_mass_integral",
    "mass_center_of_union",
    "total_mass_of_union",
    "unit_ball_volume",
    "ball_centered_mass",
    "ball_total_mass",
    "sphere_total_mass",
    "sphere_centered_mass",
    "ngon_centered_area",
    "ngon_total_area",
    "ngon_apothem",
    "ngon_circumradius",
    "ngon_edge_from_circumradius",
    "ball_patch",
    "sphere_shell_patch",
    "ngon_patch",
    "get_patch_builder",
    "list_registered_patches",
]
