"""
Cones with apex at the pole

The axis leaves the pole along e_n; the base is the ball of radius r in the
hyperplane orthogonal to the axis at distance h.  Oracles use apex-polar
coordinates: a ray at angle theta from the axis meets the base hyperplane at
distance rho_max with tan_X rho_max cos theta = tan_X h.
"""
from __future__ import annotations

from typing import Callable, Optional, Tuple

import numpy as np
from numpy.typing import NDArray

from ambient import Geometry, arctanx, bilinear_form, cosx, dcosx, distance, exp_point, sinx, tanx
from errors import DomainError
from manifolds import ManifoldPatch, integrate_patch, unit_ball_volume
from pappus import (
    PappusProfile,
    ball_cone_profile,
    check_cone,
    cone_profile,
    volume_ball_base_cone,
    volume_right_circular_cone,
)
from quadrature import QuadratureConfig, QuadratureResult, integrate_box

from .base import BaseSolid, slant_height


def base_center(h: float, g: Geometry) -> NDArray[np.float64]:
    return exp_point(g.pole(), g.basis_vector(g.n - 1), h, g)


def base_polar_vector(h: float, g: Geometry) -> NDArray[np.float64]:
    """Polar vector of the base hyperplane, oriented away from the apex"""
    if g.is_euclidean:
        return g.basis_vector(g.n - 1) - h * g.pole()
    return dcosx(h, g) * g.pole() + cosx(h, g) * g.basis_vector(g.n - 1)


def project_to_base(points: NDArray[np.float64], h: float, g: Geometry) -> Tuple[NDArray[np.float64], NDArray[np.bool_]]:
    """Where the ray from the apex through each point meets the base hyperplane

    Returns the hit points and a mask of points lying between apex and hyperplane.
    """
    pole = g.pole()
    polar = base_polar_vector(h, g)
    p_apex = bilinear_form(polar, pole, g)
    p_x = np.asarray(bilinear_form(points, polar, g))
    hit = p_x[:, None] * pole - p_apex * points
    ok = p_x <= 0
    if g.is_euclidean:
        scale = hit[:, -1]
        ok &= scale > 0
    elif g.is_spherical:
        scale = np.linalg.norm(hit, axis=1)
        ok &= scale > 0
    else:
        norm_sq = -np.asarray(bilinear_form(hit, hit, g))
        ok &= (norm_sq > 0) & (hit[:, -1] > 0)
        scale = np.sqrt(np.where(ok, norm_sq, 1.0))
    hit = hit / np.where(ok, scale, 1.0)[:, None]
    hit[~ok] = g.pole()
    return hit, ok


def apex_polar_chart(h: float, g: Geometry, theta_max: Callable[[NDArray[np.float64]], NDArray[np.float64]]):
    """Chart of a 3-D cone on (s, u, psi): theta = u theta_max(psi), rho = s rho_max(theta)"""
    e1, e2, axis = g.basis_vector(0), g.basis_vector(1), g.basis_vector(2)

    def chart(params: NDArray[np.float64]) -> NDArray[np.float64]:
        s, u, psi = params[:, 0], params[:, 1], params[:, 2]
        theta = u * theta_max(psi)
        rho = s * arctanx(tanx(h, g) / np.cos(theta), g)
        side = np.cos(psi)[:, None] * e1 + np.sin(psi)[:, None] * e2
        direction = np.cos(theta)[:, None] * axis + np.sin(theta)[:, None] * side
        return exp_point(g.pole(), direction, rho, g)

    return chart


class BallBaseCone(BaseSolid):
    """Cone over an (n-1)-ball in X^n"""

    key = "ball-cone"
    display_name = "Cone over a ball"
    param_types = {'r': float, 'h': float, 'n': int}
    optional_params = ('n',)

    @property
    def n(self) -> int:
        return self.geometry.n

    def validate(self) -> None:
        if self.geometry.n < 2:
            raise DomainError(f"{self.display_name} needs dimension >= 2, not {self.geometry}")
        if 'n' in self.params:
            self._require_dimension(self.params['n'])
        check_cone(self.params['r'], self.params['h'], self.geometry)

    @property
    def apex_angle(self) -> float:
        """theta_0 with tan theta_0 = tan_X r / sin_X h"""
        g = self.geometry
        return float(np.arctan2(tanx(self.params['r'], g), sinx(self.params['h'], g)))

    def closed_form_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        return volume_ball_base_cone(self.n, self.params['r'], self.params['h'], self.geometry, q)

    def profile(self) -> PappusProfile:
        return ball_cone_profile(self.n, self.params['r'], self.params['h'], self.geometry)

    def bounding_radius(self) -> float:
        return slant_height(self.params['h'], self.params['r'], self.geometry)

    def contains(self, points: NDArray[np.float64]) -> NDArray[np.bool_]:
        g, h = self.geometry, self.params['h']
        hit, ok = project_to_base(np.asarray(points, dtype=float), h, g)
        return ok & (np.asarray(distance(hit, base_center(h, g), g)) <= self.params['r'])

    def oracle_quadrature(self, q: QuadratureConfig) -> QuadratureResult:
        if self.params['r'] == 0 or self.params['h'] == 0:
            return QuadratureResult(0.0, 0.0, 0, q.method)
        if self.n == 3:
            theta0 = self.apex_angle
            chart = apex_polar_chart(self.params['h'], self.geometry, lambda psi: np.full_like(psi, theta0))
            patch = ManifoldPatch(self.geometry, 3, [0.0, 0.0, 0.0], [1.0, 1.0, 2 * np.pi], chart,
                                  name=f"{self.key} apex-polar")
            result = integrate_patch(patch, q)
            return QuadratureResult(result.total_mass, result.error, result.evaluations, q.method)
        return self._reduced_quadrature(q)

    def _reduced_quadrature(self, q: QuadratureConfig) -> QuadratureResult:
        """Rotational reduction to (theta, rho); the S^{n-2} of directions integrates to (n-1) V_{n-1}"""
        g, h, n = self.geometry, self.params['h'], self.n
        theta0 = self.apex_angle
        sphere_area = (n - 1) * unit_ball_volume(n - 1)

        def integrand(params):
            theta = params[:, 0] * theta0
            rho_max = arctanx(tanx(h, g) / np.cos(theta), g)
            rho = params[:, 1] * rho_max
            return sphere_area * np.sin(theta) ** (n - 2) * np.abs(sinx(rho, g)) ** (n - 1) * theta0 * rho_max

        return integrate_box(integrand, [0.0, 0.0], [1.0, 1.0], q)


class RightCircularCone(BallBaseCone):
    """Cone over a disk in X^3"""

    key = "cone"
    display_name = "Right circular cone"
    param_types = {'r': float, 'h': float}
    optional_params = ()

    def validate(self) -> None:
        self._require_dimension(3)
        check_cone(self.params['r'], self.params['h'], self.geometry)

    def closed_form_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        return volume_right_circular_cone(self.params['r'], self.params['h'], self.geometry)

    def profile(self) -> PappusProfile:
        return cone_profile(self.params['r'], self.params['h'], self.geometry)
