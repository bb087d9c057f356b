"""
Solid torus about the pole of X^3
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ambient import cosx, dcosx, distance, exp_point, sinx
from manifolds import ManifoldPatch, integrate_patch
from pappus import PappusProfile, check_torus, torus_profile, volume_torus
from quadrature import QuadratureConfig, QuadratureResult

from .base import BaseSolid


class Torus(BaseSolid):
    """Tube of radius r around the circle of radius R centered at the pole

    The core circle is c(phi) = cos_X R e_4 + sin_X R (cos phi e_1 + sin phi e_2)
    and the leaves are the disks of radius r through c(phi) orthogonal to it.
    """

    key = "torus"
    display_name = "Solid torus"
    param_types = {'R': float, 'r': float}

    def validate(self) -> None:
        self._require_dimension(3)
        check_torus(self.params['R'], self.params['r'], self.geometry)

    def closed_form_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        return volume_torus(self.params['R'], self.params['r'], self.geometry)

    def profile(self) -> PappusProfile:
        return torus_profile(self.params['R'], self.params['r'], self.geometry)

    def bounding_radius(self) -> float:
        return self.params['R'] + self.params['r']

    def _core(self, phi: NDArray[np.float64]):
        """Core circle point c(phi) and its unit outward normal dc/dR"""
        g, R = self.geometry, self.params['R']
        u = np.zeros(np.shape(phi) + (4,))
        u[..., 0] = np.cos(phi)
        u[..., 1] = np.sin(phi)
        pole = g.pole()
        center = cosx(R, g) * pole + sinx(R, g) * u
        normal = dcosx(R, g) * pole + cosx(R, g) * u
        return center, normal

    def contains(self, points: NDArray[np.float64]) -> NDArray[np.bool_]:
        points = np.asarray(points, dtype=float)
        center, _ = self._core(np.arctan2(points[:, 1], points[:, 0]))
        return np.asarray(distance(points, center, self.geometry)) <= self.params['r']

    def tube_chart(self, params: NDArray[np.float64]) -> NDArray[np.float64]:
        """(rho, psi, phi): distance from the core, angle in the leaf, angle along the core"""
        rho, psi, phi = params[:, 0], params[:, 1], params[:, 2]
        center, normal = self._core(phi)
        e3 = self.geometry.basis_vector(2)
        direction = np.cos(psi)[:, None] * normal + np.sin(psi)[:, None] * e3
        return exp_point(center, direction, rho, self.geometry)

    def oracle_quadrature(self, q: QuadratureConfig) -> QuadratureResult:
        patch = ManifoldPatch(self.geometry, 3, [0.0, 0.0, 0.0], [self.params['r'], 2 * np.pi, 2 * np.pi],
                              self.tube_chart, name="torus tube")
        result = integrate_patch(patch, q)
        return QuadratureResult(result.total_mass, result.error, result.evaluations, q.method)
