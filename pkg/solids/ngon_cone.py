"""
Pyramid over a regular n-gon in X^3
"""
from __future__ import annotations

from typing import Optional

import numpy as np
from numpy.typing import NDArray

from ambient import bilinear_form, sinx, tanx
from manifolds import ManifoldPatch, integrate_patch, ngon_apothem, ngon_circumradius
from pappus import PappusProfile, check_ngon_cone, ngon_cone_profile, volume_ngon_cone
from quadrature import QuadratureConfig, QuadratureResult

from .base import BaseSolid, slant_height
from .cones import apex_polar_chart, base_center, project_to_base


class NgonCone(BaseSolid):
    """Apex at the pole, base a regular n-gon with edge a at height h

    Apothems of the base point along psi_k = 2 pi k / n in the (e_1, e_2) plane.
    """

    key = "ngon-cone"
    display_name = "Regular n-gon cone"
    param_types = {'n': int, 'a': float, 'h': float}

    @property
    def sides(self) -> int:
        return self.params['n']

    def validate(self) -> None:
        self._require_dimension(3)
        check_ngon_cone(self.sides, self.params['a'], self.params['h'], self.geometry)

    def closed_form_volume(self, q: Optional[QuadratureConfig] = None) -> float:
        return volume_ngon_cone(self.sides, self.params['a'], self.params['h'], self.geometry, q)

    def profile(self) -> PappusProfile:
        return ngon_cone_profile(self.sides, self.params['a'], self.params['h'], self.geometry)

    def bounding_radius(self) -> float:
        circumradius = ngon_circumradius(self.sides, self.params['a'], self.geometry)
        return slant_height(self.params['h'], circumradius, self.geometry)

    def contains(self, points: NDArray[np.float64]) -> NDArray[np.bool_]:
        """tan_X(sigma) cos(psi - psi_k) <= tan_X(apothem) for every k, in base-plane polar coordinates"""
        g, h = self.geometry, self.params['h']
        hit, ok = project_to_base(np.asarray(points, dtype=float), h, g)
        cos_sigma = np.ones(len(hit)) if g.is_euclidean else g.delta * np.asarray(bilinear_form(hit, base_center(h, g), g))
        psi_k = 2.0 * np.pi * np.arange(self.sides) / self.sides
        reach = hit[:, 0:1] * np.cos(psi_k) + hit[:, 1:2] * np.sin(psi_k)
        limit = float(tanx(ngon_apothem(self.sides, self.params['a'], g), g))
        return ok & (cos_sigma > 0) & np.all(reach <= limit * cos_sigma[:, None], axis=1)

    def oracle_quadrature(self, q: QuadratureConfig) -> QuadratureResult:
        """One sector about the apothem direction psi = 0, times n"""
        g, h, n = self.geometry, self.params['h'], self.sides
        if self.params['a'] == 0 or h == 0:
            return QuadratureResult(0.0, 0.0, 0, q.method)
        tan_b = float(tanx(ngon_apothem(n, self.params['a'], g), g))
        sin_h = float(sinx(h, g))
        chart = apex_polar_chart(h, g, lambda psi: np.arctan(tan_b / (np.cos(psi) * sin_h)))
        patch = ManifoldPatch(g, 3, [0.0, 0.0, -np.pi / n], [1.0, 1.0, np.pi / n], chart,
                              name=f"{n}-gon cone sector")
        result = integrate_patch(patch, q)
        return QuadratureResult(n * result.total_mass, n * result.error, result.evaluations, q.method)
