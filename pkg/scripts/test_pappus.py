#!/usr/bin/env python3
"""
Tests for Pappus profiles, closed-form volumes and the oracles
"""
import numpy as np
import pytest

from ambient import Geometry, GeometryKind, sinx
from errors import DomainError, OracleError
from manifolds import ngon_edge_from_circumradius
from pappus import (
    PappusProfile,
    check_torus,
    cone_section_radius,
    ngon_section,
    oracle_volume_mc,
    oracle_volume_quadrature,
    pappus_total_mass,
    slant_angle_profile,
    volume_ball_base_cone,
    volume_ngon_cone,
    volume_right_circular_cone,
    volume_torus,
)
from quadrature import QuadratureConfig, QuadratureResult
from solids import make_solid
from solids.base import BaseSolid

CURVED = [GeometryKind.SPHERICAL, GeometryKind.HYPERBOLIC]


# ============================================================================
# Profiles
# ============================================================================

def test_constant_profile():
    p = PappusProfile(2.0, lambda t: 3.0)
    assert pappus_total_mass(p) == pytest.approx(6.0, rel=1e-13)


def test_slanted_profile_weights_by_cosine():
    p = slant_angle_profile(2.0, np.pi / 3, 1.5)
    assert pappus_total_mass(p) == pytest.approx(2.0 * 0.5 * 1.5, rel=1e-12)


def test_profile_validation():
    with pytest.raises(DomainError):
        pappus_total_mass(PappusProfile(1.0, lambda t: -1.0))
    with pytest.raises(DomainError):
        pappus_total_mass(PappusProfile(1.0, lambda t: 1.0, slant_cos=lambda t: 1.5))
    with pytest.raises(DomainError):
        pappus_total_mass(PappusProfile(1.0, lambda t: 0.0 if t < 0.5 else 1e6))
    assert pappus_total_mass(PappusProfile(0.0, lambda t: 1.0)) == 0.0


def test_steep_but_continuous_profile_is_accepted():
    p = PappusProfile(3.0, lambda t: float(np.exp(4.0 * t)))
    assert pappus_total_mass(p) == pytest.approx((np.exp(12.0) - 1.0) / 4.0, rel=1e-10)


def test_large_hyperbolic_cone_line_integral():
    solid = make_solid('cone', Geometry.hyperbolic(3), r=3.0, h=3.0)
    assert solid.pappus_volume() == pytest.approx(solid.closed_form_volume(), rel=1e-8)
    assert solid.closed_form_volume() == pytest.approx(7.180955272851749, rel=1e-10)


# ============================================================================
# Closed forms
# ============================================================================

def test_spherical_torus_volume():
    g = Geometry.spherical(3)
    assert volume_torus(0.8, 0.3, g) == pytest.approx(2 * np.pi ** 2 * np.sin(0.8) * np.sin(0.3) ** 2)


def test_torus_ranges():
    with pytest.raises(DomainError):
        check_torus(0.3, 0.5, Geometry.euclidean(3))
    with pytest.raises(DomainError):
        check_torus(1.2, 0.5, Geometry.spherical(3))
    check_torus(1.2, 0.5, Geometry.hyperbolic(3))


def test_euclidean_cone_volume():
    assert volume_right_circular_cone(1.0, 3.0, Geometry.euclidean(3)) == pytest.approx(np.pi)


def test_cone_out_of_range():
    with pytest.raises(DomainError):
        volume_right_circular_cone(2.0, 2.0, Geometry.spherical(3))


def test_degenerate_cones_have_zero_volume(kind):
    g = Geometry(kind, 3)
    assert volume_right_circular_cone(0.0, 0.5, g) == 0.0
    assert volume_right_circular_cone(0.5, 0.0, g) == 0.0


def test_cone_section_radius_endpoints(kind):
    g = Geometry(kind, 3)
    assert cone_section_radius(0.4, 0.6, 0.0, g) == pytest.approx(0.0)
    assert cone_section_radius(0.4, 0.6, 0.6, g) == pytest.approx(0.4)
    with pytest.raises(DomainError):
        cone_section_radius(0.4, 0.6, 0.7, g)


@pytest.mark.parametrize('kind', CURVED)
def test_closed_forms_match_line_integrals(kind):
    g = Geometry(kind, 3)
    for key, params in (('torus', {'R': 0.8, 'r': 0.3}), ('cone', {'r': 0.4, 'h': 0.6}),
                        ('cone', {'r': 0.7, 'h': 0.9})):
        solid = make_solid(key, g, **params)
        assert solid.closed_form_volume() == pytest.approx(solid.pappus_volume(), rel=1e-10)


def test_ball_cone_in_three_dimensions_is_the_cone(kind):
    g = Geometry(kind, 3)
    assert volume_ball_base_cone(3, 0.4, 0.6, g) == pytest.approx(volume_right_circular_cone(0.4, 0.6, g), rel=1e-10)


def test_ball_cone_in_two_dimensions_is_a_triangle():
    # isosceles triangle with legs to (+-r) at height h
    assert volume_ball_base_cone(2, 0.5, 1.0, Geometry.euclidean(2)) == pytest.approx(0.5)


def test_ngon_section_endpoints(kind):
    g = Geometry(kind, 3)
    alpha, gamma = ngon_section(5, 0.6, 0.5, 0.5, g)
    assert gamma == pytest.approx(0.6, rel=1e-12)
    assert ngon_section(5, 0.6, 0.5, 0.0, g) == (0.0, 0.0)


def test_euclidean_pyramid():
    # square base of edge 2, height 3
    assert volume_ngon_cone(4, 2.0, 3.0, Geometry.euclidean(3)) == pytest.approx(4.0)


@pytest.mark.parametrize('kind', CURVED)
def test_euclidean_limit(kind):
    lam = 1e-3
    g, e = Geometry(kind, 3), Geometry.euclidean(3)
    assert volume_torus(0.8 * lam, 0.3 * lam, g) / volume_torus(0.8 * lam, 0.3 * lam, e) == pytest.approx(1.0, abs=1e-4)
    ratio = volume_right_circular_cone(0.4 * lam, 0.6 * lam, g) / volume_right_circular_cone(0.4 * lam, 0.6 * lam, e)
    assert ratio == pytest.approx(1.0, abs=1e-4)
    ratio = volume_ngon_cone(5, 0.6 * lam, 0.5 * lam, g) / volume_ngon_cone(5, 0.6 * lam, 0.5 * lam, e)
    assert ratio == pytest.approx(1.0, abs=1e-4)


# ============================================================================
# Oracles
# ============================================================================

@pytest.mark.parametrize('kind', CURVED)
def test_quadrature_oracle_torus(kind):
    params = {'R': 0.8, 'r': 0.3} if kind is GeometryKind.SPHERICAL else {'R': 1.2, 'r': 0.5}
    solid = make_solid('torus', Geometry(kind, 3), **params)
    report = oracle_volume_quadrature(solid, QuadratureConfig(points_per_axis=24))
    assert report.value == pytest.approx(solid.closed_form_volume(), rel=1e-6)
    assert report.method == "quad"


@pytest.mark.parametrize('kind', CURVED)
def test_quadrature_oracle_cone(kind):
    solid = make_solid('cone', Geometry(kind, 3), r=0.4, h=0.6)
    report = oracle_volume_quadrature(solid, QuadratureConfig(points_per_axis=24))
    assert report.value == pytest.approx(solid.closed_form_volume(), rel=1e-6)


def test_quadrature_oracle_ball_cone_in_four_dimensions(kind):
    solid = make_solid('ball-cone', Geometry(kind, 4), r=0.4, h=0.6)
    report = oracle_volume_quadrature(solid, QuadratureConfig(points_per_axis=32))
    assert report.value == pytest.approx(solid.closed_form_volume(), rel=1e-7)


def test_monte_carlo_oracle_within_four_sigma(kind):
    solid = make_solid('cone', Geometry(kind, 3), r=0.4, h=0.6)
    report = oracle_volume_mc(solid, samples=400_000, seed=3)
    assert abs(report.value - solid.closed_form_volume()) <= 4.0 * report.error_estimate
    assert report.to_dict()['seed'] == 3


def test_monte_carlo_is_reproducible_across_workers():
    solid = make_solid('torus', Geometry.spherical(3), R=0.8, r=0.3)
    one = oracle_volume_mc(solid, samples=300_000, seed=11, workers=1)
    two = oracle_volume_mc(solid, samples=300_000, seed=11, workers=3)
    assert one.value == two.value
    assert one.error_estimate == two.error_estimate


def test_monte_carlo_argument_checks():
    solid = make_solid('cone', Geometry.euclidean(3), r=0.4, h=0.6)
    with pytest.raises(OracleError):
        oracle_volume_mc(solid, samples=1)
    with pytest.raises(OracleError):
        oracle_volume_mc(solid, samples=100, seed=-1)


def test_leaf_centered_mass_of_cone_profile():
    g = Geometry.hyperbolic(3)
    profile = make_solid('cone', g, r=0.4, h=0.6).profile()
    assert profile.leaf_centered_mass(0.6) == pytest.approx(np.pi * float(sinx(0.4, g)) ** 2)


@pytest.mark.parametrize('kind', CURVED)
def test_many_sided_pyramid_approaches_the_cone(kind):
    g = Geometry(kind, 3)
    a = ngon_edge_from_circumradius(200, 0.4, Geometry(kind, 2))
    pyramid = volume_ngon_cone(200, a, 0.6, g)
    cone = volume_right_circular_cone(0.4, 0.6, g)
    assert pyramid < cone
    assert (cone - pyramid) / cone < 1e-3


# ============================================================================
# Monotonicity and ordering across geometries
# ============================================================================

GRID = [0.2, 0.5, 0.8, 1.1, 1.4]


def increasing(values):
    return bool(np.all(np.diff(values) > 0))


def test_torus_volume_increases_in_both_radii(kind):
    g = Geometry(kind, 3)
    assert increasing([volume_torus(R, 0.1, g) for R in [0.2, 0.5, 0.8, 1.1, 1.4]])
    assert increasing([volume_torus(0.7, r, g) for r in [0.1, 0.3, 0.5, 0.7]])


def test_cone_volume_increases_in_radius_and_height(kind):
    g = Geometry(kind, 3)
    for fixed in GRID:
        assert increasing([volume_right_circular_cone(r, fixed, g) for r in GRID])
        assert increasing([volume_right_circular_cone(fixed, h, g) for h in GRID])


def test_ball_cone_volume_increases_in_radius_and_height(kind):
    g = Geometry(kind, 4)
    assert increasing([volume_ball_base_cone(4, r, 0.6, g) for r in GRID])
    assert increasing([volume_ball_base_cone(4, 0.4, h, g) for h in GRID])


def test_pyramid_volume_increases_in_edge_and_height(kind):
    g = Geometry(kind, 3)
    assert increasing([volume_ngon_cone(5, a, 0.6, g) for a in [0.2, 0.4, 0.6, 0.8]])
    assert increasing([volume_ngon_cone(5, 0.5, h, g) for h in GRID])


@pytest.mark.parametrize('R,r', [(0.3, 0.1), (0.8, 0.3), (1.0, 0.5), (1.2, 0.3)])
def test_torus_volume_ordering(R, r):
    s, e, h = (volume_torus(R, r, Geometry(kind, 3)) for kind in
               (GeometryKind.SPHERICAL, GeometryKind.EUCLIDEAN, GeometryKind.HYPERBOLIC))
    assert s < e < h


@pytest.mark.parametrize('r,h', [(0.4, 0.6), (0.3, 0.3), (0.7, 1.1), (1.0, 1.0), (0.2, 1.4)])
def test_cone_volume_ordering_runs_the_other_way(r, h):
    s, e, hyp = (volume_right_circular_cone(r, h, Geometry(kind, 3)) for kind in
                 (GeometryKind.SPHERICAL, GeometryKind.EUCLIDEAN, GeometryKind.HYPERBOLIC))
    assert s > e > hyp


def test_cone_ordering_at_reference_point():
    s = volume_right_circular_cone(0.4, 0.6, Geometry.spherical(3))
    e = volume_right_circular_cone(0.4, 0.6, Geometry.euclidean(3))
    h = volume_right_circular_cone(0.4, 0.6, Geometry.hyperbolic(3))
    assert s == pytest.approx(0.1065291, abs=1e-7)
    assert e == pytest.approx(0.1005310, abs=1e-7)
    assert h == pytest.approx(0.0947642, abs=2e-7)


# ============================================================================
# Monte Carlo on an exact region
# ============================================================================

class UnitCube(BaseSolid):
    """[-1/2, 1/2]^3 about the pole of E^3"""

    key = "unit-cube"
    display_name = "Unit Cube"

    def validate(self):
        self._require_dimension(3)

    def closed_form_volume(self, q=None):
        return 1.0

    def profile(self):
        return PappusProfile(1.0, lambda t: 1.0, name=self.key)

    def contains(self, points):
        return np.all(np.abs(points[:, :-1]) <= 0.5, axis=1)

    def bounding_radius(self):
        return float(np.sqrt(3.0) / 2.0)

    def oracle_quadrature(self, q):
        return QuadratureResult(1.0, 0.0, 0, "exact")


def test_monte_carlo_unit_cube():
    report = oracle_volume_mc(UnitCube(Geometry.euclidean(3)), samples=500_000, seed=7)
    assert abs(report.value - 1.0) <= 3.0 * report.error_estimate
    assert report.error_estimate < 1e-2
    assert report.to_dict() == {'method': 'mc', 'value': report.value, 'stderr': report.error_estimate,
                                'n': 500_000, 'seed': 7}
