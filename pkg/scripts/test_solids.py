#!/usr/bin/env python3
"""
Tests for the solid registry, SolidSpec parsing and membership tests
"""
import numpy as np
import pytest

from ambient import Geometry, distance, exp_point
from errors import DimensionMismatchError, DomainError, InputFormatError
from pappus import cone_section_radius
from quadrature import QuadratureConfig
from solids import build_solid, get_solid_class, list_registered_solids, make_solid
from solids.base import slant_height
from solids.cones import BallBaseCone, RightCircularCone, base_center, project_to_base
from solids.ngon_cone import NgonCone
from solids.torus import Torus


def test_registry():
    keys = [entry['key'] for entry in list_registered_solids()]
    assert keys == ['torus', 'cone', 'ball-cone', 'ngon-cone']
    assert get_solid_class('Torus') is Torus
    assert get_solid_class('prism') is None
    assert get_solid_class('') is None
    with pytest.raises(InputFormatError):
        make_solid('prism', Geometry.euclidean(3))


def test_parameter_checks():
    g = Geometry.spherical(3)
    with pytest.raises(InputFormatError):
        make_solid('torus', g, R=0.8)
    with pytest.raises(InputFormatError):
        make_solid('torus', g, R=0.8, r=0.3, h=1.0)
    with pytest.raises(InputFormatError):
        make_solid('cone', g, r='wide', h=0.5)
    with pytest.raises(DomainError):
        make_solid('cone', g, r=2.0, h=2.0)
    with pytest.raises(DimensionMismatchError):
        make_solid('torus', Geometry.spherical(4), R=0.8, r=0.3)


def test_build_solid_from_spec():
    solid = build_solid({'solid': 'cone', 'geometry': {'kind': 'hyperbolic', 'n': 3}, 'params': {'r': 0.4, 'h': 0.6}})
    assert isinstance(solid, RightCircularCone)
    assert solid.to_dict() == {'solid': 'cone', 'geometry': {'kind': 'hyperbolic', 'n': 3},
                               'params': {'r': 0.4, 'h': 0.6}}


def test_build_solid_takes_ball_cone_dimension_from_params():
    solid = build_solid({'solid': 'ball-cone', 'geometry': 'spherical', 'params': {'r': 0.3, 'h': 0.5, 'n': 5}})
    assert isinstance(solid, BallBaseCone)
    assert solid.geometry == Geometry.spherical(5)


def test_build_solid_rejects_bad_specs():
    with pytest.raises(InputFormatError):
        build_solid({'solid': 'cone', 'geometry': 'euclidean', 'params': {}, 'color': 'red'})
    with pytest.raises(InputFormatError):
        build_solid({'solid': 'blob', 'geometry': 'euclidean'})
    with pytest.raises(InputFormatError):
        build_solid(['cone'])


def test_ball_cone_dimension_must_match():
    with pytest.raises(DimensionMismatchError):
        make_solid('ball-cone', Geometry.euclidean(4), r=0.3, h=0.5, n=3)


def test_slant_height(kind):
    g = Geometry(kind, 3)
    s = slant_height(0.6, 0.4, g)
    assert s > 0.6
    if g.is_euclidean:
        assert s == pytest.approx(np.hypot(0.6, 0.4))


# ============================================================================
# Membership
# ============================================================================

def test_cone_contains_axis_points(kind):
    g = Geometry(kind, 3)
    cone = make_solid('cone', g, r=0.4, h=0.6)
    axis = g.basis_vector(2)
    inside = exp_point(g.pole(), axis, 0.3, g)
    beyond = exp_point(g.pole(), axis, 0.7, g)
    behind = exp_point(g.pole(), axis, -0.1, g)
    assert cone.contains(np.stack([inside, beyond, behind])).tolist() == [True, False, False]


def test_cone_rim(kind):
    g = Geometry(kind, 3)
    cone = make_solid('cone', g, r=0.4, h=0.6)
    center = base_center(0.6, g)
    assert np.allclose(project_to_base(center[None, :], 0.6, g)[0][0], center)
    # e_1 is tangent at every point of the axis; sample just below the base
    inner = base_center(0.58, g)
    radius = cone_section_radius(0.4, 0.6, 0.58, g)
    near_rim = exp_point(inner, g.basis_vector(0), 0.97 * radius, g)
    past_rim = exp_point(inner, g.basis_vector(0), 1.03 * radius, g)
    assert cone.contains(np.stack([near_rim, past_rim])).tolist() == [True, False]


def test_torus_contains_core_and_not_pole(kind):
    g = Geometry(kind, 3)
    torus = make_solid('torus', g, R=0.8, r=0.3)
    core, _ = torus._core(np.array([0.4]))
    assert torus.contains(np.stack([core[0], g.pole()])).tolist() == [True, False]


def test_tube_chart_distance_from_core():
    g = Geometry.hyperbolic(3)
    torus = make_solid('torus', g, R=1.2, r=0.5)
    params = np.array([[0.25, 1.0, 2.0]])
    point = torus.tube_chart(params)
    core, _ = torus._core(params[:, 2])
    assert distance(point[0], core[0], g) == pytest.approx(0.25, rel=1e-12)


def test_ngon_cone_contains(kind):
    g = Geometry(kind, 3)
    pyramid = make_solid('ngon-cone', g, n=4, a=0.6, h=0.5)
    assert isinstance(pyramid, NgonCone)
    center = base_center(0.49, g)
    # apothem along e_1, about 0.29 at this height
    apothem_dir = g.basis_vector(0)
    assert pyramid.contains(exp_point(center, apothem_dir, 0.25, g)[None, :]).tolist() == [True]
    assert pyramid.contains(exp_point(center, apothem_dir, 0.35, g)[None, :]).tolist() == [False]


def test_repr_and_describe():
    solid = make_solid('ngon-cone', Geometry.euclidean(3), n=6, a=0.5, h=1.0)
    assert repr(solid) == "NgonCone(E^3, n=6, a=0.5, h=1)"
    assert NgonCone.describe()['params'] == ['n', 'a', 'h']


def test_ngon_cone_quadrature_oracle(kind):
    solid = make_solid('ngon-cone', Geometry(kind, 3), n=5, a=0.6, h=0.5)
    report = solid.oracle_quadrature(QuadratureConfig(points_per_axis=24))
    assert report.value == pytest.approx(solid.closed_form_volume(), rel=1e-6)


def test_degenerate_solids_have_zero_oracle_volume():
    cone = make_solid('cone', Geometry.spherical(3), r=0.0, h=0.5)
    assert cone.oracle_quadrature(QuadratureConfig(points_per_axis=8)).value == 0.0
