#!/usr/bin/env python3
"""
Tests for the ambient-vector model: form, distances, charts, material vectors, isometries
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambient import (
    Geometry,
    GeometryKind,
    Isometry,
    MaterialVector,
    apply_isometry,
    bilinear_form,
    cosx,
    dcosx,
    decompose,
    distance,
    exp_point,
    on_space_defect,
    polar_box,
    polar_chart,
    polar_vector,
    project_to_space,
    random_isometry,
    sinx,
    slant_cos,
    tangent_angle_cos,
)
from errors import DimensionMismatchError, InputFormatError, NoMassCenterError, OffSpaceError
from masscenter import random_points

finite = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


# ============================================================================
# Geometry
# ============================================================================

def test_geometry_from_strings_and_dicts():
    g = Geometry("Spherical", 2)
    assert g.kind is GeometryKind.SPHERICAL
    assert g == Geometry.from_dict({'kind': 'spherical', 'n': 2})
    assert g.to_dict() == {'kind': 'spherical', 'n': 2}
    assert str(Geometry.hyperbolic(3)) == "H^3"
    assert g.dim == 3


def test_geometry_rejects_bad_input():
    with pytest.raises(InputFormatError):
        Geometry("elliptic", 2)
    with pytest.raises(DimensionMismatchError):
        Geometry.euclidean(0)
    with pytest.raises(InputFormatError):
        Geometry.from_dict({'kind': 'euclidean'})


def test_delta_and_pole(plane):
    assert plane.delta == (-1.0 if plane.is_hyperbolic else 1.0)
    assert on_space_defect(plane.pole(), plane) == 0.0


# ============================================================================
# Bilinear form and distances
# ============================================================================

@settings(max_examples=100, deadline=None)
@given(st.lists(finite, min_size=3, max_size=3), st.lists(finite, min_size=3, max_size=3),
       st.sampled_from(list(GeometryKind)))
def test_bilinear_form_is_exactly_symmetric(a, b, kind):
    g = Geometry(kind, 2)
    assert bilinear_form(a, b, g) == bilinear_form(b, a, g)


def test_bilinear_form_shape_mismatch():
    with pytest.raises(DimensionMismatchError):
        bilinear_form([1.0, 2.0], [1.0, 2.0, 3.0], Geometry.euclidean(2))


def test_distance_matches_intrinsic_values(plane):
    p = plane.pole()
    for d in (1e-9, 0.3, 1.7):
        q = exp_point(p, plane.basis_vector(0), d, plane)
        assert distance(p, q, plane) == pytest.approx(d, rel=1e-12)


def test_triangle_inequality(plane, rng):
    p, q, r = (random_points(plane, 1000, rng) for _ in range(3))
    slack = distance(p, q, plane) + distance(q, r, plane) + 1e-9 - distance(p, r, plane)
    assert np.all(slack >= 0)


def test_form_matrix_squares_to_identity(plane):
    np.testing.assert_array_equal(plane.J @ plane.J, np.eye(plane.dim))


def test_distance_of_antipodes_is_pi():
    g = Geometry.spherical(2)
    assert distance(g.pole(), -g.pole(), g) == pytest.approx(np.pi)


def test_distance_rejects_off_space_points(plane):
    with pytest.raises(OffSpaceError):
        distance(plane.pole() * 1.5, plane.pole(), plane)


def test_distance_rejects_lower_sheet():
    g = Geometry.hyperbolic(2)
    with pytest.raises(OffSpaceError):
        distance(-g.pole(), g.pole(), g)


def test_project_to_space_accepts_small_defect(plane):
    q = plane.pole() * (1.0 + 1e-11)
    out = project_to_space(q, plane)
    assert on_space_defect(out, plane) < 1e-15


def test_trig_dispatch():
    x = 0.7
    assert sinx(x, Geometry.euclidean(1)) == x
    assert cosx(x, Geometry.euclidean(1)) == 1.0
    assert sinx(x, Geometry.spherical(1)) == pytest.approx(np.sin(x))
    assert cosx(x, Geometry.hyperbolic(1)) == pytest.approx(np.cosh(x))
    assert dcosx(x, Geometry.spherical(1)) == pytest.approx(-np.sin(x))
    assert dcosx(x, Geometry.hyperbolic(1)) == pytest.approx(np.sinh(x))


# ============================================================================
# Charts and hyperplanes
# ============================================================================

def test_polar_chart_stays_on_space(space, rng):
    lower, upper = polar_box(1.2, space)
    params = lower + (upper - lower) * rng.random((200, space.n))
    points = polar_chart(params, space)
    assert np.max(on_space_defect(points, space)) < 1e-12
    assert np.allclose(distance(points, np.tile(space.pole(), (200, 1)), space), params[:, 0], atol=1e-12)


def test_polar_box_in_one_dimension():
    lower, upper = polar_box(0.5, Geometry.spherical(1))
    assert lower.tolist() == [-0.5] and upper.tolist() == [0.5]


def test_polar_vector_of_equatorial_plane(plane):
    # plane through the pole spanned by e_1 and the pole itself
    p = polar_vector(np.stack([plane.basis_vector(0), plane.pole()]), plane)
    assert abs(p[1]) == pytest.approx(1.0)
    assert bilinear_form(p, p, plane) == pytest.approx(1.0)


def test_polar_vector_degenerate_basis(plane):
    e1 = plane.basis_vector(0)
    with pytest.raises(OffSpaceError):
        polar_vector(np.stack([e1, 2.0 * e1]), plane)


def test_slant_cos_range(plane):
    t = plane.basis_vector(0)
    p = np.cos(0.4) * plane.basis_vector(0) + np.sin(0.4) * plane.basis_vector(1)
    assert tangent_angle_cos(t, p, plane) == pytest.approx(np.cos(0.4))
    assert slant_cos(-t, p, plane) == pytest.approx(np.cos(0.4))


# ============================================================================
# Material vectors
# ============================================================================

def test_material_vector_round_trip(plane):
    point = exp_point(plane.pole(), plane.basis_vector(1), 0.8, plane)
    a = MaterialVector.from_mass_point(plane, 2.5, point)
    mass, p = decompose(a)
    assert mass == pytest.approx(2.5)
    assert np.allclose(p, point)


def test_material_vector_is_read_only(plane):
    a = MaterialVector(plane, plane.pole())
    with pytest.raises(ValueError):
        a.coords[0] = 1.0


def test_zero_vector_has_no_point(plane):
    with pytest.raises(NoMassCenterError):
        decompose(MaterialVector.zero(plane))


def test_hyperbolic_vector_outside_cone_rejected():
    g = Geometry.hyperbolic(2)
    with pytest.raises(OffSpaceError):
        MaterialVector(g, [2.0, 0.0, 1.0])
    with pytest.raises(OffSpaceError):
        MaterialVector(g, [0.0, 0.0, -1.0])


def test_euclidean_vector_needs_positive_mass():
    with pytest.raises(OffSpaceError):
        MaterialVector(Geometry.euclidean(2), [1.0, 1.0, -1.0])


def test_from_dict_accepts_both_encodings(plane):
    a = MaterialVector.from_dict(plane, {'mass': 2.0, 'point': plane.pole().tolist()})
    b = MaterialVector.from_dict(plane, {'vector': (2.0 * plane.pole()).tolist()})
    assert np.allclose(a.coords, b.coords)
    with pytest.raises(InputFormatError):
        MaterialVector.from_dict(plane, {'mass': 1.0})


def test_negative_scale_rejected(plane):
    with pytest.raises(OffSpaceError):
        MaterialVector(plane, plane.pole()).scaled(-1.0)


# ============================================================================
# Isometries
# ============================================================================

def test_random_isometry_is_valid(space):
    for seed in range(5):
        iso = random_isometry(space, seed)
        assert iso.residual() < 1e-10


def test_isometry_preserves_distance(plane, rng):
    iso = random_isometry(plane, rng)
    p = exp_point(plane.pole(), plane.basis_vector(0), 0.4, plane)
    q = exp_point(plane.pole(), plane.basis_vector(1), 0.9, plane)
    moved = iso.apply_points(np.stack([p, q]))
    assert distance(moved[0], moved[1], plane) == pytest.approx(distance(p, q, plane), rel=1e-10)


def test_apply_isometry_keeps_mass(plane):
    iso = Isometry.rotation(plane, 0, 1, 0.7)
    a = MaterialVector.from_mass_point(plane, 3.0, exp_point(plane.pole(), plane.basis_vector(0), 0.5, plane))
    assert apply_isometry(iso, a).mass == pytest.approx(3.0)


def test_non_isometry_rejected(plane):
    with pytest.raises(OffSpaceError):
        Isometry(plane, 2.0 * np.eye(plane.dim))


def test_antipodal_only_on_sphere():
    Isometry.antipodal(Geometry.spherical(2))
    with pytest.raises(OffSpaceError):
        Isometry.antipodal(Geometry.hyperbolic(2))
