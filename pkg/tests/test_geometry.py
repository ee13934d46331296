"""Tests for the geometry module."""

import math

import numpy as np
import pytest

from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from grunstab import errors
from grunstab import generate
from grunstab import geometry

UNIT_SQUARE = [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]
SIMPLEX = [[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]]


def vertical_line(x: float) -> geometry.Hyperplane:
    """Return the line {x_1 = x} with H+ on the right."""
    return geometry.make_hyperplane([1.0, 0.0], x)


def test_volume_of_simple_bodies():
    """Check the volume of the square, a triangle and the 3-simplex."""
    assert geometry.volume(geometry.create_body(UNIT_SQUARE)) == pytest.approx(1.0, abs=1e-12)
    triangle = geometry.create_body([[0, 0], [1, 0], [0, 1]])
    assert geometry.volume(triangle) == pytest.approx(0.5, abs=1e-12)
    assert geometry.volume(geometry.create_body(SIMPLEX)) == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_volume_of_degenerate_body_is_zero():
    """Check that a segment in the plane has zero area but no centroid."""
    segment = geometry.create_body([[0, 0], [1, 1], [2, 2]])
    assert geometry.volume(segment) == 0.0
    assert not geometry.is_full_dimensional(segment)
    with pytest.raises(errors.DegenerateBody):
        geometry.centroid(segment)


def test_create_body_keeps_only_extreme_points():
    """Check that interior and duplicate points are removed and vertices are sorted."""
    body = geometry.create_body([[1, 1], [0, 0], [2, 0], [0, 2], [2, 2], [0, 0]])
    assert body.vertices == ((0.0, 0.0), (0.0, 2.0), (2.0, 0.0), (2.0, 2.0))


def test_create_body_rejects_non_finite_coordinates():
    """Check that NaN coordinates are an input error."""
    with pytest.raises(errors.InputError):
        geometry.create_body([[0, 0], [1, math.nan], [0, 1]])


def test_centroid_of_simple_bodies():
    """Check the centroid of the square, a triangle and a rectangle."""
    square = geometry.create_body([[0, 0], [1, 0], [1, 1], [0, 1]])
    assert np.allclose(geometry.centroid(square), [0.5, 0.5], atol=1e-12)
    triangle = geometry.create_body([[0, 0], [3, 0], [0, 3]])
    assert np.allclose(geometry.centroid(triangle), [1.0, 1.0], atol=1e-12)
    rectangle = geometry.create_body([[0, 0], [2, 0], [2, 1], [0, 1]])
    assert np.allclose(geometry.centroid(rectangle), [1.0, 0.5], atol=1e-12)


def test_relative_centroid_of_lower_dimensional_bodies():
    """Check the centroid of a point, a segment and a triangle lying in 3D."""
    point = geometry.create_body([[1, 2, 3]])
    assert np.allclose(geometry.relative_centroid(point), [1, 2, 3])
    segment = geometry.create_body([[0, 0, 0], [2, 0, 0]])
    assert np.allclose(geometry.relative_centroid(segment), [1, 0, 0])
    flat = geometry.create_body([[0, 0, 1], [3, 0, 1], [0, 3, 1]])
    assert np.allclose(geometry.relative_centroid(flat), [1, 1, 1], atol=1e-12)


def test_clip_square_in_half():
    """Check that the line x = 0 cuts the unit square into two halves."""
    square = geometry.create_body(UNIT_SQUARE)
    half = geometry.clip(square, vertical_line(0.0), geometry.Side.POSITIVE)
    assert half.vertices == ((0.0, -0.5), (0.0, 0.5), (0.5, -0.5), (0.5, 0.5))
    assert geometry.volume(half) == pytest.approx(0.5, abs=1e-12)


def test_clip_triangle_by_hand():
    """Check the clipped triangle x >= 1 of conv{(0,0),(3,0),(0,3)}."""
    triangle = geometry.create_body([[0, 0], [3, 0], [0, 3]])
    clipped = geometry.clip(triangle, vertical_line(1.0), geometry.Side.POSITIVE)
    assert np.allclose(np.array(clipped.vertices), [[1, 0], [1, 2], [3, 0]], atol=1e-12)
    assert geometry.volume(clipped) == pytest.approx(2.0, abs=1e-12)
    lower = geometry.clip(triangle, vertical_line(1.0), geometry.Side.NEGATIVE)
    assert geometry.volume(lower) == pytest.approx(2.5, abs=1e-12)


def test_clip_outside_support_is_empty():
    """Check that a half-space missing the body leaves nothing."""
    square = geometry.create_body(UNIT_SQUARE)
    clipped = geometry.clip(square, vertical_line(3.0), geometry.Side.POSITIVE)
    assert clipped.is_empty
    assert geometry.volume(clipped) == 0.0


def test_slice_square_and_simplex():
    """Check sections of the square and of the 3-simplex."""
    square = geometry.create_body(UNIT_SQUARE)
    assert geometry.slice_body(square, 0.0).vertices == ((-0.5,), (0.5,))
    assert geometry.section_measure(square, 0.0) == pytest.approx(1.0)
    assert geometry.slice_body(square, 0.6).is_empty
    assert geometry.section_measure(square, 0.6) == 0.0
    simplex = geometry.create_body(SIMPLEX)
    assert geometry.section_measure(simplex, 0.5) == pytest.approx(0.125, abs=1e-12)


def test_slice_through_a_vertex_is_a_point():
    """Check that the section through an apex is a single point."""
    triangle = geometry.create_body([[0, 0], [0, 2], [3, 1]])
    apex = geometry.slice_body(triangle, 3.0)
    assert apex.vertices == ((1.0,),)
    assert geometry.volume(apex) == 0.0


def test_sym_diff_exact_cases():
    """Check the exact planar symmetric difference on overlapping and disjoint squares."""
    square = geometry.create_body([[0, 0], [1, 0], [1, 1], [0, 1]])
    shifted = geometry.create_body([[0.5, 0], [1.5, 0], [1.5, 1], [0.5, 1]])
    far = geometry.create_body([[5, 5], [6, 5], [6, 6], [5, 6]])
    assert geometry.sym_diff_volume(square, square).value == pytest.approx(0.0, abs=1e-12)
    assert geometry.sym_diff_volume(square, shifted).value == pytest.approx(1.0, abs=1e-12)
    assert geometry.sym_diff_volume(square, far).value == pytest.approx(2.0, abs=1e-12)


def test_sym_diff_montecarlo_matches_exact_value():
    """Check that the Monte Carlo estimate covers the exact value and is seeded."""
    square = geometry.create_body([[0, 0], [1, 0], [1, 1], [0, 1]])
    shifted = geometry.create_body([[0.5, 0], [1.5, 0], [1.5, 1], [0.5, 1]])
    method = geometry.SymDiffMethod.MONTECARLO
    estimate = geometry.sym_diff_volume(square, shifted, method, seed=3, samples=200_000)
    again = geometry.sym_diff_volume(square, shifted, method, seed=3, samples=200_000)
    assert estimate == again
    assert estimate.half_width > 0.0
    # five half-widths leave a negligible chance of a spurious failure
    assert abs(estimate.value - 1.0) <= 5.0 * estimate.half_width


def test_sym_diff_exact_needs_the_plane():
    """Check that the exact method refuses bodies in dimension 3."""
    simplex = geometry.create_body(SIMPLEX)
    with pytest.raises(errors.MethodUnsupported):
        geometry.sym_diff_volume(simplex, simplex, geometry.SymDiffMethod.EXACT2D)


def test_hyperplane_requires_unit_normal():
    """Check that a direct hyperplane needs a unit normal while make_hyperplane rescales."""
    with pytest.raises(errors.InputError):
        geometry.Hyperplane(normal=(2.0, 0.0), offset=1.0)
    plane = geometry.make_hyperplane([2.0, 0.0], 1.0)
    assert plane.normal == (1.0, 0.0)
    assert plane.offset == pytest.approx(0.5)
    with pytest.raises(errors.InputError):
        geometry.make_hyperplane([0.0, 0.0], 1.0)


def test_maps_compose_and_invert():
    """Check that a map composed with its inverse is the identity."""
    affine = geometry.make_map(np.array([[2.0, 1.0], [0.0, 3.0]]), np.array([1.0, -1.0]))
    identity = geometry.compose_maps(geometry.invert_map(affine), affine)
    assert np.allclose(identity.matrix(), np.eye(2))
    assert np.allclose(identity.vector(), 0.0)
    assert geometry.map_determinant(affine) == pytest.approx(6.0)


def test_transform_hyperplane_keeps_the_positive_side():
    """Check that the image of H+ under a map is the positive side of the image plane."""
    affine = geometry.make_map(np.array([[-1.0, 0.5], [0.0, 2.0]]), np.array([3.0, 1.0]))
    plane = geometry.make_hyperplane([1.0, 1.0], 0.2)
    inside = np.array([[1.0, 1.0], [2.0, -0.5]])
    assert np.all(geometry.signed_distances(inside, plane) > 0.0)
    image = geometry.transform_hyperplane(plane, affine)
    assert np.all(geometry.signed_distances(geometry.apply_map(affine, inside), image) > 0.0)


def test_contains_points_on_the_square():
    """Check membership inside, on the boundary and outside the square."""
    square = geometry.create_body(UNIT_SQUARE)
    inside = geometry.contains_points(square, np.array([[0.0, 0.0], [0.5, 0.5], [0.6, 0.0]]), 1e-9)
    assert inside.tolist() == [True, True, False]


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), offset=st.floats(min_value=-1.5, max_value=1.5))
def test_clip_halves_add_up_to_the_body(seed, offset):
    """Check that both closed half-spaces of any line share the area of a polygon."""
    generator = np.random.default_rng(seed)
    body = generate.random_polygon(generator)
    plane = geometry.make_hyperplane(generator.standard_normal(2), offset)
    positive = geometry.volume(geometry.clip(body, plane, geometry.Side.POSITIVE))
    negative = geometry.volume(geometry.clip(body, plane, geometry.Side.NEGATIVE))
    assert positive + negative == pytest.approx(geometry.volume(body), rel=1e-9, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_clip_halves_add_up_in_three_dimensions(seed):
    """Check that the volume split also holds for random polytopes in 3D."""
    generator = np.random.default_rng(seed)
    body = generate.random_polytope(generator, 3, 12)
    plane = generate.random_centroid_plane(generator, body)
    positive = geometry.volume(geometry.clip(body, plane, geometry.Side.POSITIVE))
    negative = geometry.volume(geometry.clip(body, plane, geometry.Side.NEGATIVE))
    assert positive + negative == pytest.approx(geometry.volume(body), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_sym_diff_is_symmetric_and_bounded(seed):
    """Check that |A Δ B| = |B Δ A| and that it never exceeds |A| + |B|."""
    generator = np.random.default_rng(seed)
    first = generate.random_polygon(generator)
    second = generate.random_polygon(generator)
    forward = geometry.sym_diff_volume(first, second).value
    backward = geometry.sym_diff_volume(second, first).value
    assert forward == pytest.approx(backward, abs=1e-12)
    assert 0.0 <= forward <= geometry.volume(first) + geometry.volume(second) + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.sampled_from([2, 3]))
def test_centroid_and_volume_follow_affine_maps(seed, dim):
    """Check cent(f(K)) = f(cent(K)) and |f(K)| = |det f| |K| for random maps."""
    generator = np.random.default_rng(seed)
    body = generate.random_polygon(generator) if dim == 2 else generate.random_polytope(generator, 3, 12)
    affine = generate.random_affine_map(generator, dim)
    determinant = abs(geometry.map_determinant(affine))
    assert 0.1 - 1e-12 <= determinant <= 10.0 + 1e-12
    image = geometry.transform_body(body, affine)
    expected = geometry.apply_map(affine, geometry.centroid(body)[None, :])[0]
    assert np.allclose(geometry.centroid(image), expected, atol=1e-9)
    assert geometry.volume(image) == pytest.approx(determinant * geometry.volume(body), rel=1e-9)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_sym_diff_satisfies_the_triangle_inequality(seed):
    """Check |A Δ C| <= |A Δ B| + |B Δ C| for random polygon triples."""
    generator = np.random.default_rng(seed)
    first, second, third = (generate.random_polygon(generator) for _ in range(3))
    direct = geometry.sym_diff_volume(first, third).value
    detour = geometry.sym_diff_volume(first, second).value + geometry.sym_diff_volume(second, third).value
    assert direct <= detour + 1e-12
