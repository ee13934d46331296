"""Generate seeded bodies, hyperplanes, maps and test functions."""

import math

from typing import Tuple

import numpy as np

from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import profile as profiles


def perturbed_cone(dim: int, epsilon: float) -> geometry.ConvexBody:
    """Return a cone over a simplex with its apex split and one base corner pushed outwards.

    The base is the standard (n - 1)-simplex in {x_1 = 0} and the apex sits
    at height 3 above the base centroid. For epsilon > 0 a second apex is
    added at distance epsilon along x_2 and the base corner at the origin
    moves epsilon / 2 further from the apex. Epsilon zero gives the cone.
    """
    if dim < 2:
        raise errors.UnsupportedDimension("a cone needs dimension at least 2")
    if epsilon < 0.0:
        raise errors.ConfigError(f"epsilon must not be negative, found {epsilon}")
    base = np.hstack([np.zeros((dim, 1)), np.vstack([np.zeros(dim - 1), np.eye(dim - 1)])])
    apex = np.concatenate([[3.0], np.full(dim - 1, 1.0 / dim)])
    points = [base, apex[None, :]]
    if epsilon > 0.0:
        base = base.copy()
        base[0, 0] -= epsilon / 2.0
        shifted = apex.copy()
        shifted[1] += epsilon
        points = [base, apex[None, :], shifted[None, :]]
    return geometry.create_body(np.vstack(points), dim)


def random_polygon(generator: np.random.Generator) -> geometry.ConvexBody:
    """Return the hull of 5 to 12 points drawn uniformly from the unit disk."""
    while True:
        count = int(
            generator.integers(
                constants.sweep.Polygon_Min_Vertices, constants.sweep.Polygon_Max_Vertices + 1
            )
        )
        radii = np.sqrt(generator.random(count))
        angles = generator.uniform(0.0, 2.0 * math.pi, size=count)
        body = geometry.create_body(np.column_stack([radii * np.cos(angles), radii * np.sin(angles)]), 2)
        if geometry.is_full_dimensional(body):
            return body


def random_triangle(generator: np.random.Generator) -> geometry.ConvexBody:
    """Return a triangle with corners drawn uniformly from [-1, 1]^2, kept away from degeneracy."""
    while True:
        corners = generator.uniform(-1.0, 1.0, size=(3, 2))
        body = geometry.create_body(corners, 2)
        if len(body.vertices) == 3 and geometry.volume(body) > 0.05:
            return body


def random_polytope(
    generator: np.random.Generator, dim: int, vertices: int = constants.sweep.Polytope_Vertices
) -> geometry.ConvexBody:
    """Return the hull of points drawn uniformly from the unit ball in dimension 3 to 5."""
    if not 2 <= dim <= constants.sweep.Polytope_Max_Dim:
        raise errors.ConfigError(
            f"random polytopes need 2 <= dim <= {constants.sweep.Polytope_Max_Dim}, found {dim}"
        )
    if not dim + 1 <= vertices <= constants.sweep.Polytope_Max_Vertices:
        raise errors.ConfigError(
            f"random polytopes need {dim + 1} to {constants.sweep.Polytope_Max_Vertices} points"
        )
    while True:
        directions = generator.standard_normal((vertices, dim))
        directions /= np.linalg.norm(directions, axis=1)[:, None]
        radii = generator.random(vertices) ** (1.0 / dim)
        body = geometry.create_body(directions * radii[:, None], dim)
        if geometry.is_full_dimensional(body):
            return body


def random_centroid_plane(generator: np.random.Generator, body: geometry.ConvexBody) -> geometry.Hyperplane:
    """Return a hyperplane through the centroid with a uniformly random normal."""
    normal = generator.standard_normal(body.dim)
    return geometry.hyperplane_through(geometry.centroid(body), normal)


def random_affine_map(generator: np.random.Generator, dim: int) -> geometry.AffineMap:
    """Return a random affine map whose determinant has absolute value in [0.1, 10]."""
    while True:
        linear = generator.uniform(-1.0, 1.0, size=(dim, dim))
        determinant = abs(float(np.linalg.det(linear)))
        if determinant > constants.tolerance.Singular:
            break
    target = 10.0 ** generator.uniform(-1.0, 1.0)
    linear = linear * (target / determinant) ** (1.0 / dim)
    return geometry.make_map(linear, generator.uniform(-2.0, 2.0, size=dim))


def _balanced_values(generator: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """Return negative values for the left pieces and positive values for the right pieces."""
    left = -generator.uniform(0.1, 1.0, size=int(generator.integers(1, 5)))
    right = generator.uniform(0.1, 1.0, size=int(generator.integers(1, 5)))
    return left, right


def _side_grids(generator: np.random.Generator, crossing: float, left: int, right: int) -> Tuple[np.ndarray, np.ndarray]:
    """Return increasing grid points strictly left and strictly right of the crossing."""
    left_grid = crossing - np.sort(generator.uniform(0.1, 1.5, size=left))[::-1]
    right_grid = crossing + np.sort(generator.uniform(0.1, 1.5, size=right))
    return left_grid, right_grid


def _trapezoid(values: np.ndarray, grid: np.ndarray) -> float:
    """Return the integral of the piecewise-linear interpolant of the values."""
    return float(np.sum(0.5 * (values[1:] + values[:-1]) * np.diff(grid)))


def single_crossing_step(generator: np.random.Generator) -> Tuple[profiles.SectionProfile, float]:
    """Return a step function with zero integral that is negative and then positive, with its bound M."""
    left, right = _balanced_values(generator)
    crossing = float(generator.uniform(-0.5, 0.5))
    left_grid, right_grid = _side_grids(generator, crossing, len(left), len(right))
    negative = float(np.dot(-left, np.diff(np.append(left_grid, crossing))))
    positive = float(np.dot(right, np.diff(np.insert(right_grid, 0, crossing))))
    right = right * negative / positive
    grid = np.concatenate([left_grid, [crossing], right_grid])
    values = np.concatenate([left, right])
    return profiles.step_profile(grid.tolist(), values.tolist()), float(np.max(np.abs(values)))


def single_crossing_linear(generator: np.random.Generator) -> Tuple[profiles.SectionProfile, float]:
    """Return a piecewise-linear function with zero integral that crosses zero once, with its bound M."""
    left, right = _balanced_values(generator)
    crossing = float(generator.uniform(-0.5, 0.5))
    left_grid, right_grid = _side_grids(generator, crossing, len(left), len(right))
    negative = -_trapezoid(np.append(left, 0.0), np.append(left_grid, crossing))
    positive = _trapezoid(np.insert(right, 0, 0.0), np.insert(right_grid, 0, crossing))
    right = right * negative / positive
    grid = np.concatenate([left_grid, [crossing], right_grid])
    values = np.concatenate([left, [0.0], right])
    return profiles.piecewise_linear_profile(grid.tolist(), values.tolist()), float(np.max(np.abs(values)))
