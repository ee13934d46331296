"""Compute volumes, centroids, clips, sections and symmetric differences of V-polytopes."""

import functools
import logging
import math

from dataclasses import dataclass
from enum import Enum

from typing import Iterable
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from scipy import stats
from scipy.spatial import ConvexHull
from scipy.spatial import QhullError

from grunstab import constants
from grunstab import errors

Point = Tuple[float, ...]


class Side(str, Enum):
    """The two closed half-spaces bounded by a hyperplane."""

    POSITIVE = constants.orientation.Positive
    NEGATIVE = constants.orientation.Negative


class SymDiffMethod(str, Enum):
    """The ways of computing the volume of a symmetric difference."""

    EXACT2D = "exact2d"
    MONTECARLO = "montecarlo"


@dataclass(frozen=True)
class ConvexBody:
    """A convex polytope stored as the sorted tuple of its extreme points."""

    dim: int
    vertices: Tuple[Point, ...]

    @property
    def is_empty(self) -> bool:
        """Return True when the body has no points at all."""
        return len(self.vertices) == 0

    def as_array(self) -> np.ndarray:
        """Return the vertices as a (count, dim) array."""
        return np.array(self.vertices, dtype=float).reshape(len(self.vertices), self.dim)


@dataclass(frozen=True)
class Hyperplane:
    """The oriented hyperplane {x : <normal, x> = offset}; H+ is <normal, x> >= offset."""

    normal: Point
    offset: float

    def __post_init__(self) -> None:
        """Confirm that the normal has unit length."""
        length = math.sqrt(sum(component * component for component in self.normal))
        if abs(length - 1.0) > constants.tolerance.Unit_Normal:
            raise errors.InputError(f"hyperplane normal must be a unit vector, |normal| = {length}")

    @property
    def dim(self) -> int:
        """Return the dimension of the ambient space."""
        return len(self.normal)


@dataclass(frozen=True)
class AffineMap:
    """The affine map x -> linear @ x + translation."""

    linear: Tuple[Tuple[float, ...], ...]
    translation: Point

    @property
    def dim(self) -> int:
        """Return the dimension of the space the map acts on."""
        return len(self.translation)

    def matrix(self) -> np.ndarray:
        """Return the linear part as an array."""
        return np.array(self.linear, dtype=float).reshape(self.dim, self.dim)

    def vector(self) -> np.ndarray:
        """Return the translation as an array."""
        return np.array(self.translation, dtype=float)


@dataclass(frozen=True)
class SymDiffEstimate:
    """The volume of a symmetric difference with its 99% confidence half-width."""

    value: float
    half_width: float
    method: SymDiffMethod


def _as_point(row: Iterable[float]) -> Point:
    """Convert a row of numbers into a hashable tuple of floats."""
    return tuple(float(component) for component in row)


def _hull(points: np.ndarray) -> ConvexHull:
    """Build a qhull convex hull, joggling the input if qhull reports a precision problem."""
    try:
        return ConvexHull(points)
    except QhullError:
        logging.getLogger(constants.logging.Rich).debug("Retrying qhull with joggled input")
        return ConvexHull(points, qhull_options="QJ")


def diameter_bound(points: np.ndarray) -> float:
    """Return the length of the bounding box diagonal, at least one."""
    if len(points) == 0:
        return 1.0
    extent = np.ptp(points, axis=0)
    return max(1.0, float(np.linalg.norm(extent)))


def _affine_frame(points: np.ndarray) -> Tuple[int, np.ndarray, np.ndarray]:
    """Return the affine rank, an orthonormal basis of the affine hull and an origin."""
    origin = points.mean(axis=0)
    centered = points - origin
    _, singular_values, basis = np.linalg.svd(centered, full_matrices=False)
    threshold = constants.tolerance.Degenerate * diameter_bound(points)
    rank = int(np.sum(singular_values > threshold))
    return rank, basis[:rank], origin


def _extreme_points(points: np.ndarray) -> np.ndarray:
    """Remove duplicates and points that are not extreme in their affine hull."""
    # STEP: drop repeated points, comparing them after rounding
    _, first = np.unique(
        np.round(points, constants.tolerance.Dedupe_Decimals), axis=0, return_index=True
    )
    points = points[np.sort(first)]
    if len(points) <= 1:
        return points
    # STEP: find the affine hull; a single point is its own extreme point
    rank, basis, origin = _affine_frame(points)
    if rank == 0:
        return points[:1]
    # work in coordinates of the affine hull so that qhull sees a full-dimensional set
    coordinates = (points - origin) @ basis.T
    if rank == 1:
        indices = np.array([np.argmin(coordinates[:, 0]), np.argmax(coordinates[:, 0])])
    else:
        indices = _hull(coordinates).vertices
    return points[np.unique(indices)]


def create_body(points: Sequence[Sequence[float]], dim: Optional[int] = None) -> ConvexBody:
    """Create the canonical body spanned by the points: extreme points only, sorted."""
    array = np.asarray(points, dtype=float)
    if dim is None:
        if array.ndim != 2 or array.shape[0] == 0:
            raise errors.InputError("cannot infer the dimension of an empty point list")
        dim = int(array.shape[1])
    array = array.reshape(-1, dim)
    if len(array) == 0:
        return empty_body(dim)
    if not np.all(np.isfinite(array)):
        raise errors.InputError("vertex coordinates must be finite numbers")
    # --> the sorted tuple of extreme points is the canonical form of the body
    extreme = _extreme_points(array)
    return ConvexBody(dim=dim, vertices=tuple(sorted(_as_point(row) for row in extreme)))


def empty_body(dim: int) -> ConvexBody:
    """Create the empty body of the given dimension."""
    return ConvexBody(dim=dim, vertices=())


def make_hyperplane(normal: Sequence[float], offset: float) -> Hyperplane:
    """Create a hyperplane from any nonzero normal, rescaling the offset to match."""
    vector = np.asarray(normal, dtype=float)
    length = float(np.linalg.norm(vector))
    if length == 0.0 or not math.isfinite(length):
        raise errors.InputError("hyperplane normal must be a nonzero finite vector")
    return Hyperplane(normal=_as_point(vector / length), offset=float(offset) / length)


def hyperplane_through(point: Sequence[float], normal: Sequence[float]) -> Hyperplane:
    """Create the hyperplane through the point with the given normal direction."""
    vector = np.asarray(normal, dtype=float)
    vector = vector / np.linalg.norm(vector)
    return Hyperplane(normal=_as_point(vector), offset=float(vector @ np.asarray(point, dtype=float)))


def flip_hyperplane(plane: Hyperplane) -> Hyperplane:
    """Return the same hyperplane with the positive and negative sides exchanged."""
    return Hyperplane(normal=tuple(-component for component in plane.normal), offset=-plane.offset)


def signed_distances(points: np.ndarray, plane: Hyperplane) -> np.ndarray:
    """Return <normal, p> - offset for every point."""
    return points @ np.asarray(plane.normal, dtype=float) - plane.offset


def make_map(linear: np.ndarray, translation: np.ndarray) -> AffineMap:
    """Create an affine map from array data."""
    matrix = np.asarray(linear, dtype=float)
    return AffineMap(
        linear=tuple(_as_point(row) for row in matrix),
        translation=_as_point(np.asarray(translation, dtype=float)),
    )


def identity_map(dim: int) -> AffineMap:
    """Create the identity map of the given dimension."""
    return make_map(np.eye(dim), np.zeros(dim))


def apply_map(affine: AffineMap, points: np.ndarray) -> np.ndarray:
    """Apply the map to every row of the array."""
    return np.asarray(points, dtype=float) @ affine.matrix().T + affine.vector()


def compose_maps(outer: AffineMap, inner: AffineMap) -> AffineMap:
    """Return the map x -> outer(inner(x))."""
    linear = outer.matrix() @ inner.matrix()
    return make_map(linear, outer.matrix() @ inner.vector() + outer.vector())


def invert_map(affine: AffineMap) -> AffineMap:
    """Return the inverse of an invertible affine map."""
    inverse = np.linalg.inv(affine.matrix())
    return make_map(inverse, -inverse @ affine.vector())


def map_determinant(affine: AffineMap) -> float:
    """Return the determinant of the linear part."""
    return float(np.linalg.det(affine.matrix()))


def transform_body(body: ConvexBody, affine: AffineMap) -> ConvexBody:
    """Return the image of the body under the map."""
    if body.is_empty:
        return body
    return create_body(apply_map(affine, body.as_array()), body.dim)


def transform_hyperplane(plane: Hyperplane, affine: AffineMap) -> Hyperplane:
    """Return the image of the hyperplane, keeping the image of H+ as the positive side."""
    # <u, x> >= r with x = L^-1 (y - tau) becomes <L^-T u, y> >= r + <L^-T u, tau>
    normal = np.linalg.solve(affine.matrix().T, np.asarray(plane.normal, dtype=float))
    return make_hyperplane(normal, plane.offset + float(normal @ affine.vector()))


def affine_rank(body: ConvexBody) -> int:
    """Return the dimension of the affine hull of the body, or -1 when it is empty."""
    if body.is_empty:
        return -1
    if len(body.vertices) == 1:
        return 0
    rank, _, _ = _affine_frame(body.as_array())
    return rank


def is_full_dimensional(body: ConvexBody) -> bool:
    """Return True when the affine hull of the body is its whole ambient space."""
    return affine_rank(body) == body.dim


@functools.lru_cache(maxsize=4096)
def _measure_and_centroid(body: ConvexBody) -> Tuple[float, Optional[Point]]:
    """Decompose the body into simplices and return its volume and centroid."""
    logger = logging.getLogger(constants.logging.Rich)
    if not is_full_dimensional(body):
        logger.debug(f"Body with {len(body.vertices)} vertices is degenerate, volume is zero")
        return 0.0, None
    points = body.as_array()
    if body.dim == 1:
        low, high = float(points.min()), float(points.max())
        return high - low, (0.5 * (low + high),)
    # cone every triangulated facet over an interior point: each facet
    # contributes a simplex whose volume is |det| / n! and whose centroid
    # is the average of its n + 1 corners
    hull = _hull(points)
    origin = points[hull.vertices].mean(axis=0)
    facets = points[hull.simplices]
    simplex_volumes = np.abs(np.linalg.det(facets - origin)) / math.factorial(body.dim)
    simplex_centroids = (facets.sum(axis=1) + origin) / (body.dim + 1)
    total = float(simplex_volumes.sum())
    centroid_point = (simplex_volumes[:, None] * simplex_centroids).sum(axis=0) / total
    return total, _as_point(centroid_point)


def volume(body: ConvexBody) -> float:
    """Return the Lebesgue measure of the body, zero for empty or degenerate bodies."""
    if body.is_empty:
        return 0.0
    return _measure_and_centroid(body)[0]


def centroid(body: ConvexBody) -> np.ndarray:
    """Return the barycenter of the body."""
    if body.is_empty:
        raise errors.DegenerateBody("the empty body has no centroid")
    _, centroid_point = _measure_and_centroid(body)
    if centroid_point is None:
        raise errors.DegenerateBody(
            f"affine hull has dimension {affine_rank(body)} < {body.dim}"
        )
    return np.array(centroid_point)


def relative_centroid(body: ConvexBody) -> np.ndarray:
    """Return the centroid of the body inside its own affine hull."""
    if body.is_empty:
        raise errors.DegenerateBody("the empty body has no centroid")
    if is_full_dimensional(body):
        return centroid(body)
    points = body.as_array()
    rank, basis, origin = _affine_frame(points)
    if rank <= 1:
        # a point or a segment: the vertex average is the centroid
        return points.mean(axis=0)
    flat = create_body((points - origin) @ basis.T, rank)
    return origin + centroid(flat) @ basis


def first_axis_bounds(body: ConvexBody) -> Tuple[float, float]:
    """Return the smallest and largest first coordinate of the body."""
    points = body.as_array()
    return float(points[:, 0].min()), float(points[:, 0].max())


def _crossings(
    inside: np.ndarray, inside_distances: np.ndarray, outside: np.ndarray, outside_distances: np.ndarray
) -> np.ndarray:
    """Intersect every segment from an inside point to an outside point with the plane."""
    if len(inside) == 0 or len(outside) == 0:
        return np.empty((0, inside.shape[1]))
    ratio = inside_distances[:, None] / (inside_distances[:, None] - outside_distances[None, :])
    points = inside[:, None, :] + ratio[..., None] * (outside[None, :, :] - inside[:, None, :])
    return points.reshape(-1, inside.shape[1])


def clip(body: ConvexBody, plane: Hyperplane, side: Side) -> ConvexBody:
    """Return the intersection of the body with one closed half-space of the plane."""
    if body.is_empty:
        return body
    points = body.as_array()
    distances = signed_distances(points, plane)
    if Side(side) is Side.NEGATIVE:
        distances = -distances
    epsilon = constants.tolerance.Degenerate
    # STEP: keep the vertices on the chosen side and add the edge crossings
    kept = points[distances >= -epsilon]
    strictly_in = distances > epsilon
    strictly_out = distances < -epsilon
    crossings = _crossings(
        points[strictly_in], distances[strictly_in], points[strictly_out], distances[strictly_out]
    )
    candidates = np.vstack([kept, crossings])
    if len(candidates) == 0:
        return empty_body(body.dim)
    return create_body(candidates, body.dim)


def slice_body(body: ConvexBody, x: float) -> ConvexBody:
    """Return the section {y : (x, y) in body} as a body of dimension n - 1."""
    if body.is_empty:
        return empty_body(body.dim - 1)
    points = body.as_array()
    distances = points[:, 0] - x
    epsilon = constants.tolerance.Degenerate
    # STEP: collect the vertices on {x_1 = x} and the crossings of the edges through it
    on_plane = points[np.abs(distances) <= epsilon]
    above = distances > epsilon
    below = distances < -epsilon
    crossings = _crossings(points[above], distances[above], points[below], distances[below])
    candidates = np.vstack([on_plane, crossings])
    if len(candidates) == 0:
        return empty_body(body.dim - 1)
    # --> drop the first coordinate, which is x for every candidate
    return create_body(candidates[:, 1:], body.dim - 1)


def section_measure(body: ConvexBody, x: float) -> float:
    """Return the (n - 1)-dimensional measure |K_x| of the section at x."""
    return volume(slice_body(body, x))


def contains_points(body: ConvexBody, points: np.ndarray, tol: float) -> np.ndarray:
    """Return, for every point, whether it lies in the body up to the tolerance."""
    points = np.asarray(points, dtype=float).reshape(-1, body.dim)
    if body.is_empty:
        return np.zeros(len(points), dtype=bool)
    if not is_full_dimensional(body):
        raise errors.DegenerateBody("point membership needs a full-dimensional body")
    vertices = body.as_array()
    if body.dim == 1:
        return (points[:, 0] >= vertices.min() - tol) & (points[:, 0] <= vertices.max() + tol)
    equations = _hull(vertices).equations
    # the facet equations have unit normals, so the residual is a distance
    residuals = points @ equations[:, :-1].T + equations[:, -1]
    return np.all(residuals <= tol, axis=1)


def ordered_polygon(body: ConvexBody) -> np.ndarray:
    """Return the vertices of a planar body in counter-clockwise order."""
    if body.dim != 2:
        raise errors.MethodUnsupported(f"polygon ordering needs dimension 2, not {body.dim}")
    points = body.as_array()
    if len(points) < 3:
        return points
    center = points.mean(axis=0)
    angles = np.arctan2(points[:, 1] - center[1], points[:, 0] - center[0])
    return points[np.argsort(angles)]


def _left_of(start: np.ndarray, end: np.ndarray, point: np.ndarray) -> float:
    """Return the cross product telling on which side of the directed line the point is."""
    return float((end[0] - start[0]) * (point[1] - start[1]) - (end[1] - start[1]) * (point[0] - start[0]))


def _edge_crossing(start: np.ndarray, end: np.ndarray, first: np.ndarray, second: np.ndarray) -> np.ndarray:
    """Intersect the segment from first to second with the line through start and end."""
    first_side = _left_of(start, end, first)
    second_side = _left_of(start, end, second)
    ratio = first_side / (first_side - second_side)
    return first + ratio * (second - first)


def clip_polygon(subject: np.ndarray, clipper: np.ndarray) -> np.ndarray:
    """Clip a convex polygon by a convex polygon (Sutherland-Hodgman); both counter-clockwise."""
    output = [np.asarray(point, dtype=float) for point in subject]
    clipper = np.asarray(clipper, dtype=float)
    for index in range(len(clipper)):
        if not output:
            break
        edge_start = clipper[index - 1]
        edge_end = clipper[index]
        candidates = output
        output = []
        previous = candidates[-1]
        # --> keep the part of the polygon to the left of the clipping edge
        for current in candidates:
            current_inside = _left_of(edge_start, edge_end, current) >= 0.0
            previous_inside = _left_of(edge_start, edge_end, previous) >= 0.0
            if current_inside:
                if not previous_inside:
                    output.append(_edge_crossing(edge_start, edge_end, previous, current))
                output.append(current)
            elif previous_inside:
                output.append(_edge_crossing(edge_start, edge_end, previous, current))
            previous = current
    return np.array(output, dtype=float).reshape(-1, 2)


def polygon_area(polygon: np.ndarray) -> float:
    """Return the area of a simple polygon given in order (shoelace formula)."""
    if len(polygon) < 3:
        return 0.0
    x_values = polygon[:, 0]
    y_values = polygon[:, 1]
    return 0.5 * abs(
        float(np.dot(x_values, np.roll(y_values, -1)) - np.dot(y_values, np.roll(x_values, -1)))
    )


def polygon_sym_diff(first: np.ndarray, second: np.ndarray) -> float:
    """Return |A Δ B| = |A| + |B| - 2|A ∩ B| for two counter-clockwise convex polygons."""
    if len(first) < 3 or len(second) < 3:
        return polygon_area(first) + polygon_area(second)
    overlap = polygon_area(clip_polygon(first, second))
    return max(0.0, polygon_area(first) + polygon_area(second) - 2.0 * overlap)


def _sym_diff_montecarlo(first: ConvexBody, second: ConvexBody, seed: int, samples: int) -> SymDiffEstimate:
    """Estimate |A Δ B| by hit-or-miss sampling in a shared bounding box."""
    logger = logging.getLogger(constants.logging.Rich)
    stacked = [body.as_array() for body in (first, second) if not body.is_empty]
    if not stacked:
        return SymDiffEstimate(0.0, 0.0, SymDiffMethod.MONTECARLO)
    points = np.vstack(stacked)
    low, high = points.min(axis=0), points.max(axis=0)
    box_volume = float(np.prod(high - low))
    if box_volume == 0.0:
        return SymDiffEstimate(0.0, 0.0, SymDiffMethod.MONTECARLO)
    # STEP: draw the samples in batches and count the points in exactly one body;
    # every batch draws from its own child seed so the estimate does not
    # depend on how the batches are scheduled
    batches = constants.montecarlo.Batches
    batch_sizes = [samples // batches + (1 if index < samples % batches else 0) for index in range(batches)]
    children = np.random.SeedSequence(seed).spawn(batches)
    hits = 0
    for child, size in zip(children, batch_sizes):
        if size == 0:
            continue
        generator = np.random.default_rng(child)
        draws = low + (high - low) * generator.random((size, first.dim))
        inside_first = _membership(first, draws)
        inside_second = _membership(second, draws)
        hits += int(np.count_nonzero(inside_first ^ inside_second))
    # STEP: turn the hit fraction into a volume and a normal-approximation interval
    fraction = hits / samples
    quantile = float(stats.norm.ppf(0.5 + constants.montecarlo.Confidence / 2.0))
    half_width = quantile * box_volume * math.sqrt(fraction * (1.0 - fraction) / samples)
    logger.debug(f"Monte Carlo symmetric difference: {hits} hits out of {samples}")
    return SymDiffEstimate(box_volume * fraction, half_width, SymDiffMethod.MONTECARLO)


def _membership(body: ConvexBody, points: np.ndarray) -> np.ndarray:
    """Return exact membership of the points, treating degenerate bodies as null sets."""
    if body.is_empty or not is_full_dimensional(body):
        return np.zeros(len(points), dtype=bool)
    return contains_points(body, points, 0.0)


def sym_diff_volume(
    first: ConvexBody,
    second: ConvexBody,
    method: SymDiffMethod = SymDiffMethod.EXACT2D,
    seed: int = 0,
    samples: int = constants.montecarlo.Samples,
) -> SymDiffEstimate:
    """Return the volume of the symmetric difference of two bodies."""
    if first.dim != second.dim:
        raise errors.MethodUnsupported(
            f"bodies of dimensions {first.dim} and {second.dim} cannot be compared"
        )
    if SymDiffMethod(method) is SymDiffMethod.EXACT2D:
        if first.dim != 2:
            raise errors.MethodUnsupported(f"exact2d needs dimension 2, not {first.dim}")
        value = polygon_sym_diff(ordered_polygon(first), ordered_polygon(second))
        return SymDiffEstimate(value, 0.0, SymDiffMethod.EXACT2D)
    if samples < 1:
        raise errors.MethodUnsupported("Monte Carlo estimation needs at least one sample")
    return _sym_diff_montecarlo(first, second, seed, samples)
