"""Bring a body and a centroid hyperplane into canonical position."""

import logging

from dataclasses import dataclass

from typing import List
from typing import Tuple

import numpy as np

from scipy import optimize

from grunstab import constants
from grunstab import errors
from grunstab import geometry


@dataclass(frozen=True)
class NormalizedPair:
    """A body in canonical position together with the map that put it there.

    In canonical position the centroid is the origin, the hyperplane is
    {x_1 = 0} with H+ = {x_1 >= 0}, the largest section has measure one and
    the body has volume one. The fields a and b are the extreme first
    coordinates, k0_measure is |K_0| and t is |K ∩ H+| / |K|.
    """

    body: geometry.ConvexBody
    map: geometry.AffineMap
    a: float
    b: float
    k0_measure: float
    t: float

    @property
    def dim(self) -> int:
        """Return the dimension of the body."""
        return self.body.dim


@dataclass(frozen=True)
class InvarianceCheck:
    """The Grünbaum ratio before and after an affine map."""

    passed: bool
    delta: float
    before: float
    after: float


def first_axis_plane(dim: int) -> geometry.Hyperplane:
    """Return the hyperplane {x_1 = 0} oriented towards positive x_1."""
    normal = np.zeros(dim)
    normal[0] = 1.0
    return geometry.Hyperplane(normal=tuple(float(value) for value in normal), offset=0.0)


def auto_plane(body: geometry.ConvexBody, axis: int) -> geometry.Hyperplane:
    """Return the hyperplane through the centroid orthogonal to a coordinate axis."""
    if not 0 <= axis < body.dim:
        raise errors.InputError(f"axis must lie in [0, {body.dim - 1}], found {axis}")
    normal = np.zeros(body.dim)
    normal[axis] = 1.0
    return geometry.hyperplane_through(geometry.centroid(body), normal)


def grunbaum_ratio(body: geometry.ConvexBody, plane: geometry.Hyperplane) -> float:
    """Return |K ∩ H+| / |K|."""
    total = geometry.volume(body)
    if total <= 0.0:
        raise errors.DegenerateBody("the Grünbaum ratio needs a body of positive volume")
    return geometry.volume(geometry.clip(body, plane, geometry.Side.POSITIVE)) / total


def rotation_to_first_axis(normal: np.ndarray) -> np.ndarray:
    """Return the rotation of smallest angle that sends the unit normal to e_1."""
    dim = len(normal)
    first = np.zeros(dim)
    first[0] = 1.0
    cosine = float(normal[0])
    if cosine >= 1.0 - constants.tolerance.Root:
        return np.eye(dim)
    if cosine <= -1.0 + constants.tolerance.Root:
        # half turn in the plane of the first two axes
        rotation = np.eye(dim)
        rotation[0, 0] = -1.0
        rotation[1, 1] = -1.0
        return rotation
    # rotation in the plane spanned by the normal and e_1
    generator = np.outer(first, normal) - np.outer(normal, first)
    return np.eye(dim) + generator + generator @ generator / (1.0 + cosine)


def breakpoints(body: geometry.ConvexBody) -> np.ndarray:
    """Return the sorted distinct first coordinates of the vertices."""
    values = np.sort(body.as_array()[:, 0])
    keep = np.concatenate([[True], np.diff(values) > constants.tolerance.Degenerate])
    return values[keep]


def peak_section(body: geometry.ConvexBody) -> Tuple[float, float]:
    """Locate the largest section measure of a body sliced along its first axis.

    The (n - 1)-th root of the section measure is concave, so the measure is
    unimodal: the best breakpoint brackets the maximum and a bounded scalar
    search refines it between the neighbouring breakpoints.
    """
    grid = breakpoints(body)
    values = np.array([geometry.section_measure(body, x) for x in grid])
    best = int(np.argmax(values))
    low = grid[max(best - 1, 0)]
    high = grid[min(best + 1, len(grid) - 1)]
    peak_x, peak_value = float(grid[best]), float(values[best])
    if high > low:
        result = optimize.minimize_scalar(
            lambda x: -geometry.section_measure(body, x),
            bounds=(low, high),
            method="bounded",
            options={"xatol": constants.tolerance.Search},
        )
        if -result.fun > peak_value:
            peak_x, peak_value = float(result.x), float(-result.fun)
    return peak_x, peak_value


def normalize(body: geometry.ConvexBody, plane: geometry.Hyperplane) -> NormalizedPair:
    """Map the body and the hyperplane into canonical position."""
    logger = logging.getLogger(constants.logging.Rich)
    if body.dim < 2:
        raise errors.UnsupportedDimension("normalization needs dimension at least 2")
    if plane.dim != body.dim:
        raise errors.InputError(
            f"hyperplane of dimension {plane.dim} does not match body of dimension {body.dim}"
        )
    total = geometry.volume(body)
    if total <= 0.0:
        raise errors.DegenerateBody("normalization needs a body of positive volume")
    center = geometry.centroid(body)
    # STEP: confirm that the plane cuts through the centroid
    points = body.as_array()
    diameter = float(np.linalg.norm(np.ptp(points, axis=0)))
    miss = abs(float(geometry.signed_distances(center[None, :], plane)[0]))
    if miss > constants.tolerance.Centroid * diameter:
        raise errors.CentroidMismatch(
            f"hyperplane misses the centroid by {miss:.3e} (body diameter {diameter:.3e})"
        )
    # STEP: translate the centroid to the origin and rotate the normal onto e_1
    rotation = rotation_to_first_axis(np.asarray(plane.normal, dtype=float))
    rotated = geometry.create_body((points - center) @ rotation.T, body.dim)
    # STEP: scale the transverse coordinates so that the largest section is one;
    # scaling them by lam multiplies every section measure by lam^(n - 1)
    _, peak = peak_section(rotated)
    transverse = peak ** (-1.0 / (body.dim - 1))
    # STEP: scale the first coordinate so that the volume is one
    stretch = peak / total
    scaling = np.diag([stretch] + [transverse] * (body.dim - 1))
    linear = scaling @ rotation
    affine = geometry.make_map(linear, -linear @ center)
    logger.debug(f"Normalizing map has determinant {geometry.map_determinant(affine):.6e}")
    normalized = geometry.transform_body(body, affine)
    low, high = geometry.first_axis_bounds(normalized)
    k0_measure = geometry.section_measure(normalized, 0.0)
    ratio = grunbaum_ratio(normalized, first_axis_plane(body.dim))
    return NormalizedPair(
        body=normalized, map=affine, a=low, b=high, k0_measure=k0_measure, t=ratio
    )


def ratio_invariance_check(
    body: geometry.ConvexBody, plane: geometry.Hyperplane, affine: geometry.AffineMap
) -> InvarianceCheck:
    """Compare the Grünbaum ratio of a pair with the ratio of its image under the map."""
    if abs(geometry.map_determinant(affine)) == 0.0:
        raise errors.DegenerateBody("the affine map is not invertible")
    before = grunbaum_ratio(body, plane)
    after = grunbaum_ratio(
        geometry.transform_body(body, affine), geometry.transform_hyperplane(plane, affine)
    )
    delta = abs(after - before)
    return InvarianceCheck(
        passed=delta <= constants.tolerance.Check, delta=delta, before=before, after=after
    )


def validate_pair(pair: NormalizedPair) -> List[str]:
    """Return the description of every canonical-position invariant that fails."""
    tolerance = constants.tolerance.Check
    dim = pair.dim
    failures = []
    center = geometry.centroid(pair.body)
    if float(np.linalg.norm(center)) > tolerance:
        failures.append(f"centroid {center} is not at the origin")
    _, peak = peak_section(pair.body)
    if abs(peak - 1.0) > tolerance:
        failures.append(f"largest section measure is {peak}, not 1")
    total = geometry.volume(pair.body)
    if abs(total - 1.0) > tolerance:
        failures.append(f"volume is {total}, not 1")
    if not pair.a < -1.0 / 3.0 + tolerance:
        failures.append(f"a = {pair.a} is not below -1/3")
    if not pair.b > 1.0 / 3.0 - tolerance:
        failures.append(f"b = {pair.b} is not above 1/3")
    if pair.b - pair.a > dim + tolerance:
        failures.append(f"b - a = {pair.b - pair.a} exceeds n = {dim}")
    if not 1.0 / (3.0 * dim) - tolerance <= pair.k0_measure <= 1.0 + tolerance:
        failures.append(f"|K_0| = {pair.k0_measure} is outside [1/(3n), 1]")
    return failures
