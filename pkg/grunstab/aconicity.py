"""Bound the aconicity A(K) = inf |K Δ C| / |K| over all cones C."""

import itertools
import logging
import math

from dataclasses import dataclass

from typing import Callable
from typing import List
from typing import Optional
from typing import Tuple

import numpy as np

from scipy import optimize

from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import normalize
from grunstab import profile as profiles
from grunstab import witness

WITNESS = "witness"
NELDER_MEAD = "nelder-mead"


@dataclass(frozen=True)
class AconicityEstimate:
    """An upper bound on A(K), optionally tightened by a search over triangles."""

    witness_bound: float
    optimized_bound: Optional[float]
    method: str
    iterations: int
    seed: int

    @property
    def best(self) -> float:
        """Return the smallest available bound."""
        if self.optimized_bound is None:
            return self.witness_bound
        return min(self.witness_bound, self.optimized_bound)


def aconicity_upper(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
) -> AconicityEstimate:
    """Bound A(K) by |K Δ C| for the witness cone; |K| = 1 in canonical position."""
    cone = witness.build_witness(pair, profile, cones)
    return AconicityEstimate(
        witness_bound=witness.sym_diff_via_profiles(profile, cone),
        optimized_bound=None,
        method=WITNESS,
        iterations=0,
        seed=0,
    )


def triangle_objective(body: geometry.ConvexBody) -> Callable[[np.ndarray], float]:
    """Return the map from six triangle coordinates to |K Δ T| / |K|."""
    target = geometry.ordered_polygon(body)
    area = geometry.polygon_area(target)

    def objective(parameters: np.ndarray) -> float:
        triangle = np.asarray(parameters, dtype=float).reshape(3, 2)
        # --> the clipping needs counter-clockwise corners
        first, second, third = triangle
        orientation = (second[0] - first[0]) * (third[1] - first[1]) - (second[1] - first[1]) * (
            third[0] - first[0]
        )
        if orientation < 0.0:
            triangle = triangle[::-1]
        return geometry.polygon_sym_diff(target, triangle) / area

    return objective


def witness_triangle(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
) -> np.ndarray:
    """Return the witness cone of a planar pair as a (3, 2) array of corners."""
    cone = witness.build_witness(pair, profile, cones)
    base = cone.base_body.as_array()[:, 0]
    corners = [(cone.base_x, float(base.min())), (cone.base_x, float(base.max())), cone.apex]
    return np.array(corners, dtype=float)


def largest_vertex_triangle(body: geometry.ConvexBody) -> np.ndarray:
    """Return the triangle of largest area spanned by three vertices of the polygon."""
    points = body.as_array()
    best = max(
        itertools.combinations(range(len(points)), 3),
        key=lambda corners: geometry.polygon_area(points[list(corners)]),
    )
    return points[list(best)]


def random_triangle(generator: np.random.Generator) -> np.ndarray:
    """Return a random triangle that contains the origin."""
    # three angles with gaps below pi keep the origin inside
    start = generator.uniform(0.0, 2.0 * math.pi)
    angles = start + np.array([0.0, 2.0, 4.0]) * math.pi / 3.0
    angles = angles + generator.uniform(-math.pi / 6.0, math.pi / 6.0, size=3)
    radii = generator.uniform(constants.optimizer.Radius_Low, constants.optimizer.Radius_High, size=3)
    return np.column_stack([radii * np.cos(angles), radii * np.sin(angles)])


def _search(objective: Callable[[np.ndarray], float], start: np.ndarray) -> Tuple[float, int]:
    """Run one Nelder-Mead search and return its best value and iteration count."""
    result = optimize.minimize(
        objective,
        start.ravel(),
        method=constants.optimizer.Method,
        options={
            "xatol": constants.optimizer.Xatol,
            "fatol": constants.optimizer.Fatol,
            "maxfev": constants.optimizer.Max_Evaluations,
        },
    )
    return min(float(result.fun), objective(start.ravel())), int(result.nit)


def aconicity_optimize_pair(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
    seed: int,
    restarts: int,
) -> AconicityEstimate:
    """Search over triangles near the canonical body for a smaller |K Δ T|."""
    logger = logging.getLogger(constants.logging.Rich)
    if pair.dim != 2:
        raise errors.MethodUnsupported(f"the triangle search needs dimension 2, not {pair.dim}")
    witness_bound = aconicity_upper(pair, profile, cones).witness_bound
    objective = triangle_objective(pair.body)
    # STEP: seed the search with the witness and the largest vertex triangle, then add random starts
    starts: List[np.ndarray] = [
        witness_triangle(pair, profile, cones),
        largest_vertex_triangle(pair.body),
    ]
    # every restart owns a child seed, so the merged minimum does not depend on the run order
    for child in np.random.SeedSequence(seed).spawn(restarts):
        starts.append(random_triangle(np.random.default_rng(child)))
    # STEP: keep the best local minimum over all the starts
    outcomes = [_search(objective, start) for start in starts]
    best_value, best_index = min((value, index) for index, (value, _) in enumerate(outcomes))
    logger.debug(f"Best triangle came from start {best_index} with value {best_value:.6e}")
    return AconicityEstimate(
        witness_bound=witness_bound,
        optimized_bound=best_value,
        method=NELDER_MEAD,
        iterations=sum(count for _, count in outcomes),
        seed=seed,
    )


def aconicity_optimize_2d(
    body: geometry.ConvexBody, seed: int, restarts: int = constants.optimizer.Restarts
) -> AconicityEstimate:
    """Normalize a polygon with its vertical centroid line and search over triangles."""
    pair = normalize.normalize(body, normalize.auto_plane(body, 0))
    profile = profiles.build_profile(pair)
    cones = profiles.build_cone_profiles(pair, profile)
    return aconicity_optimize_pair(pair, profile, cones, seed, restarts)
