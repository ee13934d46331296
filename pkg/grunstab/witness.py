"""Build the explicit witness cone C and measure |K Δ C|."""

import logging

from dataclasses import dataclass

from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from grunstab import constants
from grunstab import geometry
from grunstab import normalize
from grunstab import profile as profiles


@dataclass(frozen=True)
class WitnessCone:
    """The cone with apex (b, β) and base β + ((b - a') / b)(K_0 - β) at x = a'.

    The profile of the cone is s(x) = g(0)(b - x) / b on [a', b], and
    s_profile stores s^(n - 1) so that it can be compared with |K_x|.
    """

    apex: geometry.Point
    base_x: float
    base_body: geometry.ConvexBody
    s_profile: profiles.SectionProfile
    g0: float
    b: float

    @property
    def dim(self) -> int:
        """Return the dimension of the cone."""
        return len(self.apex)

    def s_value(self, x: float) -> float:
        """Return s(x) = g(0)(b - x) / b."""
        return self.g0 * (self.b - x) / self.b


@dataclass(frozen=True)
class ContainmentReport:
    """Both inclusions used to express |K Δ C| through profiles."""

    cone_in_body: bool
    body_in_cone: bool


@dataclass(frozen=True)
class BetaInvarianceCheck:
    """The geometric |K Δ C| for several apex choices in K_b."""

    passed: bool
    spread: float
    values: Tuple[float, ...]
    method: geometry.SymDiffMethod


def build_witness(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
    beta: Optional[Sequence[float]] = None,
) -> WitnessCone:
    """Construct the witness cone, placing the apex over the centroid of K_b unless β is given."""
    # STEP: put the apex over a point β of the top section K_b
    top = geometry.slice_body(pair.body, pair.b)
    beta_point = geometry.relative_centroid(top) if beta is None else np.asarray(beta, dtype=float)
    # STEP: scale K_0 away from β so that the base sits at x_1 = a'
    middle = geometry.slice_body(pair.body, 0.0).as_array()
    ratio = (pair.b - cones.a_prime) / pair.b
    base = geometry.create_body(beta_point + ratio * (middle - beta_point), pair.dim - 1)
    s_profile = profiles.linear_power_profile(
        cones.a_prime, pair.b, cones.g0 / pair.b, pair.b, profile.dim
    )
    return WitnessCone(
        apex=(float(pair.b),) + tuple(float(value) for value in beta_point),
        base_x=cones.a_prime,
        base_body=base,
        s_profile=s_profile,
        g0=cones.g0,
        b=pair.b,
    )


def witness_body(cone: WitnessCone) -> geometry.ConvexBody:
    """Return the cone as an n-dimensional V-polytope."""
    base = cone.base_body.as_array()
    lifted = np.hstack([np.full((len(base), 1), cone.base_x), base])
    return geometry.create_body(np.vstack([lifted, np.asarray(cone.apex)]), cone.dim)


def sym_diff_via_profiles(profile: profiles.SectionProfile, cone: WitnessCone) -> float:
    """Return |K Δ C| as the integral of |g^(n-1) - s^(n-1)|."""
    return profiles.l1_distance(profile, cone.s_profile)


def sym_diff_geometric(
    pair: normalize.NormalizedPair,
    cone: WitnessCone,
    method: Optional[geometry.SymDiffMethod] = None,
    seed: int = 0,
    samples: int = constants.montecarlo.Samples,
) -> geometry.SymDiffEstimate:
    """Return |K Δ C| computed from the two polytopes."""
    if method is None:
        method = geometry.SymDiffMethod.EXACT2D if pair.dim == 2 else geometry.SymDiffMethod.MONTECARLO
    return geometry.sym_diff_volume(pair.body, witness_body(cone), method, seed, samples)


def containment_checks(pair: normalize.NormalizedPair, cone: WitnessCone) -> ContainmentReport:
    """Check C ∩ H+ ⊆ K ∩ H+ and K ∩ ([a', 0] × R^(n-1)) ⊆ C on vertices."""
    tolerance = constants.tolerance.Check
    dim = pair.dim
    cone_polytope = witness_body(cone)
    upper = normalize.first_axis_plane(dim)
    cone_upper = geometry.clip(cone_polytope, upper, geometry.Side.POSITIVE)
    cone_in_body = cone_upper.is_empty or bool(
        np.all(geometry.contains_points(pair.body, cone_upper.as_array(), tolerance))
    )
    # the slab a' <= x_1 <= 0, written as two half-spaces
    lower_wall = geometry.hyperplane_through(np.eye(dim)[0] * cone.base_x, np.eye(dim)[0])
    slab = geometry.clip(
        geometry.clip(pair.body, lower_wall, geometry.Side.POSITIVE), upper, geometry.Side.NEGATIVE
    )
    body_in_cone = slab.is_empty or bool(
        np.all(geometry.contains_points(cone_polytope, slab.as_array(), tolerance))
    )
    return ContainmentReport(cone_in_body=cone_in_body, body_in_cone=body_in_cone)


def beta_invariance_check(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
    trials: int,
    seed: int,
    samples: int = constants.montecarlo.Samples,
) -> BetaInvarianceCheck:
    """Rebuild the cone for random apexes in K_b and compare the geometric |K Δ C| values."""
    logger = logging.getLogger(constants.logging.Rich)
    method = geometry.SymDiffMethod.EXACT2D if pair.dim == 2 else geometry.SymDiffMethod.MONTECARLO
    top = geometry.slice_body(pair.body, pair.b).as_array()
    if len(top) == 1:
        # K_b is the apex of K itself: there is only one choice of β
        value = sym_diff_geometric(pair, build_witness(pair, profile, cones), method, seed, samples).value
        return BetaInvarianceCheck(passed=True, spread=0.0, values=(value,), method=method)
    # STEP: draw random apexes as convex combinations of the vertices of K_b
    generator = np.random.default_rng(seed)
    weights = generator.dirichlet(np.ones(len(top)), size=trials)
    estimates = [
        sym_diff_geometric(pair, build_witness(pair, profile, cones, beta), method, seed, samples)
        for beta in weights @ top
    ]
    # STEP: compare the spread of the values with the accuracy of the method
    values = tuple(estimate.value for estimate in estimates)
    spread = max(values) - min(values)
    if method is geometry.SymDiffMethod.EXACT2D:
        passed = spread <= constants.tolerance.Beta_Exact
    else:
        # two estimates inside their own intervals differ by at most both half-widths
        passed = spread <= 2.0 * max(estimate.half_width for estimate in estimates)
    logger.debug(f"β invariance over {trials} trials: spread {spread:.3e}")
    return BetaInvarianceCheck(passed=passed, spread=spread, values=values, method=method)
