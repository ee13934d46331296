"""Tests for the profile module."""

import math

import numpy as np
import pytest

from hypothesis import given
from hypothesis import settings
from hypothesis import strategies as st

from grunstab import errors
from grunstab import generate
from grunstab import geometry
from grunstab import normalize
from grunstab import profile as profiles

SQUARE = [[-0.5, -0.5], [0.5, -0.5], [0.5, 0.5], [-0.5, 0.5]]
TRIANGLE = [[0.0, 0.0], [0.0, 2.0], [3.0, 1.0]]
SQRT_TWO = math.sqrt(2.0)


def square_pair() -> normalize.NormalizedPair:
    """Return the unit square cut by {x_1 = 0}."""
    return normalize.normalize(geometry.create_body(SQUARE), normalize.first_axis_plane(2))


def triangle_pair() -> normalize.NormalizedPair:
    """Return the triangle cut parallel to its base, apex side positive."""
    triangle = geometry.create_body(TRIANGLE)
    return normalize.normalize(triangle, normalize.auto_plane(triangle, 0))


def adaptive_simpson(function, low: float, high: float, tolerance: float = 1e-12, depth: int = 40) -> float:
    """Integrate a function by adaptive Simpson quadrature, an oracle independent of the profiles."""

    def simpson(left, right, f_left, f_middle, f_right):
        return (right - left) * (f_left + 4.0 * f_middle + f_right) / 6.0

    def recurse(left, right, f_left, f_middle, f_right, whole, tolerance, depth):
        middle = 0.5 * (left + right)
        left_middle, right_middle = 0.5 * (left + middle), 0.5 * (middle + right)
        f_left_middle, f_right_middle = function(left_middle), function(right_middle)
        first = simpson(left, middle, f_left, f_left_middle, f_middle)
        second = simpson(middle, right, f_middle, f_right_middle, f_right)
        if depth <= 0 or abs(first + second - whole) <= 15.0 * tolerance:
            return first + second + (first + second - whole) / 15.0
        return recurse(left, middle, f_left, f_left_middle, f_middle, first, tolerance / 2.0, depth - 1) + recurse(
            middle, right, f_middle, f_right_middle, f_right, second, tolerance / 2.0, depth - 1
        )

    f_low, f_high, f_middle = function(low), function(high), function(0.5 * (low + high))
    return recurse(low, high, f_low, f_middle, f_high, simpson(low, high, f_low, f_middle, f_high), tolerance, depth)


def test_square_profile_is_constant_one():
    """Check that the square has a single constant segment equal to one."""
    profile = profiles.build_profile(square_pair())
    assert profile.support == pytest.approx((-0.5, 0.5))
    assert len(profile.coeffs) == 1
    assert profile.coeffs[0][0] == pytest.approx(1.0, abs=1e-12)
    assert profiles.evaluate(profile, [-0.6, 0.0, 0.6]).tolist() == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)
    assert profiles.check_profile(profile, mass=1.0) == []


def test_triangle_profile_is_linear():
    """Check that the normalized triangle decreases linearly from 2 / (b - a) to zero."""
    pair = triangle_pair()
    profile = profiles.build_profile(pair)
    assert profile.degree <= 1
    assert profiles.evaluate(profile, pair.a)[0] == pytest.approx(2.0 / (pair.b - pair.a), abs=1e-9)
    assert profiles.evaluate(profile, pair.b)[0] == pytest.approx(0.0, abs=1e-9)
    assert profiles.check_profile(profile, mass=1.0) == []


def test_simplex_profile_is_quadratic():
    """Check that the sections of the 3-simplex along e_1 have area (1 - x)^2 / 2."""
    simplex = geometry.create_body([[0, 0, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]])
    pair = normalize.NormalizedPair(
        body=simplex, map=geometry.identity_map(3), a=0.0, b=1.0, k0_measure=0.5, t=1.0
    )
    profile = profiles.build_profile(pair)
    assert profile.degree <= 2
    points = np.array([0.0, 0.25, 0.5, 0.9])
    assert np.allclose(profiles.evaluate(profile, points), (1.0 - points) ** 2 / 2.0, atol=1e-12)
    assert profiles.integrate(profile) == pytest.approx(1.0 / 6.0, abs=1e-12)


def test_first_moment_vanishes_in_canonical_position():
    """Check that ∫ x g^(n-1) is zero because the centroid is the origin."""
    for pair in (square_pair(), triangle_pair()):
        profile = profiles.build_profile(pair)
        assert profiles.integrate(profile, weight=profiles.Weight.X) == pytest.approx(0.0, abs=1e-9)
        assert profiles.integrate(profile) == pytest.approx(1.0, abs=1e-9)
        assert profiles.integrate(profile, 0.0) == pytest.approx(pair.t, abs=1e-9)


def test_square_cone_profiles_by_hand():
    """Check a', b', d, v and the cone integrals of the unit square."""
    pair = square_pair()
    cones = profiles.build_cone_profiles(pair, profiles.build_profile(pair))
    assert cones.b_prime == pytest.approx(1.0, abs=1e-9)
    assert cones.a_prime == pytest.approx(1.0 - SQRT_TWO, abs=1e-9)
    assert cones.d == pytest.approx(math.sqrt(0.5) - 2.0 / 3.0, abs=1e-9)
    assert cones.v == pytest.approx(0.5, abs=1e-9)
    assert cones.g0 == pytest.approx(1.0, abs=1e-12)
    cone = profiles.cone_profile(cones)
    assert profiles.integrate(cone) == pytest.approx(1.0, abs=1e-9)
    assert profiles.integrate(cone, 0.0) == pytest.approx(0.5, abs=1e-9)
    assert profiles.integrate(cone, weight=profiles.Weight.X) == pytest.approx(0.0571910, abs=1e-6)
    assert profiles.integrate(cone, weight=profiles.Weight.X) == pytest.approx(
        (cones.b_prime - cones.a_prime) * cones.d, abs=1e-9
    )


def test_square_cone_moment_matches_quadrature_oracle():
    """Check ∫ x c over [a', b'] against an adaptive Simpson oracle."""
    pair = square_pair()
    cones = profiles.build_cone_profiles(pair, profiles.build_profile(pair))
    oracle = adaptive_simpson(lambda x: x * (1.0 - x), 1.0 - SQRT_TWO, 1.0)
    assert profiles.integrate(profiles.cone_profile(cones), weight=profiles.Weight.X) == pytest.approx(
        oracle, abs=1e-10
    )


def test_square_h_norms_by_hand():
    """Check ∫|h| and ∫|h_1| for the unit square."""
    pair = square_pair()
    profile = profiles.build_profile(pair)
    cones = profiles.build_cone_profiles(pair, profile)
    h = profiles.subtract(profiles.cone_profile(cones), profile)
    assert profiles.l1_norm(h) == pytest.approx(0.4215729, abs=1e-6)
    h1 = profiles.restrict(h, -math.inf, 0.0)
    h2 = profiles.restrict(h, 0.0, math.inf)
    assert profiles.l1_norm(h1) == pytest.approx(0.1715729, abs=1e-6)
    assert profiles.l1_norm(h2) == pytest.approx(0.25, abs=1e-9)
    result = profiles.lemma_single_crossing_bound(h1, 3.0 * 2 + 1.0)
    assert result.bound_ok
    assert result.moment_ok
    assert result.l1 == pytest.approx(0.1715729, abs=1e-6)


def test_cone_profile_matches_the_triangle():
    """Check that c coincides with g for the normalized triangle."""
    pair = triangle_pair()
    profile = profiles.build_profile(pair)
    cones = profiles.build_cone_profiles(pair, profile)
    assert cones.a_prime == pytest.approx(pair.a, abs=1e-9)
    assert cones.b_prime == pytest.approx(pair.b, abs=1e-9)
    assert cones.d == pytest.approx(0.0, abs=1e-9)
    assert profiles.l1_distance(profiles.cone_profile(cones), profile) == pytest.approx(0.0, abs=1e-9)


def test_l1_distance_of_equal_profiles_is_zero():
    """Check that a profile has distance zero from itself."""
    profile = profiles.build_profile(triangle_pair())
    assert profiles.l1_distance(profile, profile) == 0.0


def test_l1_norm_splits_at_sign_changes():
    """Check ∫|x| over [-1, 2] for the linear profile f(x) = x."""
    linear = profiles.piecewise_linear_profile([-1.0, 2.0], [-1.0, 2.0])
    assert profiles.l1_norm(linear) == pytest.approx(2.5, abs=1e-12)
    assert profiles.integrate(linear) == pytest.approx(1.5, abs=1e-12)
    assert profiles.sup_norm(linear) == pytest.approx(2.0)


def test_sup_norm_finds_interior_maximum():
    """Check the largest value of x (1 - x) on [0, 1]."""
    bump = profiles.SectionProfile(support=(0.0, 1.0), breakpoints=(0.0, 1.0), coeffs=((0.0, 1.0, -1.0),), dim=3)
    assert profiles.sup_norm(bump) == pytest.approx(0.25, abs=1e-12)


def test_too_many_sign_changes_overflow():
    """Check that a cubic crossing zero three times in one segment is refused."""
    # (u - 1)(u - 2)(u - 3) on [0, 4]
    cubic = profiles.SectionProfile(
        support=(0.0, 4.0), breakpoints=(0.0, 4.0), coeffs=((-6.0, 11.0, -6.0, 1.0),), dim=4
    )
    with pytest.raises(errors.SignChangeOverflow):
        profiles.l1_norm(cubic)


def test_lemma_tight_step_function():
    """Check the equality case f = -1 on [-1, 0) and +1 on [0, 1) with M = 1."""
    step = profiles.step_profile([-1.0, 0.0, 1.0], [-1.0, 1.0])
    result = profiles.lemma_single_crossing_bound(step, 1.0)
    assert result.xf_moment == pytest.approx(1.0, abs=1e-12)
    assert result.l1 == pytest.approx(2.0, abs=1e-12)
    assert result.bound == pytest.approx(2.0, abs=1e-12)
    assert result.bound_ok
    assert result.moment_ok


def test_lemma_zero_function():
    """Check that the zero function satisfies the lemma trivially."""
    result = profiles.lemma_single_crossing_bound(profiles.zero_profile(2), 1.0)
    assert result.l1 == 0.0
    assert result.bound == 0.0
    assert result.bound_ok


def test_lemma_preconditions_are_named():
    """Check the condition carried by each precondition violation."""
    nonzero = profiles.step_profile([-1.0, 0.0, 1.0], [-1.0, 2.0])
    with pytest.raises(errors.PreconditionViolated) as raised:
        profiles.lemma_single_crossing_bound(nonzero, 5.0)
    assert raised.value.condition == "zero_integral"
    reversed_sign = profiles.step_profile([-1.0, 0.0, 1.0], [1.0, -1.0])
    with pytest.raises(errors.PreconditionViolated) as raised:
        profiles.lemma_single_crossing_bound(reversed_sign, 5.0)
    assert raised.value.condition == "single_sign_change"
    large = profiles.step_profile([-1.0, 0.0, 1.0], [-2.0, 2.0])
    with pytest.raises(errors.PreconditionViolated) as raised:
        profiles.lemma_single_crossing_bound(large, 1.0)
    assert raised.value.condition == "bounded_by_m"


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_lemma_holds_for_random_step_functions(seed):
    """Check both statements of the lemma on random single-crossing step functions."""
    function, bound_m = generate.single_crossing_step(np.random.default_rng(seed))
    result = profiles.lemma_single_crossing_bound(function, bound_m)
    assert result.moment_ok
    assert result.bound_ok


@settings(max_examples=200, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1))
def test_lemma_holds_for_random_piecewise_linear_functions(seed):
    """Check both statements of the lemma on random continuous single-crossing functions."""
    function, bound_m = generate.single_crossing_linear(np.random.default_rng(seed))
    result = profiles.lemma_single_crossing_bound(function, bound_m)
    assert result.moment_ok
    assert result.bound_ok


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(min_value=0, max_value=2**32 - 1), dim=st.sampled_from([2, 3]))
def test_random_profiles_satisfy_their_invariants(seed, dim):
    """Check mass, continuity and concavity of g for random bodies."""
    generator = np.random.default_rng(seed)
    if dim == 2:
        body = generate.random_polygon(generator)
    else:
        body = generate.random_polytope(generator, 3, 10)
    pair = normalize.normalize(body, generate.random_centroid_plane(generator, body))
    profile = profiles.build_profile(pair)
    assert profiles.check_profile(profile, mass=1.0) == []
    assert profiles.integrate(profile, 0.0) == pytest.approx(pair.t, abs=1e-9)


def oracle_integral(profile: profiles.SectionProfile, function, low: float, high: float) -> float:
    """Integrate function over [low, high] by adaptive Simpson, one profile segment at a time."""
    total = 0.0
    for left, right, _ in profiles.segments(profile):
        start, stop = max(left, low), min(right, high)
        if stop > start:
            total += adaptive_simpson(function, start, stop, tolerance=1e-11, depth=30)
    return total


def test_integrals_match_the_quadrature_oracle_on_random_profiles():
    """Check integrate and l1_norm against adaptive Simpson on fifty seeded profiles."""
    generator = np.random.default_rng(50)
    for index in range(50):
        if index % 2 == 0:
            body = generate.random_polygon(generator)
        else:
            body = generate.random_polytope(generator, 3, 10)
        pair = normalize.normalize(body, generate.random_centroid_plane(generator, body))
        profile = profiles.build_profile(pair)
        cones = profiles.build_cone_profiles(pair, profile)
        h = profiles.subtract(profiles.cone_profile(cones), profile)
        low, high = sorted(generator.uniform(pair.a, pair.b, size=2))

        def value(x, target=profile):
            return float(profiles.evaluate(target, x)[0])

        assert profiles.integrate(profile) == pytest.approx(
            oracle_integral(profile, value, pair.a, pair.b), abs=1e-7
        )
        assert profiles.integrate(profile, weight=profiles.Weight.X) == pytest.approx(
            oracle_integral(profile, lambda x: x * value(x), pair.a, pair.b), abs=1e-7
        )
        assert profiles.integrate(profile, low, high) == pytest.approx(
            oracle_integral(profile, value, low, high), abs=1e-7
        )
        # |h| has kinks at its sign changes, which the oracle resolves by refinement
        assert profiles.l1_norm(h) == pytest.approx(
            oracle_integral(h, lambda x: abs(value(x, h)), -math.inf, math.inf), abs=1e-7
        )
