"""Exact piecewise-polynomial calculus for section-measure profiles."""

import logging
import math

from dataclasses import dataclass
from enum import Enum

from typing import Iterator
from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple

import numpy as np

from numpy.polynomial import Polynomial
from numpy.polynomial import legendre
from numpy.polynomial import polynomial as poly

from scipy import optimize

from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import normalize


class Weight(str, Enum):
    """The weights an integral can carry."""

    ONE = "1"
    X = "x"


@dataclass(frozen=True)
class SectionProfile:
    """A piecewise polynomial that vanishes outside its support.

    Segment i covers [breakpoints[i], breakpoints[i + 1]] and carries the
    coefficients, lowest degree first, of a polynomial in x - breakpoints[i].
    Built from a body, it stores x -> |K_x| = g(x)^(n - 1).
    """

    support: Tuple[float, float]
    breakpoints: Tuple[float, ...]
    coeffs: Tuple[Tuple[float, ...], ...]
    dim: int

    @property
    def degree(self) -> int:
        """Return the largest polynomial degree over the segments."""
        if not self.coeffs:
            return 0
        return max(len(segment) for segment in self.coeffs) - 1


@dataclass(frozen=True)
class ConeProfiles:
    """The parameters of the matched cone profile c(x) = g0 (b' - x) / b'."""

    a_prime: float
    b_prime: float
    g0: float
    k0: float
    d: float
    v: float
    t: float
    q_n: float
    dim: int


@dataclass(frozen=True)
class LemmaResult:
    """The two statements of the single-crossing lemma evaluated on one function."""

    xf_moment: float
    l1: float
    bound: float
    bound_ok: bool
    moment_ok: bool


def grunbaum_constant(dim: int) -> float:
    """Return q_n = (n / (n + 1))^n."""
    return (dim / (dim + 1.0)) ** dim


def zero_profile(dim: int) -> SectionProfile:
    """Return the profile of the zero function."""
    return SectionProfile(support=(0.0, 0.0), breakpoints=(0.0,), coeffs=(), dim=dim)


def _make_profile(grid: Sequence[float], pieces: Sequence[np.ndarray], dim: int) -> SectionProfile:
    """Assemble a profile from a grid and one coefficient array per segment."""
    if len(grid) < 2:
        return zero_profile(dim)
    return SectionProfile(
        support=(float(grid[0]), float(grid[-1])),
        breakpoints=tuple(float(x) for x in grid),
        coeffs=tuple(tuple(float(c) for c in piece) for piece in pieces),
        dim=dim,
    )


def segments(profile: SectionProfile) -> Iterator[Tuple[float, float, np.ndarray]]:
    """Yield (left, right, coefficients) for every segment."""
    for index, piece in enumerate(profile.coeffs):
        yield profile.breakpoints[index], profile.breakpoints[index + 1], np.array(piece)


def _segment_index(profile: SectionProfile, x: float) -> Optional[int]:
    """Return the segment that contains x, or None outside the support."""
    if not profile.coeffs or x < profile.support[0] or x > profile.support[1]:
        return None
    index = int(np.searchsorted(profile.breakpoints, x, side="right")) - 1
    return min(max(index, 0), len(profile.coeffs) - 1)


def _shift(piece: np.ndarray, offset: float) -> np.ndarray:
    """Rewrite p(u) as a polynomial in w = u - offset."""
    if offset == 0.0:
        return np.array(piece, dtype=float)
    return Polynomial(piece)(Polynomial([offset, 1.0])).coef


def evaluate(profile: SectionProfile, x) -> np.ndarray:
    """Evaluate the profile, zero-extended outside its support."""
    values = np.atleast_1d(np.asarray(x, dtype=float))
    result = np.zeros_like(values)
    for position, point in enumerate(values):
        index = _segment_index(profile, point)
        if index is not None:
            result[position] = poly.polyval(point - profile.breakpoints[index], profile.coeffs[index])
    return result


def root_values(profile: SectionProfile, x) -> np.ndarray:
    """Evaluate g = profile^(1 / (n - 1)), clamping rounding noise below zero."""
    values = np.clip(evaluate(profile, x), 0.0, None)
    return values ** (1.0 / (profile.dim - 1))


def _merged(*profiles: SectionProfile) -> Tuple[np.ndarray, List[List[np.ndarray]]]:
    """Put several profiles on the union of their breakpoints."""
    grid = np.array(sorted({x for profile in profiles for x in profile.breakpoints if profile.coeffs}))
    pieces: List[List[np.ndarray]] = [[] for _ in profiles]
    for left, right in zip(grid[:-1], grid[1:]):
        middle = 0.5 * (left + right)
        for position, profile in enumerate(profiles):
            index = _segment_index(profile, middle)
            if index is None:
                pieces[position].append(np.zeros(1))
            else:
                piece = np.array(profile.coeffs[index])
                pieces[position].append(_shift(piece, left - profile.breakpoints[index]))
    return grid, pieces


def subtract(first: SectionProfile, second: SectionProfile) -> SectionProfile:
    """Return first - second on the union of the supports."""
    grid, (left_pieces, right_pieces) = _merged(first, second)
    pieces = [poly.polysub(left, right) for left, right in zip(left_pieces, right_pieces)]
    return _make_profile(grid, pieces, first.dim)


def restrict(profile: SectionProfile, low: float, high: float) -> SectionProfile:
    """Multiply the profile by the indicator of [low, high]."""
    cuts = {x for x in (low, high) if math.isfinite(x) and profile.support[0] < x < profile.support[1]}
    grid = np.array(sorted(set(profile.breakpoints) | cuts))
    kept_grid: List[float] = []
    kept_pieces: List[np.ndarray] = []
    for left, right in zip(grid[:-1], grid[1:]):
        middle = 0.5 * (left + right)
        index = _segment_index(profile, middle)
        if index is None or not low <= middle <= high:
            continue
        if not kept_grid:
            kept_grid.append(float(left))
        kept_grid.append(float(right))
        kept_pieces.append(_shift(np.array(profile.coeffs[index]), left - profile.breakpoints[index]))
    return _make_profile(kept_grid, kept_pieces, profile.dim)


def linear_power_profile(low: float, high: float, slope: float, root: float, dim: int) -> SectionProfile:
    """Return the profile of (slope * (root - x))^(n - 1) on [low, high]."""
    if high <= low:
        return zero_profile(dim)
    # in u = x - low the base is slope * (root - low) - slope * u
    base = np.array([slope * (root - low), -slope])
    return _make_profile([low, high], [poly.polypow(base, dim - 1)], dim)


def step_profile(grid: Sequence[float], values: Sequence[float], dim: int = 2) -> SectionProfile:
    """Return the piecewise-constant profile with one value per segment."""
    return _make_profile(grid, [np.array([value]) for value in values], dim)


def piecewise_linear_profile(grid: Sequence[float], values: Sequence[float], dim: int = 2) -> SectionProfile:
    """Return the continuous piecewise-linear interpolant of the values at the grid."""
    pieces = [
        np.array([values[i], (values[i + 1] - values[i]) / (grid[i + 1] - grid[i])])
        for i in range(len(grid) - 1)
    ]
    return _make_profile(grid, pieces, dim)


def build_profile(pair: normalize.NormalizedPair) -> SectionProfile:
    """Recover |K_x| exactly as a polynomial of degree at most n - 1 between vertex coordinates."""
    logger = logging.getLogger(constants.logging.Rich)
    dim = pair.dim
    # STEP: between consecutive vertex coordinates |K_x| is a polynomial of degree n - 1
    grid = normalize.breakpoints(pair.body)
    # Chebyshev-Lobatto nodes include both segment ends, so neighbouring
    # segments share the measured value at every breakpoint
    reference = 0.5 * (1.0 - np.cos(np.pi * np.arange(dim) / (dim - 1)))
    measured = {}
    pieces = []
    for left, right in zip(grid[:-1], grid[1:]):
        nodes = left + reference * (right - left)
        nodes[0], nodes[-1] = left, right
        values = []
        for node in nodes:
            if node not in measured:
                measured[node] = geometry.section_measure(pair.body, float(node))
            values.append(measured[node])
        # --> n nodes determine the polynomial exactly
        pieces.append(poly.polyfit(nodes - left, values, dim - 1))
    logger.debug(f"Built a section profile with {len(pieces)} segments")
    return _make_profile(grid, pieces, dim)


def _node_count(degree: int) -> int:
    """Return the Gauss-Legendre node count that is exact for the degree."""
    return max(1, (degree + 2) // 2)


def _segment_integral(piece: np.ndarray, origin: float, left: float, right: float, weight: Weight) -> float:
    """Integrate one polynomial piece over [left, right] by Gauss-Legendre quadrature."""
    degree = len(piece) - 1 + (1 if weight is Weight.X else 0)
    nodes, weights = legendre.leggauss(_node_count(degree))
    half = 0.5 * (right - left)
    points = left + half * (nodes + 1.0)
    values = poly.polyval(points - origin, piece)
    if weight is Weight.X:
        values = values * points
    return float(half * np.dot(weights, values))


def integrate(
    profile: SectionProfile,
    low: float = -math.inf,
    high: float = math.inf,
    weight: Weight = Weight.ONE,
) -> float:
    """Integrate the profile, optionally against x, over [low, high]."""
    weight = Weight(weight)
    total = 0.0
    for left, right, piece in segments(profile):
        start, stop = max(left, low), min(right, high)
        if stop > start:
            total += _segment_integral(piece, left, start, stop, weight)
    return total


def _sign_changes(piece: np.ndarray, length: float) -> List[float]:
    """Return the points of (0, length) where the polynomial changes sign."""
    trimmed = poly.polytrim(piece)
    if len(trimmed) <= 1:
        return []
    samples = poly.polyval(np.linspace(0.0, length, 9), trimmed)
    if float(np.max(np.abs(samples))) <= constants.tolerance.Root:
        return []
    candidates = poly.polyroots(trimmed)
    # keep the roots that are real up to rounding
    is_real = np.abs(candidates.imag) <= constants.tolerance.Imaginary * (1.0 + np.abs(candidates.real))
    real = np.sort(candidates[is_real].real)
    changes = []
    width = constants.tolerance.Bracket * max(1.0, length)
    for root in real:
        if not 0.0 < root < length:
            continue
        low, high = max(0.0, root - width), min(length, root + width)
        low_value, high_value = poly.polyval([low, high], trimmed)
        if low_value * high_value >= 0.0:
            continue
        # bracketed: refine the crossing by bisection-type root finding
        changes.append(
            optimize.brentq(lambda u: poly.polyval(u, trimmed), low, high, xtol=constants.tolerance.Root)
        )
    if len(changes) > 2:
        raise errors.SignChangeOverflow(f"{len(changes)} sign changes inside one segment")
    return changes


def _sign_pieces(profile: SectionProfile) -> Iterator[Tuple[float, float, float, np.ndarray]]:
    """Yield (origin, left, right, coefficients) for every sign-constant piece."""
    for left, right, piece in segments(profile):
        cuts = [0.0] + _sign_changes(piece, right - left) + [right - left]
        for start, stop in zip(cuts[:-1], cuts[1:]):
            if stop > start:
                yield left, left + start, left + stop, piece


def l1_norm(profile: SectionProfile) -> float:
    """Return the integral of |profile|."""
    return sum(
        abs(_segment_integral(piece, origin, start, stop, Weight.ONE))
        for origin, start, stop, piece in _sign_pieces(profile)
    )


def l1_distance(first: SectionProfile, second: SectionProfile) -> float:
    """Return the integral of |first - second| with both profiles zero-extended."""
    return l1_norm(subtract(first, second))


def sup_norm(profile: SectionProfile) -> float:
    """Return the largest |profile| value, checked at segment ends and critical points."""
    largest = 0.0
    for left, right, piece in segments(profile):
        candidates = [0.0, right - left]
        if len(piece) > 2:
            critical = poly.polyroots(poly.polyder(piece))
            candidates.extend(
                float(root.real)
                for root in critical
                if abs(root.imag) <= constants.tolerance.Imaginary and 0.0 < root.real < right - left
            )
        largest = max(largest, float(np.max(np.abs(poly.polyval(candidates, piece)))))
    return largest


def sign_samples(profile: SectionProfile) -> List[Tuple[float, float]]:
    """Return one (x, value) sample of largest magnitude per sign-constant piece."""
    samples = []
    for origin, start, stop, piece in _sign_pieces(profile):
        points = np.linspace(start, stop, 7)[1:-1]
        values = poly.polyval(points - origin, piece)
        best = int(np.argmax(np.abs(values)))
        samples.append((float(points[best]), float(values[best])))
    return samples


def single_crossing(profile: SectionProfile, tol: float = constants.tolerance.Check) -> bool:
    """Return True when the profile is <= tol left of some w and >= -tol right of it."""
    samples = sign_samples(profile)
    negative = [x for x, value in samples if value < -tol]
    positive = [x for x, value in samples if value > tol]
    if not negative or not positive:
        return True
    return max(negative) <= min(positive)


def lemma_single_crossing_bound(function: SectionProfile, bound_m: float) -> LemmaResult:
    """Check both statements of the single-crossing lemma: ∫xf ≥ 0 and ∫|f| ≤ 2√(M∫xf)."""
    tolerance = constants.tolerance.Check
    # STEP: confirm the three preconditions before evaluating the bound
    total = integrate(function)
    if abs(total) > tolerance:
        raise errors.PreconditionViolated("zero_integral", f"∫f = {total:.3e}")
    if not single_crossing(function):
        raise errors.PreconditionViolated("single_sign_change", "f changes sign from + to -")
    largest = sup_norm(function)
    if largest > bound_m + tolerance:
        raise errors.PreconditionViolated("bounded_by_m", f"sup|f| = {largest} > M = {bound_m}")
    # STEP: compare ∫|f| with 2√(M ∫xf)
    moment = integrate(function, weight=Weight.X)
    mass = l1_norm(function)
    bound = 2.0 * math.sqrt(bound_m * max(moment, 0.0))
    return LemmaResult(
        xf_moment=moment,
        l1=mass,
        bound=bound,
        bound_ok=mass <= bound + tolerance,
        moment_ok=moment >= -constants.tolerance.Root,
    )


def cone_value(cones: ConeProfiles, x) -> np.ndarray:
    """Evaluate c(x) = g0 (b' - x) / b' on [a', b'], zero elsewhere."""
    points = np.atleast_1d(np.asarray(x, dtype=float))
    inside = (points >= cones.a_prime) & (points <= cones.b_prime)
    return np.where(inside, cones.g0 * (cones.b_prime - points) / cones.b_prime, 0.0)


def cone_profile(cones: ConeProfiles) -> SectionProfile:
    """Return c^(n - 1) as a profile on [a', b']."""
    return linear_power_profile(
        cones.a_prime, cones.b_prime, cones.g0 / cones.b_prime, cones.b_prime, cones.dim
    )


def _crossing_point(profile: SectionProfile, cones: ConeProfiles, b: float) -> float:
    """Return v, the end of the interval [0, v] on which g >= c."""
    logger = logging.getLogger(constants.logging.Rich)
    tolerance = constants.tolerance.Root

    def gap(x: float) -> float:
        return float(root_values(profile, x)[0] - cone_value(cones, x)[0])

    # g coincides with c up to b (including the exact cone): v is the supremum b
    if gap(b) >= -tolerance:
        return b
    # g - c is concave on [0, b]; its maximiser lies inside [0, v]
    search = optimize.minimize_scalar(
        lambda x: -gap(x), bounds=(0.0, b), method="bounded", options={"xatol": tolerance}
    )
    start = float(search.x)
    if gap(start) + tolerance <= 0.0:
        logger.warning(f"g stays below c on (0, b]; using v = {start}")
        return start
    return float(optimize.brentq(lambda x: gap(x) + tolerance, start, b, xtol=tolerance))


def build_cone_profiles(pair: normalize.NormalizedPair, profile: SectionProfile) -> ConeProfiles:
    """Compute a', b', g(0), d and the crossing point v of the matched cone profile."""
    dim = pair.dim
    # STEP: match the cone to |K_0| and to the mass t on the positive side
    k0 = pair.k0_measure
    g0 = k0 ** (1.0 / (dim - 1))
    b_prime = dim * pair.t / k0
    a_prime = b_prime - (dim * b_prime ** (dim - 1) / k0) ** (1.0 / dim)
    q_n = grunbaum_constant(dim)
    d = pair.t ** (1.0 / dim) - q_n ** (1.0 / dim)
    # STEP: locate v once the cone is known
    partial = ConeProfiles(
        a_prime=a_prime, b_prime=b_prime, g0=g0, k0=k0, d=d, v=0.0, t=pair.t, q_n=q_n, dim=dim
    )
    v = _crossing_point(profile, partial, pair.b)
    return ConeProfiles(
        a_prime=a_prime, b_prime=b_prime, g0=g0, k0=k0, d=d, v=v, t=pair.t, q_n=q_n, dim=dim
    )


def _root_tolerance(profile: SectionProfile) -> float:
    """Return the concavity tolerance, allowing for rounding amplified by the root."""
    scale = max(1.0, sup_norm(profile))
    rounding = constants.tolerance.Rounding_Ulps * np.finfo(float).eps * scale
    return constants.tolerance.Check + rounding ** (1.0 / (profile.dim - 1))


def check_profile(profile: SectionProfile, mass: Optional[float] = None, step: float = 1e-3) -> List[str]:
    """Return the description of every section-profile invariant that fails."""
    tolerance = constants.tolerance.Check
    failures = []
    for index in range(1, len(profile.coeffs)):
        x = profile.breakpoints[index]
        left = poly.polyval(x - profile.breakpoints[index - 1], profile.coeffs[index - 1])
        right = poly.polyval(0.0, profile.coeffs[index])
        if abs(left - right) > tolerance:
            failures.append(f"discontinuous at x = {x}: {left} vs {right}")
    low, high = profile.support
    count = max(3, int(math.ceil((high - low) / step)) + 1)
    grid = np.linspace(low, high, count)
    values = evaluate(profile, grid)
    if float(values.min()) < -tolerance:
        failures.append(f"negative value {values.min()}")
    roots = root_values(profile, grid)
    defect = 0.5 * (roots[:-2] + roots[2:]) - roots[1:-1]
    if len(defect) and float(defect.max()) > _root_tolerance(profile):
        failures.append(f"root of the profile is not concave (defect {defect.max():.3e})")
    if mass is not None and abs(integrate(profile) - mass) > tolerance:
        failures.append(f"integral {integrate(profile)} differs from {mass}")
    return failures
