"""Verify every inequality between the Grünbaum gap and the witness bound on A(K)."""

import dataclasses
import logging
import math

from dataclasses import dataclass
from enum import Enum

from typing import List
from typing import Optional
from typing import Sequence
from typing import Tuple
from typing import Union

import numpy as np
import pandas

from scipy import optimize

from grunstab import aconicity
from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import normalize
from grunstab import profile as profiles
from grunstab import witness


class Orientation(str, Enum):
    """The choices of the half-space H+ for a given hyperplane."""

    TIGHT = constants.orientation.Tight
    POSITIVE = constants.orientation.Positive
    NEGATIVE = constants.orientation.Negative


# the names of the checks, in the order the report lists them
REGISTRY = (
    "grunbaum",
    "grunbaum_complement",
    "ab_span",
    "a_floor",
    "a_bounds",
    "b_bounds",
    "b_ceiling",
    "k0",
    "k0_cap",
    "bprime_cap",
    "ordering",
    "ordering_b",
    "aprime_negative",
    "v_range",
    "cone_mass",
    "cone_positive_mass",
    "moment",
    "xh_cap",
    "h_sup",
    "h_l1",
    "remember_lb",
    "cone_tail_mass",
    "lemma_h1",
    "xh1_nonneg",
    "xh1_cap",
    "lemma_h2",
    "xh2_nonneg",
    "xh2_cap",
    "prop31",
    "c_below_s",
    "s_at_aprime",
    "sc_gap",
    "sc_power_gap",
    "k0_cone_gap",
    "cs_closed_form",
    "cs_l1",
    "sym_diff_split",
    "sym_diff_intermediate",
    "theorem_d_form",
    "final",
    "d_vs_gap",
)


@dataclass(frozen=True)
class CheckItem:
    """One inequality lhs <= rhs of the proof chain."""

    name: str
    lhs: float
    rhs: float
    slack: float
    passed: bool


@dataclass(frozen=True)
class StabilityReport:
    """Every quantity of the proof chain for one body and one centroid hyperplane."""

    n: int
    orientation: str
    t: float
    q_n: float
    gap: float
    d: float
    a: float
    b: float
    a_prime: float
    b_prime: float
    k0: float
    v: float
    int_abs_h: float
    int_x_h: float
    int_abs_h1: float
    int_abs_h2: float
    int_x_h1: float
    int_x_h2: float
    int_x_c: float
    int_abs_cs: float
    witness_sym_diff: float
    a_upper: float
    a_optimized: Optional[float]
    rhs_main: float
    checks: Tuple[CheckItem, ...]
    notes: Tuple[str, ...]


@dataclass(frozen=True)
class ExponentComparison:
    """The observed log-log relation between the Grünbaum gap and the aconicity bound."""

    table: pandas.DataFrame
    slope: Optional[float]
    slope_defined: bool
    main_exponent: float
    groemer_exponent: float


def make_check(name: str, lhs: float, rhs: float) -> CheckItem:
    """Create a check that passes when (rhs - lhs) / max(1, |rhs|) >= -tolerance."""
    slack = rhs - lhs
    passed = bool(slack / max(1.0, abs(rhs)) >= -constants.tolerance.Check)
    return CheckItem(name=name, lhs=float(lhs), rhs=float(rhs), slack=float(slack), passed=passed)


def make_interval_check(name: str, value: float, low: float, high: float) -> CheckItem:
    """Create a check for low < value <= high; the lower end is excluded."""
    half = 0.5 * (high - low)
    check = make_check(name, abs(value - (low + half)), half)
    return dataclasses.replace(check, passed=check.passed and value > low)


def main_bound(dim: int, gap: float) -> float:
    """Return 3^(n+7) n^(n+2) (t - q_n)^(1/(2n))."""
    return 3.0 ** (dim + 7) * float(dim) ** (dim + 2) * max(gap, 0.0) ** (1.0 / (2 * dim))


def closed_form_cs_l1(cones: profiles.ConeProfiles, b: float) -> float:
    """Return the integral of |c^(n-1) - s^(n-1)| from the values of c and s at a'.

    Both profiles are powers of lines through (0, g(0)): s lies above c left of
    zero and below it on the right, so the integral splits at zero into
    ((b - a') / n)(s^(n-1)(a') - c^(n-1)(a')) + ((b' - b) / n)(2|K_0| - c^(n-1)(a')).
    """
    n = cones.dim
    c_power = float(profiles.cone_value(cones, cones.a_prime)[0]) ** (n - 1)
    s_power = (cones.g0 * (b - cones.a_prime) / b) ** (n - 1)
    return (b - cones.a_prime) / n * (s_power - c_power) + (cones.b_prime - b) / n * (
        2.0 * cones.k0 - c_power
    )


def choose_orientation(
    body: geometry.ConvexBody, plane: geometry.Hyperplane, orientation: Union[str, Orientation]
) -> Tuple[geometry.Hyperplane, str]:
    """Pick the half-space H+: either side on request, or the one holding less volume."""
    try:
        requested = Orientation(orientation)
    except ValueError as error:
        raise errors.InputError(
            f"orientation must be one of {', '.join(constants.orientation)}"
        ) from error
    if requested is Orientation.POSITIVE:
        return plane, constants.orientation.Positive
    flipped = geometry.flip_hyperplane(plane)
    if requested is Orientation.NEGATIVE:
        return flipped, constants.orientation.Negative
    if normalize.grunbaum_ratio(body, flipped) < normalize.grunbaum_ratio(body, plane):
        return flipped, constants.orientation.Negative
    return plane, constants.orientation.Positive


def _lemma_checks(
    label: str, function: profiles.SectionProfile, bound_m: float, cap: float
) -> Tuple[List[CheckItem], List[str], float, float]:
    """Apply the single-crossing lemma to one half of h and return its checks."""
    logger = logging.getLogger(constants.logging.Rich)
    mass = profiles.l1_norm(function)
    moment = profiles.integrate(function, weight=profiles.Weight.X)
    notes = []
    try:
        result = profiles.lemma_single_crossing_bound(function, bound_m)
        lemma = make_check(f"lemma_{label}", result.l1, result.bound)
    except errors.PreconditionViolated as error:
        logger.warning(f"Single-crossing lemma does not apply to {label}: {error}")
        notes.append(f"lemma_{label}: {error.condition}")
        rhs = 2.0 * math.sqrt(bound_m * max(moment, 0.0))
        lemma = CheckItem(f"lemma_{label}", mass, rhs, rhs - mass, False)
    checks = [
        lemma,
        make_check(f"x{label}_nonneg", 0.0, moment),
        make_check(f"x{label}_cap", moment, cap),
    ]
    return checks, notes, mass, moment


def analyze(
    body: geometry.ConvexBody,
    plane: geometry.Hyperplane,
    orientation: Union[str, Orientation] = Orientation.TIGHT,
    optimize_restarts: int = 0,
    seed: int = 0,
) -> StabilityReport:
    """Normalize the pair, build every profile and evaluate the whole check registry."""
    logger = logging.getLogger(constants.logging.Rich)
    if body.dim < 2:
        raise errors.UnsupportedDimension("the stability estimate needs dimension at least 2")
    # STEP: pick the half-space and bring the pair into canonical position
    chosen, side = choose_orientation(body, plane, orientation)
    pair = normalize.normalize(body, chosen)
    n = pair.dim
    # STEP: build the profiles g^(n-1), c^(n-1) and s^(n-1) and the difference h
    profile = profiles.build_profile(pair)
    cones = profiles.build_cone_profiles(pair, profile)
    cone_power = profiles.cone_profile(cones)
    cone = witness.build_witness(pair, profile, cones)
    h = profiles.subtract(cone_power, profile)
    h1 = profiles.restrict(h, -math.inf, 0.0)
    h2 = profiles.restrict(h, 0.0, math.inf)
    # STEP: compute the integrals of the proof chain
    gap = pair.t - cones.q_n
    d = max(cones.d, 0.0)
    root_d = d ** (1.0 / (2 * n))
    int_abs_h = profiles.l1_norm(h)
    int_x_h = profiles.integrate(h, weight=profiles.Weight.X)
    int_x_c = profiles.integrate(cone_power, weight=profiles.Weight.X)
    int_abs_cs = profiles.l1_distance(cone_power, cone.s_profile)
    witness_sym_diff = witness.sym_diff_via_profiles(profile, cone)
    a_upper = aconicity.aconicity_upper(pair, profile, cones).witness_bound
    rhs_main = main_bound(n, gap)
    cone_at_aprime = float(profiles.cone_value(cones, cones.a_prime)[0])
    s_at_aprime = cone.s_value(cones.a_prime)
    bound_m = 3.0 * n + 1.0
    cap = 4.0 * n * n * d
    # STEP: evaluate the registry in the order of the argument
    checks = [
        make_check("grunbaum", cones.q_n, pair.t),
        make_check("grunbaum_complement", pair.t, 1.0 - cones.q_n),
        make_check("ab_span", pair.b - pair.a, n),
        make_check("a_floor", -n, pair.a),
        make_check("a_bounds", pair.a, -1.0 / 3.0),
        make_check("b_bounds", 1.0 / 3.0, pair.b),
        make_check("b_ceiling", pair.b, n),
        make_check("k0", 1.0 / (3.0 * n), cones.k0),
        make_check("k0_cap", cones.k0, 1.0),
        make_check("bprime_cap", cones.b_prime, 3.0 * n * n),
        make_check("ordering", pair.a, cones.a_prime),
        make_check("ordering_b", pair.b, cones.b_prime),
        make_check("aprime_negative", cones.a_prime, 0.0),
        make_interval_check("v_range", cones.v, 0.0, pair.b),
        make_check("cone_mass", abs(profiles.integrate(cone_power) - 1.0), 0.0),
        make_check(
            "cone_positive_mass", abs(profiles.integrate(cone_power, 0.0) - pair.t), 0.0
        ),
        make_check("moment", abs(int_x_c - (cones.b_prime - cones.a_prime) * cones.d), 0.0),
        make_check("xh_cap", int_x_h, cap),
        make_check("h_sup", profiles.sup_norm(h), bound_m),
        make_check("h_l1", int_abs_h, 16.0 * n ** 1.5 * math.sqrt(d)),
        make_check(
            "remember_lb",
            ((cones.b_prime - pair.b) / cones.b_prime) ** n / 3.0,
            int_abs_h,
        ),
        make_check(
            "cone_tail_mass",
            abs(
                profiles.integrate(cone_power, pair.b)
                - pair.t * ((cones.b_prime - pair.b) / cones.b_prime) ** n
            ),
            0.0,
        ),
    ]
    notes: List[str] = []
    lemma_one, notes_one, int_abs_h1, int_x_h1 = _lemma_checks("h1", h1, bound_m, cap)
    lemma_two, notes_two, int_abs_h2, int_x_h2 = _lemma_checks("h2", h2, bound_m, cap)
    checks.extend(lemma_one + lemma_two)
    notes.extend(notes_one + notes_two)
    checks.extend(
        [
            make_check("prop31", cones.b_prime - pair.b, 288.0 * n * n * root_d),
            make_check("c_below_s", cone_at_aprime, s_at_aprime),
            make_check("s_at_aprime", s_at_aprime, 3.0 * n),
            # --> the two factors of the closed form, bounded separately
            make_check("sc_gap", s_at_aprime - cone_at_aprime, 2592.0 * n**3 * root_d),
            make_check(
                "sc_power_gap",
                s_at_aprime ** (n - 1) - cone_at_aprime ** (n - 1),
                32.0 * 3.0 ** (n + 2) * float(n) ** (n + 2) * root_d,
            ),
            make_check(
                "k0_cone_gap",
                2.0 * cones.k0 - cone_at_aprime ** (n - 1),
                3.0**n * float(n) ** (n - 1),
            ),
            make_check("cs_closed_form", abs(int_abs_cs - closed_form_cs_l1(cones, pair.b)), 0.0),
            make_check(
                "cs_l1", int_abs_cs, 64.0 * 3.0 ** (n + 2) * float(n) ** (n + 2) * root_d
            ),
            make_check("sym_diff_split", witness_sym_diff, int_abs_h + int_abs_cs),
            make_check(
                "sym_diff_intermediate",
                a_upper,
                80.0 * 3.0 ** (n + 2) * float(n) ** (n + 2) * root_d,
            ),
            make_check(
                "theorem_d_form", a_upper, 3.0 ** (n + 6) * float(n) ** (n + 2) * root_d
            ),
            make_check("final", a_upper, rhs_main),
            make_check("d_vs_gap", cones.d, 3.0 * gap),
        ]
    )
    a_optimized = None
    if optimize_restarts > 0 and n == 2:
        estimate = aconicity.aconicity_optimize_pair(pair, profile, cones, seed, optimize_restarts)
        a_optimized = estimate.optimized_bound
    failed = [item.name for item in checks if not item.passed]
    if failed:
        logger.warning(f"Failed checks: {', '.join(failed)}")
    logger.debug(f"Analyzed a body in dimension {n}: t = {pair.t:.12f}, d = {cones.d:.6e}")
    return StabilityReport(
        n=n,
        orientation=side,
        t=pair.t,
        q_n=cones.q_n,
        gap=gap,
        d=cones.d,
        a=pair.a,
        b=pair.b,
        a_prime=cones.a_prime,
        b_prime=cones.b_prime,
        k0=cones.k0,
        v=cones.v,
        int_abs_h=int_abs_h,
        int_x_h=int_x_h,
        int_abs_h1=int_abs_h1,
        int_abs_h2=int_abs_h2,
        int_x_h1=int_x_h1,
        int_x_h2=int_x_h2,
        int_x_c=int_x_c,
        int_abs_cs=int_abs_cs,
        witness_sym_diff=witness_sym_diff,
        a_upper=a_upper,
        a_optimized=a_optimized,
        rhs_main=rhs_main,
        checks=tuple(checks),
        notes=tuple(notes),
    )


def report_passed(report: StabilityReport) -> bool:
    """Return True when every check of the report passed."""
    return all(item.passed for item in report.checks)


def failed_checks(report: StabilityReport) -> List[str]:
    """Return the names of the checks that failed."""
    return [item.name for item in report.checks if not item.passed]


def exponent_comparison(reports: Sequence[StabilityReport]) -> ExponentComparison:
    """Tabulate log A_upper against log(t - q_n) and fit the slope of the relation."""
    usable = [report for report in reports if report.gap > 0.0 and report.a_upper > 0.0]
    if len(usable) < 2:
        raise errors.InsufficientData(
            f"the exponent comparison needs two reports with a positive gap, found {len(usable)}"
        )
    dims = {report.n for report in usable}
    if len(dims) != 1:
        raise errors.InsufficientData("the exponent comparison needs reports of a single dimension")
    n = usable[0].n
    groemer_exponent = 1.0 / (2.0 * n * n)
    table = pandas.DataFrame(
        {
            "gap": [report.gap for report in usable],
            "a_upper": [report.a_upper for report in usable],
            "rhs_main": [report.rhs_main for report in usable],
            "groemer_shape": [report.gap ** groemer_exponent for report in usable],
        }
    )
    table["log_gap"] = np.log(table["gap"])
    table["log_a_upper"] = np.log(table["a_upper"])
    table = table.sort_values("gap", kind="mergesort").reset_index(drop=True)
    slope: Optional[float] = None
    if float(np.var(table["log_gap"].to_numpy())) > 0.0:
        slope = float(np.polyfit(table["log_gap"], table["log_a_upper"], 1)[0])
    else:
        logging.getLogger(constants.logging.Rich).warning(
            "All gaps coincide, so the slope is undefined"
        )
    return ExponentComparison(
        table=table,
        slope=slope,
        slope_defined=slope is not None,
        main_exponent=1.0 / (2.0 * n),
        groemer_exponent=groemer_exponent,
    )


def _line_at(center: np.ndarray, angle: float) -> geometry.Hyperplane:
    """Return the line through the center whose normal has the given angle."""
    return geometry.hyperplane_through(center, (math.cos(angle), math.sin(angle)))


def find_hyperplane_for_ratio(body: geometry.ConvexBody, alpha: float) -> geometry.Hyperplane:
    """Rotate a line about the centroid until |K ∩ H+| / |K| equals alpha."""
    if body.dim != 2:
        raise errors.MethodUnsupported(f"the rotating-line search needs dimension 2, not {body.dim}")
    q_n = profiles.grunbaum_constant(2)
    tolerance = constants.tolerance.Check
    if not q_n - tolerance <= alpha <= 1.0 - q_n + tolerance:
        raise errors.RatioUnattainable(f"alpha = {alpha} lies outside [{q_n}, {1.0 - q_n}]")
    center = geometry.centroid(body)

    def ratio(angle: float) -> float:
        return normalize.grunbaum_ratio(body, _line_at(center, angle))

    # STEP: locate the smallest ratio; the opposite normal then gives the largest
    angles = np.linspace(0.0, 2.0 * math.pi, constants.ratio_search.Angles, endpoint=False)
    values = np.array([ratio(angle) for angle in angles])
    best = int(np.argmin(values))
    step = angles[1] - angles[0]
    search = optimize.minimize_scalar(
        ratio,
        bounds=(angles[best] - step, angles[best] + step),
        method="bounded",
        options={"xatol": constants.tolerance.Search},
    )
    low_angle, low_value = float(angles[best]), float(values[best])
    if float(search.fun) < low_value:
        low_angle, low_value = float(search.x), float(search.fun)
    high_value = ratio(low_angle + math.pi)
    if alpha < low_value - tolerance or alpha > high_value + tolerance:
        raise errors.RatioUnattainable(
            f"lines through the centroid reach ratios in [{low_value}, {high_value}], not {alpha}"
        )
    # STEP: the ends of the range are reached at the extreme angles themselves
    if alpha <= low_value + constants.tolerance.Root:
        return _line_at(center, low_angle)
    if alpha >= high_value - constants.tolerance.Root:
        return _line_at(center, low_angle + math.pi)
    # STEP: the ratio is continuous in the angle, so bracket alpha between the extremes
    angle = optimize.brentq(
        lambda value: ratio(value) - alpha,
        low_angle,
        low_angle + math.pi,
        xtol=constants.tolerance.Root,
    )
    return _line_at(center, float(angle))
