"""Create dictionaries, JSON text and table rows from bodies, profiles and reports."""

import dataclasses
import json
import logging

from typing import Any
from typing import Dict
from typing import List
from typing import Mapping

import numpy as np

from grunstab import aconicity
from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import normalize
from grunstab import profile as profiles
from grunstab import stability
from grunstab import witness


def body_from_dict(data: Any) -> geometry.ConvexBody:
    """Create a body from its JSON dictionary {"dim": n, "vertices": [[...], ...]}."""
    if not isinstance(data, Mapping):
        raise errors.InputError("a body must be a JSON object")
    if constants.body.Dim not in data or constants.body.Vertices not in data:
        raise errors.InputError(
            f"a body needs the keys {constants.body.Dim!r} and {constants.body.Vertices!r}"
        )
    dim = data[constants.body.Dim]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise errors.InputError(f"dim must be a positive integer, found {dim!r}")
    vertices = data[constants.body.Vertices]
    if not isinstance(vertices, list) or not vertices:
        raise errors.InputError("vertices must be a nonempty list of points")
    for vertex in vertices:
        if not isinstance(vertex, list) or len(vertex) != dim:
            raise errors.InputError(f"every vertex must be a list of {dim} numbers, found {vertex!r}")
        if not all(isinstance(value, (int, float)) and not isinstance(value, bool) for value in vertex):
            raise errors.InputError(f"vertex coordinates must be numbers, found {vertex!r}")
    return geometry.create_body(vertices, dim)


def body_to_dict(body: geometry.ConvexBody) -> Dict[str, Any]:
    """Create the JSON dictionary of a body."""
    return {
        constants.body.Dim: body.dim,
        constants.body.Vertices: [list(vertex) for vertex in body.vertices],
    }


def plane_from_dict(data: Any) -> geometry.Hyperplane:
    """Create a hyperplane from its JSON dictionary {"normal": [...], "offset": r}."""
    if not isinstance(data, Mapping):
        raise errors.InputError("a hyperplane must be a JSON object")
    normal = data.get(constants.body.Normal)
    offset = data.get(constants.body.Offset)
    if not isinstance(normal, list) or not normal:
        raise errors.InputError("normal must be a nonempty list of numbers")
    if isinstance(offset, bool) or not isinstance(offset, (int, float)):
        raise errors.InputError(f"offset must be a number, found {offset!r}")
    length = float(np.linalg.norm(np.asarray(normal, dtype=float)))
    if abs(length - 1.0) > constants.tolerance.Unit_Normal:
        # a non-unit normal describes the same oriented plane once rescaled
        logging.getLogger(constants.logging.Rich).debug(f"Rescaling a normal of length {length}")
    return geometry.make_hyperplane(normal, float(offset))


def plane_to_dict(plane: geometry.Hyperplane) -> Dict[str, Any]:
    """Create the JSON dictionary of a hyperplane."""
    return {constants.body.Normal: list(plane.normal), constants.body.Offset: plane.offset}


def map_to_dict(affine: geometry.AffineMap) -> Dict[str, Any]:
    """Create the JSON dictionary of an affine map."""
    return {
        constants.body.Linear: [list(row) for row in affine.linear],
        constants.body.Translation: list(affine.translation),
    }


def pair_to_dict(pair: normalize.NormalizedPair) -> Dict[str, Any]:
    """Create the JSON dictionary of a normalized pair, including its map."""
    return {
        "body": body_to_dict(pair.body),
        "map": map_to_dict(pair.map),
        "a": pair.a,
        "b": pair.b,
        "k0_measure": pair.k0_measure,
        "t": pair.t,
    }


def profile_to_dict(profile: profiles.SectionProfile) -> Dict[str, Any]:
    """Create the JSON dictionary of a section profile."""
    return {
        "support": list(profile.support),
        "breakpoints": list(profile.breakpoints),
        "coeffs": [list(piece) for piece in profile.coeffs],
        "dim": profile.dim,
    }


def witness_to_dict(cone: witness.WitnessCone) -> Dict[str, Any]:
    """Create the JSON dictionary of a witness cone."""
    return {
        "apex": list(cone.apex),
        "base_x": cone.base_x,
        "base_vertices": [list(vertex) for vertex in cone.base_body.vertices],
        "g0": cone.g0,
        "a_prime": cone.base_x,
        "b": cone.b,
    }


def estimate_to_dict(estimate: aconicity.AconicityEstimate) -> Dict[str, Any]:
    """Create the JSON dictionary of an aconicity estimate."""
    return dataclasses.asdict(estimate)


def check_to_dict(item: stability.CheckItem) -> Dict[str, Any]:
    """Create the JSON dictionary of one check."""
    return {"name": item.name, "lhs": item.lhs, "rhs": item.rhs, "slack": item.slack, "pass": item.passed}


def report_to_dict(report: stability.StabilityReport) -> Dict[str, Any]:
    """Create the JSON dictionary of a report: every scalar field and the checks array."""
    content = {
        field.name: getattr(report, field.name)
        for field in dataclasses.fields(report)
        if field.name not in ("checks", "notes")
    }
    content["passed"] = stability.report_passed(report)
    content["checks"] = [check_to_dict(item) for item in report.checks]
    content["notes"] = list(report.notes)
    return content


def to_json(content: Any) -> str:
    """Serialize content with a fixed layout so that equal inputs give equal text."""
    return json.dumps(content, indent=2)


def report_to_row(report: stability.StabilityReport) -> Dict[str, Any]:
    """Create one flat table row: the scalar fields followed by the slack of every check."""
    row = report_to_dict(report)
    del row["checks"]
    row["notes"] = "; ".join(report.notes)
    for item in report.checks:
        row[constants.sweep.Slack_Prefix + item.name] = item.slack
    return row


def sample_profiles(
    pair: normalize.NormalizedPair,
    profile: profiles.SectionProfile,
    cones: profiles.ConeProfiles,
    cone: witness.WitnessCone,
    samples: int,
) -> Dict[str, Any]:
    """Sample g, c and s uniformly over [min(a, a') - 0.1, b' + 0.1], all zero-extended."""
    if samples < 2:
        raise errors.InputError("samples must be ≥ 2")
    low = min(pair.a, cones.a_prime) - 0.1
    high = cones.b_prime + 0.1
    grid = np.linspace(low, high, samples)
    g_values = profiles.root_values(profile, grid)
    c_values = profiles.cone_value(cones, grid)
    s_values = profiles.root_values(cone.s_profile, grid)
    lists: Dict[str, List[float]] = {
        "x": grid.tolist(),
        "g": g_values.tolist(),
        "c": c_values.tolist(),
        "s": s_values.tolist(),
    }
    return {
        **lists,
        "a": pair.a,
        "b": pair.b,
        "a_prime": cones.a_prime,
        "b_prime": cones.b_prime,
        "v": cones.v,
    }
