"""Run seeded sweeps over families of bodies and collect the reports in a DataFrame."""

import dataclasses
import logging

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from typing import Any
from typing import Dict
from typing import Iterator
from typing import List
from typing import Mapping
from typing import Optional
from typing import Tuple

import numpy as np
import pandas

from rich.progress import BarColumn
from rich.progress import Progress
from rich.progress import TimeElapsedColumn
from rich.progress import TimeRemainingColumn

from grunstab import configure
from grunstab import constants
from grunstab import errors
from grunstab import files
from grunstab import generate
from grunstab import geometry
from grunstab import normalize
from grunstab import produce
from grunstab import stability

FAMILIES = (
    constants.sweep.Perturbed_Cone,
    constants.sweep.Random_Polygon,
    constants.sweep.Random_Polytope,
)
PLANES = (constants.sweep.Plane_Axis, constants.sweep.Plane_Random)


@dataclass(frozen=True)
class SweepConfig:
    """The description of one sweep, read from a JSON file."""

    family: str
    dim: int
    count: int
    seed: int
    epsilon_list: Tuple[float, ...]
    output: Path
    workers: int = 1
    plane: str = constants.sweep.Plane_Axis
    vertices: int = constants.sweep.Polytope_Vertices


@dataclass(frozen=True)
class SweepTask:
    """One body of a sweep together with its centroid hyperplane."""

    index: int
    family: str
    epsilon: Optional[float]
    body: geometry.ConvexBody
    plane: Optional[geometry.Hyperplane]
    problem: str = constants.markers.Nothing


def _require_int(data: Mapping[str, Any], key: str, default: Optional[int] = None) -> int:
    """Read an integer entry of the configuration."""
    value = data.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise errors.ConfigError(f"{key} must be an integer, found {value!r}")
    return value


def config_from_dict(data: Any) -> SweepConfig:
    """Create and validate a sweep configuration."""
    if not isinstance(data, Mapping):
        raise errors.ConfigError("a sweep configuration must be a JSON object")
    family = data.get(constants.sweep.Family)
    if family not in FAMILIES:
        raise errors.ConfigError(f"family must be one of {', '.join(FAMILIES)}, found {family!r}")
    dim = _require_int(data, "dim")
    count = _require_int(data, "count", 1)
    seed = _require_int(data, "seed", 0)
    workers = _require_int(data, "workers", 1)
    vertices = _require_int(data, "vertices", constants.sweep.Polytope_Vertices)
    if dim < 2:
        raise errors.ConfigError(f"dim must be at least 2, found {dim}")
    if count < 1:
        raise errors.ConfigError(f"count must be at least 1, found {count}")
    if workers < 1:
        raise errors.ConfigError(f"workers must be at least 1, found {workers}")
    if family == constants.sweep.Random_Polygon and dim != 2:
        raise errors.ConfigError("random_polygon bodies live in dimension 2")
    if family == constants.sweep.Random_Polytope and dim > constants.sweep.Polytope_Max_Dim:
        raise errors.ConfigError(f"random_polytope supports dim <= {constants.sweep.Polytope_Max_Dim}")
    if family == constants.sweep.Random_Polytope and not dim + 1 <= vertices <= constants.sweep.Polytope_Max_Vertices:
        raise errors.ConfigError(f"vertices must lie in [{dim + 1}, {constants.sweep.Polytope_Max_Vertices}]")
    epsilons = data.get("epsilon_list", [])
    if not isinstance(epsilons, list) or not all(
        isinstance(value, (int, float)) and not isinstance(value, bool) for value in epsilons
    ):
        raise errors.ConfigError("epsilon_list must be a list of numbers")
    if family == constants.sweep.Perturbed_Cone:
        if not epsilons:
            raise errors.ConfigError("perturbed_cone needs a nonempty epsilon_list")
        # zero is accepted: it yields the exact cone
        if any(value < 0 for value in epsilons):
            raise errors.ConfigError("epsilons must not be negative")
    plane = data.get("plane", constants.sweep.Plane_Axis)
    if plane not in PLANES:
        raise errors.ConfigError(f"plane must be one of {', '.join(PLANES)}, found {plane!r}")
    output = data.get("output")
    if not isinstance(output, str) or not output:
        raise errors.ConfigError("output must name the CSV file to write")
    return SweepConfig(
        family=family,
        dim=dim,
        count=count,
        seed=seed,
        epsilon_list=tuple(float(value) for value in epsilons),
        output=Path(output),
        workers=workers,
        plane=plane,
        vertices=vertices,
    )


def read_config(config_file: Path) -> SweepConfig:
    """Read a sweep configuration from its JSON file."""
    try:
        data = files.read_json_file(config_file)
    except errors.InputError as error:
        raise errors.ConfigError(str(error)) from error
    return config_from_dict(data)


def apply_seed_override(config: SweepConfig, seed: Optional[int]) -> SweepConfig:
    """Replace the seed of the configuration when the environment pins one."""
    if seed is None:
        return config
    logging.getLogger(constants.logging.Rich).info(f"Using the seed {seed} from the environment")
    return dataclasses.replace(config, seed=seed)


def _plane_for(config: SweepConfig, generator: np.random.Generator, body: geometry.ConvexBody) -> geometry.Hyperplane:
    """Build the centroid hyperplane that the configuration asks for."""
    if config.plane == constants.sweep.Plane_Random:
        return generate.random_centroid_plane(generator, body)
    return normalize.auto_plane(body, 0)


def create_tasks(config: SweepConfig) -> Iterator[SweepTask]:
    """Create the bodies of a sweep, one independent random stream per body."""
    logger = logging.getLogger(constants.logging.Rich)
    if config.family == constants.sweep.Perturbed_Cone:
        if config.count != 1:
            logger.info("The perturbed cone family has one body per epsilon; ignoring count")
        for index, epsilon in enumerate(config.epsilon_list):
            body = generate.perturbed_cone(config.dim, epsilon)
            yield _task(config, index, epsilon, body, np.random.default_rng(config.seed + index))
        return
    for index, child in enumerate(np.random.SeedSequence(config.seed).spawn(config.count)):
        generator = np.random.default_rng(child)
        if config.family == constants.sweep.Random_Polygon:
            body = generate.random_polygon(generator)
        else:
            body = generate.random_polytope(generator, config.dim, config.vertices)
        yield _task(config, index, None, body, generator)


def _task(
    config: SweepConfig,
    index: int,
    epsilon: Optional[float],
    body: geometry.ConvexBody,
    generator: np.random.Generator,
) -> SweepTask:
    """Attach the hyperplane to a body, recording a failure instead of raising."""
    try:
        plane: Optional[geometry.Hyperplane] = _plane_for(config, generator, body)
        problem = constants.markers.Nothing
    except errors.GrunstabError as error:
        plane, problem = None, f"{type(error).__name__}: {error}"
    return SweepTask(index=index, family=config.family, epsilon=epsilon, body=body, plane=plane, problem=problem)


def run_task(task: SweepTask) -> Tuple[Dict[str, Any], Optional[stability.StabilityReport]]:
    """Analyze one body and return its table row and its report."""
    row: Dict[str, Any] = {
        constants.sweep.Format_Version: constants.sweep.Version,
        constants.sweep.Index: task.index,
        constants.sweep.Family: task.family,
        constants.sweep.Epsilon: task.epsilon,
        constants.sweep.Errors: task.problem,
    }
    if task.plane is None:
        return row, None
    try:
        report = stability.analyze(task.body, task.plane)
    except (errors.GrunstabError, ValueError, ArithmeticError, RuntimeError, np.linalg.LinAlgError) as error:
        row[constants.sweep.Errors] = f"{type(error).__name__}: {error}"
        return row, None
    row.update(produce.report_to_row(report))
    return row, report


def report_columns() -> List[str]:
    """Return the fixed header of the sweep table."""
    scalars = [
        field.name
        for field in dataclasses.fields(stability.StabilityReport)
        if field.name not in ("checks", "notes")
    ]
    return (
        [
            constants.sweep.Format_Version,
            constants.sweep.Index,
            constants.sweep.Family,
            constants.sweep.Epsilon,
            constants.sweep.Errors,
        ]
        + scalars
        + ["passed", "notes"]
        + [constants.sweep.Slack_Prefix + name for name in stability.REGISTRY]
    )


def run_sweep(config: SweepConfig) -> Tuple[pandas.DataFrame, List[stability.StabilityReport]]:
    """Analyze every body of the sweep, in parallel when asked, keeping the input order."""
    logger = logging.getLogger(constants.logging.Rich)
    console = configure.setup_console()
    tasks = list(create_tasks(config))
    rows: List[Dict[str, Any]] = []
    reports: List[stability.StabilityReport] = []
    with Progress(
        constants.progress.Task_Format,
        BarColumn(),
        constants.progress.Percentage_Format,
        constants.progress.Completed,
        constants.progress.Bullet,
        TimeElapsedColumn(),
        constants.progress.Elapsed,
        constants.progress.Bullet,
        TimeRemainingColumn(),
        constants.progress.Remaining,
        console=console,
    ) as progress:
        task_id = progress.add_task(f"Analyze {config.family} bodies", total=len(tasks))
        if config.workers == 1:
            results = map(run_task, tasks)
            rows, reports = _collect(results, progress, task_id)
        else:
            # map keeps the input order, so the table does not depend on scheduling
            with ProcessPoolExecutor(max_workers=config.workers) as executor:
                rows, reports = _collect(executor.map(run_task, tasks), progress, task_id)
    logger.debug(f"Collected {len(rows)} rows and {len(reports)} reports")
    return pandas.DataFrame(rows, columns=report_columns()), reports


def _collect(results, progress: Progress, task_id) -> Tuple[List[Dict[str, Any]], List[stability.StabilityReport]]:
    """Gather rows and reports while advancing the progress bar."""
    rows = []
    reports = []
    for row, report in results:
        rows.append(row)
        if report is not None:
            reports.append(report)
        progress.update(task_id, advance=1)
    return rows, reports


def save_sweep(config: SweepConfig, table: pandas.DataFrame) -> Path:
    """Write the sweep table as CSV to the configured output file."""
    files.save_dataframe(config.output, table)
    return config.output
