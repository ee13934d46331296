"""Command-line interface for the grunstab program."""

from pathlib import Path

from typing import Optional
from typing import Tuple

import pandas
import typer

from rich.console import Console

from grunstab import configure
from grunstab import constants
from grunstab import display
from grunstab import environment
from grunstab import errors
from grunstab import files
from grunstab import geometry
from grunstab import normalize
from grunstab import produce
from grunstab import profile as profiles
from grunstab import stability
from grunstab import sweep as sweeps
from grunstab import witness


# create a Typer object to support the command-line interface
cli = typer.Typer()


def _fail(console: Console, error: Exception, hint: str) -> typer.Exit:
    """Display an input error and return the exit that reports it."""
    display.display_error(console, f"{type(error).__name__}: {error}", hint)
    return typer.Exit(code=constants.exit_codes.Input_Error)


def _read_inputs(
    body_file: Path, plane_file: Optional[Path], auto_centroid_axis: Optional[int]
) -> Tuple[geometry.ConvexBody, geometry.Hyperplane]:
    """Read the body and build its hyperplane from a file or from a coordinate axis."""
    if (plane_file is None) == (auto_centroid_axis is None):
        raise errors.InputError("use exactly one of --plane and --auto-centroid-axis")
    body = files.read_body(body_file)
    if plane_file is not None:
        return body, files.read_plane(plane_file)
    return body, normalize.auto_plane(body, int(auto_centroid_axis))  # type: ignore


@cli.command()
def analyze(
    body_file: Path,
    plane: Path = typer.Option(None, help="JSON file with the hyperplane"),
    auto_centroid_axis: int = typer.Option(
        None, help="Use the centroid hyperplane orthogonal to this axis"
    ),
    json_output: bool = typer.Option(True, "--json/--csv", help="Output format"),
    orientation: stability.Orientation = typer.Option(stability.Orientation.TIGHT),
    optimize_restarts: int = typer.Option(0, help="Restarts of the triangle search (2D)"),
    seed: int = typer.Option(0),
    env_file: Path = typer.Option(None),
    debug_level: configure.DebugLevel = configure.DebugLevel.ERROR,
):
    """Verify every inequality of the stability estimate for one body and hyperplane."""
    # STEP: setup the console and the logger; the console writes to standard error
    console, logger = configure.setup(debug_level)
    environment.load_environment(env_file, logger)
    display.display_tool_details(console)
    # STEP: read the inputs and run the analysis
    try:
        body, hyperplane = _read_inputs(body_file, plane, auto_centroid_axis)
        report = stability.analyze(body, hyperplane, orientation, optimize_restarts, seed)
    except errors.GrunstabError as error:
        raise _fail(
            console, error, "Did you provide a full-dimensional body and a centroid hyperplane?"
        )
    # STEP: emit the report on standard output
    if json_output:
        typer.echo(produce.to_json(produce.report_to_dict(report)))
    else:
        table = pandas.DataFrame([produce.report_to_row(report)])
        typer.echo(table.to_csv(index=False, float_format=constants.sweep.Float_Format), nl=False)
    # STEP: report the outcome through the exit code
    if not stability.report_passed(report):
        console.print(
            f":warning: Failed checks: {', '.join(stability.failed_checks(report))}"
        )
        raise typer.Exit(code=constants.exit_codes.Check_Failure)
    console.print(":sparkles: Every check passed")


@cli.command()
def sweep(
    config_file: Path,
    env_file: Path = typer.Option(None),
    debug_level: configure.DebugLevel = configure.DebugLevel.ERROR,
):
    """Analyze a seeded family of bodies and save one CSV row per body."""
    # STEP: setup the console and the logger and load the optional seed override
    console, logger = configure.setup(debug_level)
    environment.load_environment(env_file, logger)
    display.display_tool_details(console)
    try:
        config = sweeps.apply_seed_override(
            sweeps.read_config(config_file), environment.get_seed_override()
        )
    except errors.GrunstabError as error:
        raise _fail(console, error, "Did you provide a valid sweep configuration?")
    # STEP: run the sweep and save its table
    console.print(f":runner: Running the {config.family} sweep with seed {config.seed}")
    table, reports = sweeps.run_sweep(config)
    try:
        output = sweeps.save_sweep(config, table)
    except errors.GrunstabError as error:
        raise _fail(console, error, "Did you specify a writable output file?")
    console.print(f":sparkles: Saved {len(table)} rows to {output}")
    # STEP: describe how the bound scales with the gap when the data allows it
    try:
        comparison = stability.exponent_comparison(reports)
        console.print(comparison.table.to_string(index=False))
        if comparison.slope_defined:
            console.print(
                f"fitted slope {comparison.slope:.4f}; "
                f"proved exponent {comparison.main_exponent:.4f},"
                f" earlier exponent {comparison.groemer_exponent:.4f}"
            )
    except errors.InsufficientData as error:
        logger.info(f"No exponent comparison: {error}")
    if not all(map(stability.report_passed, reports)):
        raise typer.Exit(code=constants.exit_codes.Check_Failure)


@cli.command(name="profiles")
def profiles_command(
    body_file: Path,
    plane: Path = typer.Option(None, help="JSON file with the hyperplane"),
    auto_centroid_axis: int = typer.Option(
        None, help="Use the centroid hyperplane orthogonal to this axis"
    ),
    samples: int = typer.Option(101, help="Number of sample points"),
    orientation: stability.Orientation = typer.Option(stability.Orientation.TIGHT),
    env_file: Path = typer.Option(None),
    debug_level: configure.DebugLevel = configure.DebugLevel.ERROR,
):
    """Sample the profiles g, c and s for plotting."""
    console, logger = configure.setup(debug_level)
    environment.load_environment(env_file, logger)
    display.display_tool_details(console)
    try:
        if samples < 2:
            raise errors.InputError("samples must be ≥ 2")
        body, hyperplane = _read_inputs(body_file, plane, auto_centroid_axis)
        chosen, _ = stability.choose_orientation(body, hyperplane, orientation)
        pair = normalize.normalize(body, chosen)
        profile = profiles.build_profile(pair)
        cones = profiles.build_cone_profiles(pair, profile)
        cone = witness.build_witness(pair, profile, cones)
        content = produce.sample_profiles(pair, profile, cones, cone, samples)
    except errors.GrunstabError as error:
        raise _fail(
            console, error, "Did you provide a full-dimensional body and at least two samples?"
        )
    typer.echo(produce.to_json(content))


@cli.command()
def hyperplane(
    body_file: Path,
    alpha: float = typer.Option(..., help="Target ratio |K ∩ H+| / |K|"),
    debug_level: configure.DebugLevel = configure.DebugLevel.ERROR,
):
    """Find a line through the centroid of a polygon that cuts off the ratio alpha."""
    console, _ = configure.setup(debug_level)
    display.display_tool_details(console)
    try:
        body = files.read_body(body_file)
        line = stability.find_hyperplane_for_ratio(body, alpha)
    except errors.GrunstabError as error:
        raise _fail(console, error, "Is alpha between 4/9 and 5/9 and reachable for this polygon?")
    typer.echo(produce.to_json(produce.plane_to_dict(line)))
