"""Define constants for use in GrunStab."""

import collections
import itertools


def create_constants(name, *args, **kwargs):
    """Create a namedtuple of constants."""
    # the constants are created such that:
    # the name is the name of the namedtuple
    # for *args with "Constant_Name" or **kwargs with Constant_Name = "AnyConstantName"
    # note that this creates a constant that will
    # throw an AttributeError when attempting to redefine
    # the return value from this function is always a new type
    new_constants = collections.namedtuple(name, itertools.chain(args, kwargs.keys()))
    return new_constants(*itertools.chain(args, kwargs.values()))


# define the keys of the JSON file formats
body = create_constants(
    "body",
    Dim="dim",
    Vertices="vertices",
    Normal="normal",
    Offset="offset",
    Linear="linear",
    Translation="translation",
)


# define the constants for environment variables
environment = create_constants(
    "environment",
    Seed="GRUNBAUM_SEED",
)


# define the files constants
files = create_constants(
    "files",
    Env=".env",
    Encoding="utf-8",
)


# define the numerical tolerances; the degeneracy tolerance is absolute and
# applies to bodies whose diameter has been brought to order one
tolerance = create_constants(
    "tolerance",
    Beta_Exact=1e-7,
    Bracket=1e-9,
    Centroid=1e-7,
    Check=1e-9,
    Degenerate=1e-10,
    Dedupe_Decimals=12,
    Imaginary=1e-9,
    Rounding_Ulps=64.0,
    Singular=1e-3,
    Root=1e-12,
    Search=1e-12,
    Unit_Normal=1e-12,
)


# define the exit codes of the command-line interface
exit_codes = create_constants(
    "exit_codes",
    Success=0,
    Input_Error=1,
    Check_Failure=2,
)


# The defined logging levels, in order of increasing severity, are as follows:
#
# DEBUG
# INFO
# WARNING
# ERROR
# CRITICAL

# define the logging constants
logging = create_constants(
    "logging",
    Debug="DEBUG",
    Info="INFO",
    Warning="WARNING",
    Error="ERROR",
    Critical="CRITICAL",
    Default_Logging_Level="ERROR",
    Format="%(message)s",
    Rich="Rich",
)

# define the constants for markers
markers = create_constants(
    "markers",
    Newline="\n",
    Nothing="",
    Space=" ",
)


# define the constants for Monte Carlo estimation
montecarlo = create_constants(
    "montecarlo",
    Batches=16,
    Confidence=0.99,
    Samples=1_000_000,
)


# define the constants for the Nelder-Mead search over triangles
optimizer = create_constants(
    "optimizer",
    Fatol=1e-12,
    Max_Evaluations=2000,
    Method="Nelder-Mead",
    Radius_High=1.5,
    Radius_Low=0.5,
    Restarts=4,
    Xatol=1e-6,
)


# define the constants for the rotating-line search in the plane
ratio_search = create_constants(
    "ratio_search",
    Angles=720,
)


# define the constants for progress bars
progress = create_constants(
    "progress",
    Bullet="•",
    Completed="completed",
    Elapsed="elapsed",
    Percentage_Format="[progress.percentage]{task.percentage:>3.0f}%",
    Remaining="remaining",
    Task_Format="[progress.description]{task.description}",
)


# define the constants for sweeps and their CSV output
sweep = create_constants(
    "sweep",
    Errors="errors",
    Family="family",
    Float_Format="%.17g",
    Format_Version="format_version",
    Index="index",
    Epsilon="epsilon",
    Perturbed_Cone="perturbed_cone",
    Plane_Axis="axis",
    Plane_Random="random",
    Polygon_Max_Vertices=12,
    Polygon_Min_Vertices=5,
    Polytope_Max_Dim=5,
    Polytope_Max_Vertices=40,
    Polytope_Vertices=20,
    Random_Polygon="random_polygon",
    Random_Polytope="random_polytope",
    Slack_Prefix="slack_",
    Version=1,
)


# define the constants for the orientation of the half-space H+
orientation = create_constants(
    "orientation",
    Negative="negative",
    Positive="positive",
    Tight="tight",
)


# define the constants for grunstab
grunstab = create_constants(
    "grunstab",
    Emoji=":triangular_ruler:",
    Name="GrunStab",
    Tagline="GrunStab: Stability Estimates for Grünbaum's Inequality!",
)
