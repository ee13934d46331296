"""Load the optional .env file and read the variables that steer a run."""

from logging import Logger
from pathlib import Path

from typing import Optional

import os

from dotenv import load_dotenv

from grunstab import constants
from grunstab import errors

# A .env file may pin the seed of every sweep through the GRUNBAUM_SEED
# variable, so that a whole batch of experiments can be rerun without
# editing the sweep configurations. Variables already set in the shell win.


def locate_env_file(env_file: Optional[Path]) -> Optional[Path]:
    """Return the .env file to load: the given one, or the one in the working directory."""
    candidate = env_file if env_file is not None else Path.cwd() / constants.files.Env
    if candidate.is_file():
        return candidate
    return None


def load_environment(env_file: Optional[Path], logger: Logger) -> Optional[Path]:
    """Load the environment from the .env file when there is one and return its path."""
    located = locate_env_file(env_file)
    if located is None:
        if env_file is not None:
            logger.warning(f"Ignoring the missing environment file {env_file}")
        else:
            logger.debug("No .env file in the current directory")
        return None
    logger.debug(f"Environment file: {located}")
    load_dotenv(dotenv_path=located, override=False)
    return located


def get_seed_override() -> Optional[int]:
    """Retrieve the seed override from the environment, if there is one."""
    seed_text = os.getenv(constants.environment.Seed, default=constants.markers.Nothing)
    if seed_text.strip() == constants.markers.Nothing:
        return None
    try:
        return int(seed_text)
    except ValueError as error:
        raise errors.ConfigError(
            f"{constants.environment.Seed} must be an integer, found {seed_text!r}"
        ) from error
