"""Load and save files."""

import json
import logging

from pathlib import Path

from typing import Any

import pandas

from grunstab import constants
from grunstab import errors
from grunstab import geometry
from grunstab import produce


def confirm_valid_file(file: Path) -> bool:
    """Confirm that the provided file is a valid path."""
    # determine if the file is not None and if it is a file
    if file is not None:
        if file.is_file():
            return True
    return False


def read_json_file(json_file: Path) -> Any:
    """Read a JSON file, naming the byte offset of any syntax error."""
    if not confirm_valid_file(json_file):
        raise errors.InputError(f"cannot read {json_file}: no such file")
    raw = json_file.read_bytes()
    try:
        text = raw.decode(constants.files.Encoding)
    except UnicodeDecodeError as error:
        raise errors.InputError(
            f"cannot decode {json_file} at byte offset {error.start}: {error.reason}"
        ) from error
    try:
        return json.loads(text)
    except json.JSONDecodeError as error:
        # the decoder counts characters; report the offset in bytes of the file
        offset = len(text[: error.pos].encode(constants.files.Encoding))
        raise errors.InputError(
            f"malformed JSON in {json_file} at byte offset {offset}: {error.msg}"
        ) from error


def read_body(body_file: Path) -> geometry.ConvexBody:
    """Read a body from its JSON file."""
    return produce.body_from_dict(read_json_file(body_file))


def read_plane(plane_file: Path) -> geometry.Hyperplane:
    """Read a hyperplane from its JSON file."""
    return produce.plane_from_dict(read_json_file(plane_file))


def create_directory(directory: Path) -> None:
    """Create a directory if it does not exist and don't fail if it does."""
    # create the complete file path, making all parent directories
    # if needed and not failing if the directory already exists
    try:
        directory.mkdir(parents=True, exist_ok=True)
    # permission errors developed, this means that it is not possible to
    # create the directory and thus the program cannot save its results
    except PermissionError as error:
        raise errors.ConfigError(f"unable to create the directory {directory}") from error


def save_dataframe(output: Path, data: pandas.DataFrame) -> None:
    """Save the provided DataFrame as a CSV file with round-trip safe numbers."""
    create_directory(output.resolve().parent)
    logger = logging.getLogger(constants.logging.Rich)
    logger.debug(f"Saving {len(data)} rows to {output}")
    # '.' decimals and 17 significant digits; no index column
    data.to_csv(
        str(output.resolve()),
        index=False,
        float_format=constants.sweep.Float_Format,
        encoding=constants.files.Encoding,
        lineterminator=constants.markers.Newline,
    )
