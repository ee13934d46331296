"""Display messages in the terminal window."""

from rich.console import Console

from grunstab import constants


def display_tool_details(console: Console) -> None:
    """Display the details about the tool."""
    # display the messages about the tool
    console.print()
    # --> display the tagline for the tool
    console.print(
        constants.grunstab.Emoji + constants.markers.Space + constants.grunstab.Tagline
    )
    console.print()


def display_error(console: Console, message: str, hint: str) -> None:
    """Display an error message with a hint about how to fix the input."""
    console.print(f":grimacing_face: {message}")
    console.print(
        constants.markers.Space
        + constants.markers.Space
        + constants.markers.Space
        + hint
        + constants.markers.Newline
        + constants.markers.Newline
        + ":sad_but_relieved_face: Exiting now!"
    )
    console.print()
