"""Required docstring."""
