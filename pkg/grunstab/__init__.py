"""GrunStab: constructive stability estimates for Grünbaum's inequality."""

__version__ = "0.1.0"
