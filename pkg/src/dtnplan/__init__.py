"""Placement optimizer and mission what-if planner for UxV networks."""

__version__ = "0.1.0"

FORMAT_VERSION = 1
