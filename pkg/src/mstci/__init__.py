"""Minimum spanning tree cycle intersection workbench."""

__version__ = "0.1.0"
