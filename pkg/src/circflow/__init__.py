"""Exact nowhere-zero circular flows and edge-colourings on regular multigraphs."""

__version__ = "0.1.0"
