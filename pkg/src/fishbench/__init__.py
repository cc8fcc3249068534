"""Exact-arithmetic workbench for the fish-graph classification."""

__version__ = "0.1.0"
