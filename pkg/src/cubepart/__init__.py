"""Equitable 2-partitions of the n-cube: search, verification and analysis."""

__version__ = "0.1.0"
