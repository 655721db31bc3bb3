"""Enriched unfitted finite elements for 1D interface problems with implicit jump conditions."""

__version__ = "0.1.0"
