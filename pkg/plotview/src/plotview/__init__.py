"""Render micromacro sweep CSVs into publication-style figures.

Strict separation from the simulation: every number comes from the CSV
files; this package computes nothing but axis transforms.
"""

from .schema import SCHEMAS, SchemaError, read_table

__all__ = ["SCHEMAS", "SchemaError", "read_table"]

__version__ = "0.1.0"
