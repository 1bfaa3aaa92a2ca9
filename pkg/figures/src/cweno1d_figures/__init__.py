"""Figure recipes over the CSV files the cweno1d command line writes.

The package reads the documented schemas only; it never imports the
producing code.
"""

__version__ = "0.1.0"

from .recipes import RECIPES, render
from .tables import FigureDataError, read_table

__all__ = ["RECIPES", "render", "FigureDataError", "read_table"]
