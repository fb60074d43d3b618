"""Plotting for the mixture search's CSV outputs.

This package is deliberately decoupled from the search library: it consumes
only the documented CSV contract (``alpha_1..alpha_K, revenue, ope_mse,
random_ratio``), so any producer of conforming files can use it.
"""

__version__ = "0.1.0"

from .reader import CsvFormatError, PointTable, read_points
from .render import NoSupportedPoints, build_figure
