"""Exact query-complexity measures of partial Boolean functions, reductions
between them, composition limits, and a Las Vegas certificate finder for
recursively composed functions."""

from . import boolfn, errors, lasvegas, limits, measures, ratlp, reductions
from .boolfn import PartialAssignment, PartialFunction, catalog, compose, power

__version__ = "0.1.0"

__all__ = ["PartialAssignment", "PartialFunction", "boolfn", "catalog", "compose", "errors",
           "lasvegas", "limits", "measures", "power", "ratlp", "reductions"]
