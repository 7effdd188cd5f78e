"""Exact generating functions for 1-3-2 restricted alternating permutations,
with a brute-force oracle that checks every closed form."""

from .formulas import FamilyKey, coefficients, gf
from .oracle import CountQuery, Oracle, OracleConfig
from .perm import ClassLabel
from .series import BiSeries, LaurentSeries

__version__ = "0.1.0"

__all__ = ["FamilyKey", "coefficients", "gf", "CountQuery", "Oracle", "OracleConfig",
           "ClassLabel", "BiSeries", "LaurentSeries"]
