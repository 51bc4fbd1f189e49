"""Exact solvers on nice tree decompositions."""

from .dp import DPBudgetError, dp_selfcheck, dp_solve, exact_nice

__all__ = ["DPBudgetError", "dp_selfcheck", "dp_solve", "exact_nice"]
