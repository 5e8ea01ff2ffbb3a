"""Vector autoregressions: estimation, lag selection, diagnostics, causality, FEVD."""
from .causality import (
    FEEDBACK,
    GrangerEntry,
    GrangerResult,
    classify_feedback,
    granger_matrix,
    granger_pairwise,
    significance_stars,
)
from .decomposition import FevdTable, cholesky_factor, fevd, fevd_all, vma_coefficients
from .diagnostics import LmResult, lm_serial_test
from .model import (
    VarModel,
    companion_matrix,
    companion_roots,
    lagged_design,
    simulate_var,
    var_estimate,
)
from .selection import CRITERIA, LagSelection, lag_select

__all__ = [
    "CRITERIA",
    "FEEDBACK",
    "FevdTable",
    "GrangerEntry",
    "GrangerResult",
    "LagSelection",
    "LmResult",
    "VarModel",
    "cholesky_factor",
    "classify_feedback",
    "companion_matrix",
    "companion_roots",
    "fevd",
    "fevd_all",
    "granger_matrix",
    "granger_pairwise",
    "lag_select",
    "lagged_design",
    "lm_serial_test",
    "significance_stars",
    "simulate_var",
    "var_estimate",
    "vma_coefficients",
]
