"""Pearson correlation with Student-t significance, and the correlation matrix table."""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import stats as sps

from .core import Dataset
from .errors import DataError

__all__ = ["CorrMatrix", "pearson", "corr_significance", "corr_matrix", "student_critical"]


def pearson(x, y) -> float:
    """Pearson correlation coefficient.

    Evaluated as ``(Σxy - n·x̄·ȳ) / sqrt((Σx² - n·x̄²)(Σy² - n·ȳ²))`` on
    mean-centred data, which keeps the one-pass formula free of cancellation.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise DataError(f"pearson needs two 1-d sequences of equal length, got {x.shape} and {y.shape}")
    n = x.shape[0]
    if n < 3:
        raise DataError(f"pearson needs at least 3 observations, got {n}")
    xc = x - x.mean()
    yc = y - y.mean()
    xbar, ybar = xc.mean(), yc.mean()
    sxx = np.dot(xc, xc) - n * xbar * xbar
    syy = np.dot(yc, yc) - n * ybar * ybar
    if sxx <= 0.0 or syy <= 0.0:
        raise DataError("pearson is undefined for a constant sequence (zero variance)")
    sxy = np.dot(xc, yc) - n * xbar * ybar
    r = sxy / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, float(r)))


def student_critical(alpha: float, df: int) -> float:
    """Two-sided critical value of Student's t with ``df`` degrees of freedom."""
    return float(sps.t.isf(alpha / 2.0, df))


def corr_significance(r: float, n: int, alpha: float = 0.05) -> tuple[float, bool]:
    """Return ``(t, significant)`` with ``t = |r| / sqrt((1 - r²) / (n - 2))``.

    A perfect correlation yields ``t = inf`` and is always significant.
    """
    if n < 3:
        raise DataError(f"significance of a correlation needs n >= 3, got {n}")
    if not 0.0 < alpha < 1.0:
        raise DataError(f"alpha must lie in (0, 1), got {alpha}")
    if abs(r) > 1.0:
        raise DataError(f"|r| must not exceed 1, got {r}")
    if abs(r) == 1.0:
        return math.inf, True
    t = abs(r) / math.sqrt((1.0 - r * r) / (n - 2))
    return t, t > student_critical(alpha, n - 2)


@dataclass(frozen=True)
class CorrMatrix:
    names: list[str]
    r: np.ndarray
    t: np.ndarray
    significant: np.ndarray
    n: np.ndarray
    alpha: float = 0.05

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "alpha": self.alpha,
            "r": self.r.tolist(),
            "t": [[None if math.isinf(v) else v for v in row] for row in self.t.tolist()],
            "significant": self.significant.tolist(),
            "n": self.n.tolist(),
        }


def corr_matrix(d: Dataset, alpha: float = 0.05, names=None) -> CorrMatrix:
    """Pairwise-complete correlation matrix with per-pair significance flags."""
    names = list(d.names if names is None else names)
    if len(names) < 2:
        raise DataError("a correlation matrix needs at least two series")
    k = len(names)
    cols = [d[name].values for name in names]
    r = np.eye(k)
    t = np.full((k, k), math.inf)
    sig = np.eye(k, dtype=bool)
    n = np.zeros((k, k), dtype=int)
    for i in range(k):
        n[i, i] = int((~np.isnan(cols[i])).sum())
    for i, j in combinations(range(k), 2):
        mask = ~(np.isnan(cols[i]) | np.isnan(cols[j]))
        try:
            rij = pearson(cols[i][mask], cols[j][mask])
            tij, sij = corr_significance(rij, int(mask.sum()), alpha)
        except DataError as exc:
            raise DataError(f"pair ({names[i]}, {names[j]}): {exc}") from exc
        r[i, j] = r[j, i] = rij
        t[i, j] = t[j, i] = tij
        sig[i, j] = sig[j, i] = sij
        n[i, j] = n[j, i] = int(mask.sum())
    return CorrMatrix(names, r, t, sig, n, alpha)
