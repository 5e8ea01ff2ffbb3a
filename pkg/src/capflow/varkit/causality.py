"""Pairwise Granger causality F-tests."""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import stats as sps

from ..core import Dataset, TimeSeries, align
from ..errors import CapflowError, DataError
from .model import multi_lstsq

__all__ = [
    "GrangerResult",
    "GrangerEntry",
    "granger_pairwise",
    "granger_matrix",
    "classify_feedback",
    "significance_stars",
    "FEEDBACK",
]

FEEDBACK = "boucle rétroactive"


def significance_stars(p: float) -> str:
    """``***`` at 1%, ``**`` at 5%, ``*`` at 10%."""
    if not np.isfinite(p):
        return ""
    if p <= 0.01:
        return "***"
    if p <= 0.05:
        return "**"
    if p <= 0.10:
        return "*"
    return ""


@dataclass(frozen=True)
class GrangerResult:
    cause: str
    effect: str
    lags: int
    F: float
    p_value: float
    n: int

    @property
    def df(self) -> tuple[int, int]:
        return self.lags, self.n - 2 * self.lags - 1

    @property
    def null(self) -> str:
        return f"{self.cause} ne cause pas (au sens de granger) {self.effect}"

    @property
    def stars(self) -> str:
        return significance_stars(self.p_value)

    def rejects(self, alpha: float = 0.05) -> bool:
        return self.p_value < alpha

    def to_dict(self) -> dict:
        return {"cause": self.cause, "effect": self.effect, "lags": self.lags, "F": self.F,
                "p_value": self.p_value, "n": self.n}


def _granger_one(cause: np.ndarray, effect: np.ndarray, p: int, cause_name: str, effect_name: str) -> GrangerResult:
    N = len(effect)
    n = N - p
    df2 = n - 2 * p - 1
    if df2 <= 0:
        raise DataError(f"Granger test with {p} lags needs more than {3 * p + 1} observations, have {N}")
    own = [effect[p - j:N - j] for j in range(1, p + 1)]
    other = [cause[p - j:N - j] for j in range(1, p + 1)]
    ones = np.ones(n)
    yv = effect[p:, None]
    _, e_r, _ = multi_lstsq(np.column_stack([ones, *own]), yv)
    _, e_u, _ = multi_lstsq(np.column_stack([ones, *own, *other]), yv)
    rss_r = float(e_r[:, 0] @ e_r[:, 0])
    rss_u = float(e_u[:, 0] @ e_u[:, 0])
    F = max(0.0, ((rss_r - rss_u) / p) / (rss_u / df2))
    return GrangerResult(cause_name, effect_name, p, F, float(sps.f.sf(F, p, df2)), n)


def _pair_arrays(x, y) -> tuple[np.ndarray, np.ndarray, str, str]:
    if isinstance(x, TimeSeries) and isinstance(y, TimeSeries):
        if x.index != y.index:
            raise DataError(f"series {x.name!r} and {y.name!r} do not share an index")
        pair = align(Dataset((x, y if y.name != x.name else y.rename(y.name + "'"))))
        return pair.series[0].values, pair.series[1].values, x.name, y.name
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.shape != yv.shape or xv.ndim != 1:
        raise DataError("Granger test needs two 1-d series of equal length")
    if np.isnan(xv).any() or np.isnan(yv).any():
        raise DataError("Granger test needs complete series")
    return xv, yv, "x", "y"


def granger_pairwise(x, y, p: int = 1) -> tuple[GrangerResult, GrangerResult]:
    """Test ``x ↛ y`` and ``y ↛ x`` on the same sample.

    Unrestricted: own lags, the other series' lags and a constant.
    Restricted: own lags and a constant. ``F ~ F(p, n - 2p - 1)``, ``n = N - p``.
    """
    if p < 1:
        raise DataError(f"Granger lag order must be at least 1, got {p}")
    xv, yv, xn, yn = _pair_arrays(x, y)
    return _granger_one(xv, yv, p, xn, yn), _granger_one(yv, xv, p, yn, xn)


@dataclass(frozen=True)
class GrangerEntry:
    cause: str
    effect: str
    result: GrangerResult | None
    error: str | None = None

    def to_dict(self) -> dict:
        if self.result is not None:
            return self.result.to_dict()
        return {"cause": self.cause, "effect": self.effect, "error": self.error}


def granger_matrix(d: Dataset, p: int = 1, names=None) -> list[GrangerEntry]:
    """All ordered pairs, two consecutive entries per unordered pair.

    Each pair is aligned on its own complete sample. A failing pair is
    recorded with its error message rather than aborting the table.
    """
    names = list(d.names if names is None else names)
    out = []
    for i, j in combinations(range(len(names)), 2):
        a, b = d[names[i]], d[names[j]]
        try:
            ab, ba = granger_pairwise(a, b, p)
            out += [GrangerEntry(a.name, b.name, ab), GrangerEntry(b.name, a.name, ba)]
        except CapflowError as exc:
            out += [GrangerEntry(a.name, b.name, None, str(exc)), GrangerEntry(b.name, a.name, None, str(exc))]
    return out


def classify_feedback(xy: GrangerResult, yx: GrangerResult, alpha: float = 0.10) -> str:
    """Label a pair: bidirectional causality (feedback loop), one direction, or neither."""
    a, b = xy.p_value < alpha, yx.p_value < alpha
    if a and b:
        return FEEDBACK
    if a:
        return f"unidirectionnelle ({xy.cause} → {xy.effect})"
    if b:
        return f"unidirectionnelle ({yx.cause} → {yx.effect})"
    return "aucune causalité"
