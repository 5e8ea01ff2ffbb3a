"""Augmented Dickey-Fuller test and integration-order search."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .core import TimeSeries
from .errors import ConfigError, DataError
from .regress import ols

__all__ = [
    "Deterministic",
    "AdfResult",
    "IntegrationOrder",
    "adf_test",
    "integration_order",
    "adf_critical_values",
    "default_max_lags",
    "MIN_OBS",
]

MIN_OBS = 20


class Deterministic(str, Enum):
    NONE = "none"
    CONSTANT = "constant"
    CONSTANT_TREND = "constant_trend"

    @classmethod
    def coerce(cls, value) -> "Deterministic":
        if isinstance(value, cls):
            return value
        aliases = {"n": "none", "nc": "none", "c": "constant", "ct": "constant_trend", "trend": "constant_trend"}
        text = str(value).strip().lower()
        try:
            return cls(aliases.get(text, text))
        except ValueError:
            raise ConfigError(f"unknown deterministic specification {value!r}") from None

    @property
    def n_terms(self) -> int:
        return {"none": 0, "constant": 1, "constant_trend": 2}[self.value]


# Response-surface coefficients for the single-series Dickey-Fuller tau
# statistic (MacKinnon 2010): cv(T) = b0 + b1/T + b2/T² + b3/T³,
# rows for the 1%, 5% and 10% levels.
_TAU_SURFACE = {
    Deterministic.NONE: (
        (-2.56574, -2.2358, -3.627, 0.0),
        (-1.94100, -0.2686, -3.365, 31.223),
        (-1.61682, 0.2656, -2.714, 25.364),
    ),
    Deterministic.CONSTANT: (
        (-3.43035, -6.5393, -16.786, -79.433),
        (-2.86154, -2.8903, -4.234, -40.040),
        (-2.56677, -1.5384, -2.809, 0.0),
    ),
    Deterministic.CONSTANT_TREND: (
        (-3.95877, -9.0531, -28.428, -134.155),
        (-3.41049, -4.3904, -9.036, -45.374),
        (-3.12705, -2.5856, -3.925, -22.380),
    ),
}
LEVELS = ("1%", "5%", "10%")


def adf_critical_values(deterministic, nobs: int) -> dict[str, float]:
    deterministic = Deterministic.coerce(deterministic)
    inv = 1.0 / nobs
    return {
        level: b0 + b1 * inv + b2 * inv ** 2 + b3 * inv ** 3
        for level, (b0, b1, b2, b3) in zip(LEVELS, _TAU_SURFACE[deterministic])
    }


def default_max_lags(nobs: int) -> int:
    """Schwert's rule ``floor(12 · (T/100)^(1/4))``."""
    return int(math.floor(12.0 * (nobs / 100.0) ** 0.25))


@dataclass(frozen=True)
class AdfResult:
    statistic: float
    critical_values: dict[str, float]
    deterministic: Deterministic
    lags: int
    nobs: int
    lag_selection: str = "fixed"

    @property
    def reject_unit_root(self) -> bool:
        return self.statistic < self.critical_values["5%"]

    def rejects_at(self, level: str) -> bool:
        return self.statistic < self.critical_values[level]

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "critical_values": dict(self.critical_values),
            "deterministic": self.deterministic.value,
            "lags": self.lags,
            "nobs": self.nobs,
            "reject_unit_root": self.reject_unit_root,
        }


def _design(y: np.ndarray, lags: int, start: int, det: Deterministic) -> tuple[np.ndarray, np.ndarray]:
    """Response Δy_t and regressors [y_{t-1}, Δy_{t-1..t-lags}, deterministic] for t >= start."""
    dy = np.diff(y)
    # dy[i] = y[i+1] - y[i]; the response for row i is dy[i] with level y[i]
    rows = np.arange(start, len(dy))
    cols = [y[rows]]
    cols += [dy[rows - j] for j in range(1, lags + 1)]
    if det.n_terms >= 1:
        cols.append(np.ones(len(rows)))
    if det.n_terms == 2:
        cols.append(np.arange(1, len(rows) + 1, dtype=float))
    return dy[rows], np.column_stack(cols)


def _aic(resp: np.ndarray, X: np.ndarray) -> float:
    beta, *_ = np.linalg.lstsq(X, resp, rcond=None)
    e = resp - X @ beta
    n = len(resp)
    return n * math.log(float(e @ e) / n) + 2 * X.shape[1]


def adf_test(s, deterministic=Deterministic.CONSTANT_TREND, lags: int | None = None,
             max_lags: int | None = None) -> AdfResult:
    """Augmented Dickey-Fuller t-test of a unit root.

    With ``lags=None`` the augmentation order minimises AIC over
    ``0..max_lags`` on a common sample, then the test regression is re-run
    on all usable observations at the chosen order.
    """
    det = Deterministic.coerce(deterministic)
    if isinstance(s, TimeSeries):
        y = s.complete_values()
    else:
        y = np.asarray(s, dtype=float)
        if np.isnan(y).any():
            raise DataError("ADF test needs a complete series")
    T = len(y)
    if T < MIN_OBS:
        raise DataError(f"ADF test needs at least {MIN_OBS} observations, got {T}")
    if np.ptp(y) == 0.0:
        raise DataError("ADF test is undefined for a constant series")

    if lags is None:
        cap = default_max_lags(T) if max_lags is None else max_lags
        cap = max(0, min(cap, T - MIN_OBS))
        crit = [_aic(*_design(y, L, cap, det)) for L in range(cap + 1)]
        lags = int(np.argmin(crit))
        how = "aic"
    else:
        if lags < 0:
            raise ConfigError(f"ADF lag count must be non-negative, got {lags}")
        if T < MIN_OBS + lags:
            raise DataError(f"ADF test with {lags} lags needs at least {MIN_OBS + lags} observations, got {T}")
        how = "fixed"

    resp, X = _design(y, lags, lags, det)
    fit = ols(resp, X, intercept=False)
    stat = float(fit.tvalues[0])
    return AdfResult(stat, adf_critical_values(det, fit.nobs), det, lags, fit.nobs, how)


@dataclass(frozen=True)
class IntegrationOrder:
    name: str
    order: int | None
    max_d: int
    results: tuple[tuple[int, AdfResult], ...] = field(default=())
    assumed_stationary: bool = False

    @property
    def label(self) -> str:
        if self.order is None:
            return f"> {self.max_d}"
        return f"I({self.order})"

    @property
    def decision(self) -> str:
        if self.assumed_stationary:
            return "Stationnaire (supposée)"
        return "Stationnaire" if self.order is not None else "Non stationnaire"

    @property
    def deciding_result(self) -> AdfResult | None:
        """The test that set the order (the first rejection), else the last one run."""
        if not self.results:
            return None
        for _, res in self.results:
            if res.reject_unit_root:
                return res
        return self.results[-1][1]

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "order": self.order,
            "label": self.label,
            "decision": self.decision,
            "assumed_stationary": self.assumed_stationary,
            "tests": [{"differences": d, **r.to_dict()} for d, r in self.results],
        }


def integration_order(s, max_d: int = 2, deterministic=Deterministic.CONSTANT_TREND,
                      lags: int | None = None, assume_stationary: bool = False) -> IntegrationOrder:
    """Difference until the ADF test rejects; the order is the first rejecting depth."""
    name = s.name if isinstance(s, TimeSeries) else "y"
    if assume_stationary:
        return IntegrationOrder(name, 0, max_d, (), assumed_stationary=True)
    y = s.complete_values() if isinstance(s, TimeSeries) else np.asarray(s, dtype=float)
    results = []
    for d in range(max_d + 1):
        res = adf_test(y, deterministic, lags)
        results.append((d, res))
        if res.reject_unit_root:
            return IntegrationOrder(name, d, max_d, tuple(results))
        y = np.diff(y)
    return IntegrationOrder(name, None, max_d, tuple(results))
