"""Least squares and the dynamic-regression applications built on it.

``ols`` solves by Householder QR; the normal equations are never formed.
Applications: a dynamic regression with a lagged dependent variable and a
stability flag, the Feldstein-Horioka saving-retention regression, and the
absolute-size regression of output on credit and monetary depth.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy import stats as sps

from .core import Dataset, TimeSeries, lag
from .errors import DataError, RankDeficientError

__all__ = [
    "OlsFit",
    "DynamicFit",
    "FeldsteinHorioka",
    "ols",
    "dynamic_regression",
    "feldstein_horioka",
    "absolute_size",
    "RCOND_TOL",
]

logger = logging.getLogger(__name__)

RCOND_TOL = 1e-12

LAGGED_DEPENDENT_NOTE = (
    "lagged dependent variable is correlated with the lagged error term; "
    "OLS estimates are consistent only under stability and serially uncorrelated errors"
)


@dataclass(frozen=True)
class OlsFit:
    names: list[str]
    params: np.ndarray
    bse: np.ndarray
    tvalues: np.ndarray
    pvalues: np.ndarray
    rsquared: float
    rsquared_adj: float
    resid: np.ndarray = field(repr=False)
    fitted: np.ndarray = field(repr=False)
    nobs: int
    k: int
    has_intercept: bool
    rss: float
    tss: float
    cov_params: np.ndarray = field(repr=False)

    @property
    def df_resid(self) -> int:
        return self.nobs - self.k

    @property
    def sigma2(self) -> float:
        return self.rss / self.df_resid

    def __getitem__(self, name: str) -> float:
        return float(self.params[self.names.index(name)])

    def coef(self, name: str) -> dict:
        i = self.names.index(name)
        return {
            "estimate": float(self.params[i]),
            "se": float(self.bse[i]),
            "t": float(self.tvalues[i]),
            "p": float(self.pvalues[i]),
        }

    def to_dict(self) -> dict:
        return {
            "coefficients": {name: self.coef(name) for name in self.names},
            "rsquared": self.rsquared,
            "rsquared_adj": self.rsquared_adj,
            "nobs": self.nobs,
            "k": self.k,
        }


def _as_matrix(X, names) -> tuple[np.ndarray, list[str]]:
    if isinstance(X, Dataset):
        return X.matrix(), list(X.names) if names is None else list(names)
    if isinstance(X, TimeSeries):
        return X.values[:, None], [X.name] if names is None else list(names)
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if names is None:
        names = [f"x{j + 1}" for j in range(arr.shape[1])]
    return arr, list(names)


def _first_dependent_column(X: np.ndarray) -> int:
    for j in range(1, X.shape[1] + 1):
        s = np.linalg.svd(X[:, :j], compute_uv=False)
        if s[0] == 0.0 or s[-1] / s[0] < RCOND_TOL:
            return j - 1
    return X.shape[1] - 1


def ols(y, X, intercept: bool = True, names: Sequence[str] | None = None) -> OlsFit:
    """Ordinary least squares of ``y`` on the columns of ``X``.

    Rows with a missing value anywhere are dropped. With ``intercept`` a
    column named ``const`` is appended last. R² is always the centred form
    ``1 - RSS / Σ(y - ȳ)²``; it is NaN when ``y`` is constant.
    """
    yv = y.values if isinstance(y, TimeSeries) else np.asarray(y, dtype=float).reshape(-1)
    Xv, names = _as_matrix(X, names)
    if Xv.shape[0] != yv.shape[0]:
        raise DataError(f"y has {yv.shape[0]} rows but X has {Xv.shape[0]}")
    if intercept:
        Xv = np.column_stack([Xv, np.ones(len(yv))])
        names = names + ["const"]
    if len(names) != Xv.shape[1]:
        raise DataError(f"{len(names)} names for {Xv.shape[1]} regressors")
    keep = ~(np.isnan(yv) | np.isnan(Xv).any(axis=1))
    yv, Xv = yv[keep], Xv[keep]
    n, k = Xv.shape
    if n <= k:
        raise DataError(f"{n} complete observations for {k} regressors; need n > k")

    Q, R = linalg.qr(Xv, mode="economic")
    sv = np.linalg.svd(R, compute_uv=False)
    rcond = sv[-1] / sv[0] if sv[0] > 0.0 else 0.0
    if rcond < RCOND_TOL:
        j = _first_dependent_column(Xv)
        raise RankDeficientError(
            f"regressor {names[j]!r} is (nearly) collinear with the preceding columns "
            f"(reciprocal condition number {rcond:.2e})",
            column=names[j],
        )
    params = linalg.solve_triangular(R, Q.T @ yv)
    fitted = Xv @ params
    resid = yv - fitted
    rss = float(resid @ resid)
    ycen = yv - yv.mean()
    tss = float(ycen @ ycen)
    df = n - k
    sigma2 = rss / df
    Rinv = linalg.solve_triangular(R, np.eye(k))
    cov = sigma2 * (Rinv @ Rinv.T)
    bse = np.sqrt(np.diag(cov))
    with np.errstate(divide="ignore", invalid="ignore"):
        tvalues = params / bse
    pvalues = 2.0 * sps.t.sf(np.abs(tvalues), df)
    if tss > 0.0:
        r2 = 1.0 - rss / tss
        r2_adj = 1.0 - (1.0 - r2) * (n - 1) / df
    else:
        r2 = r2_adj = math.nan
    return OlsFit(
        names=names, params=params, bse=bse, tvalues=tvalues, pvalues=pvalues,
        rsquared=r2, rsquared_adj=r2_adj, resid=resid, fitted=fitted, nobs=n, k=k,
        has_intercept=intercept, rss=rss, tss=tss, cov_params=cov,
    )


@dataclass(frozen=True)
class DynamicFit:
    base: OlsFit
    gamma2: float
    stable: bool
    lag_name: str
    notes: tuple[str, ...] = ()


def _series_and_lag(y) -> tuple[TimeSeries, TimeSeries]:
    if not isinstance(y, TimeSeries):
        y = TimeSeries.from_values("y", y)
    return y, lag(y, 1).rename(f"{y.name}(-1)")


def _regressor_columns(x) -> list[TimeSeries]:
    if isinstance(x, Dataset):
        return list(x.series)
    if isinstance(x, TimeSeries):
        return [x]
    if isinstance(x, (list, tuple)) and x and all(isinstance(c, TimeSeries) for c in x):
        return list(x)
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    return [TimeSeries.from_values(f"x{j + 1}", arr[:, j]) for j in range(arr.shape[1])]


def dynamic_regression(y, x, intercept: bool = True) -> DynamicFit:
    """Regress ``y_t`` on ``x_t`` and ``y_{t-1}``; flag stability ``|γ₂| < 1``."""
    y, ylag = _series_and_lag(y)
    cols = _regressor_columns(x)
    for c in cols:
        if len(c) != len(y):
            raise DataError(f"regressor {c.name!r} has length {len(c)}, y has {len(y)}")
    if len(y) < 3:
        raise DataError("dynamic regression needs at least 3 observations")
    X = np.column_stack([c.values for c in cols] + [ylag.values])
    fit = ols(y.values, X, intercept=intercept, names=[c.name for c in cols] + [ylag.name])
    gamma2 = fit[ylag.name]
    stable = abs(gamma2) < 1.0
    notes = [LAGGED_DEPENDENT_NOTE]
    if not stable:
        notes.append(f"STABILITY WARNING: |coefficient on {ylag.name}| = {abs(gamma2):.4f} >= 1 (explosive)")
    logger.debug("dynamic regression: %s", LAGGED_DEPENDENT_NOTE)
    return DynamicFit(fit, gamma2, stable, ylag.name, tuple(notes))


@dataclass(frozen=True)
class FeldsteinHorioka:
    fit: DynamicFit
    retention: float
    foreign_share: float
    saving_name: str

    @property
    def mobility(self) -> str:
        """``"high"`` when under half of investment is financed by domestic saving."""
        return "high" if self.retention < 0.5 else "low"

    def interpretation(self) -> str:
        dom = 100.0 * self.retention
        foreign = 100.0 * self.foreign_share
        return (
            f"retention = {self.retention:.2f}: {dom:.0f}% de l'investissement financé par l'épargne "
            f"intérieure, {foreign:.0f}% par l'épargne étrangère (capital mobility: {self.mobility})"
        )


def feldstein_horioka(inv_rate, sav_rate, include_intercept: bool = True) -> FeldsteinHorioka:
    """Investment/GDP on saving/GDP and lagged investment/GDP.

    The saving coefficient is the retention ratio; ``1 - retention`` is the
    share of investment financed from abroad.
    """
    if not isinstance(sav_rate, TimeSeries):
        sav_rate = TimeSeries.from_values("S/PIB", sav_rate)
    if not isinstance(inv_rate, TimeSeries):
        inv_rate = TimeSeries.from_values("I/PIB", inv_rate)
    dyn = dynamic_regression(inv_rate, sav_rate, intercept=include_intercept)
    beta1 = dyn.base[sav_rate.name]
    return FeldsteinHorioka(dyn, beta1, 1.0 - beta1, sav_rate.name)


def absolute_size(y_percap, credit_gdp, depth, intercept: bool = True) -> OlsFit:
    """Output per capita on private credit/GDP, money/GDP and its own lag.

    The adjusted R² of this fit is the absolute-size statistic.
    """
    credit = credit_gdp if isinstance(credit_gdp, TimeSeries) else TimeSeries.from_values("credit", credit_gdp)
    money = depth if isinstance(depth, TimeSeries) else TimeSeries.from_values("depth", depth)
    if money.name == credit.name:
        money = money.rename(f"{money.name}_2")
    return dynamic_regression(y_percap, [credit, money], intercept=intercept).base
