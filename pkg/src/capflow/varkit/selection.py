"""VAR lag-order selection: LogL, sequential modified LR, FPE, AIC, SC, HQ."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from ..errors import DataError
from .model import _as_data, lagged_design, multi_lstsq

__all__ = ["LagSelection", "lag_select", "CRITERIA"]

CRITERIA = ("LR", "FPE", "AIC", "SC", "HQ")


@dataclass(frozen=True)
class LagSelection:
    """Criteria for lags ``0..p_max`` estimated on the common sample of ``nobs`` rows."""

    lags: np.ndarray
    logl: np.ndarray
    lr: np.ndarray
    lr_pvalue: np.ndarray
    fpe: np.ndarray
    aic: np.ndarray
    sc: np.ndarray
    hq: np.ndarray
    selected: dict[str, int]
    nobs: int
    k: int
    alpha: float

    def column(self, criterion: str) -> np.ndarray:
        return {"LogL": self.logl, "LR": self.lr, "FPE": self.fpe,
                "AIC": self.aic, "SC": self.sc, "HQ": self.hq}[criterion]

    def to_dict(self) -> dict:
        def clean(a):
            return [None if not math.isfinite(v) else float(v) for v in a]
        return {
            "nobs": self.nobs,
            "alpha": self.alpha,
            "lags": self.lags.tolist(),
            "LogL": clean(self.logl),
            "LR": clean(self.lr),
            "LR_pvalue": clean(self.lr_pvalue),
            "FPE": clean(self.fpe),
            "AIC": clean(self.aic),
            "SC": clean(self.sc),
            "HQ": clean(self.hq),
            "selected": dict(self.selected),
        }


def lag_select(d, p_max: int, alpha: float = 0.05, names=None) -> LagSelection:
    """Fit VAR(0..p_max) on the last ``T - p_max`` rows and tabulate the criteria.

    Information criteria are per observation: ``AIC = (-2 LogL + 2 n_par) / T*``.
    The LR column is ``(T* - m)(ln|Ω_{p-1}| - ln|Ω_p|)`` with ``m = k·p + 1``,
    tested against χ²(k²) sequentially from ``p_max`` down; its selection is the
    first rejecting order (0 if none). Exact ties go to the smaller lag.
    """
    Y, _ = _as_data(d, names)
    T, k = Y.shape
    if p_max < 1:
        raise DataError(f"p_max must be at least 1, got {p_max}")
    if T - p_max <= k * p_max + 1:
        raise DataError(
            f"p_max = {p_max} is too large for {T} observations of {k} variables "
            f"(need T - p_max > {k * p_max + 1})"
        )
    n = T - p_max
    lags = np.arange(p_max + 1)
    logdet = np.empty(p_max + 1)
    for p in lags:
        Yt, Z = lagged_design(Y, int(p), start=p_max)
        _, resid, _ = multi_lstsq(Z, Yt)
        sign, ld = np.linalg.slogdet(resid.T @ resid / n)
        if sign <= 0:
            raise DataError(f"residual covariance at lag {p} is singular")
        logdet[p] = ld
    m = k * lags + 1
    npar = k * m
    logl = -0.5 * n * (k * (1.0 + math.log(2.0 * math.pi)) + logdet)
    aic = (-2.0 * logl + 2.0 * npar) / n
    sc = (-2.0 * logl + npar * math.log(n)) / n
    hq = (-2.0 * logl + 2.0 * npar * math.log(math.log(n))) / n
    with np.errstate(over="ignore"):
        fpe = ((n + m) / (n - m)) ** k * np.exp(logdet)
    lr = np.full(p_max + 1, np.nan)
    lr_p = np.full(p_max + 1, np.nan)
    lr[1:] = (n - m[1:]) * (logdet[:-1] - logdet[1:])
    lr_p[1:] = sps.chi2.sf(lr[1:], k * k)

    selected = {"LR": 0}
    for p in range(p_max, 0, -1):
        if lr_p[p] < alpha:
            selected["LR"] = p
            break
    for name, vals in (("FPE", fpe), ("AIC", aic), ("SC", sc), ("HQ", hq)):
        selected[name] = int(np.argmin(vals))
    return LagSelection(lags, logl, lr, lr_p, fpe, aic, sc, hq, selected, n, k, alpha)
