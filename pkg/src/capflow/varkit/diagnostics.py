"""Residual serial-correlation LM test for a fitted VAR."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from ..errors import CapflowError, DataError
from .model import VarModel, multi_lstsq

__all__ = ["LmResult", "lm_serial_test"]


@dataclass(frozen=True)
class LmResult:
    lag: int
    statistic: float
    df: int
    pvalue: float
    error: str | None = None

    def to_dict(self) -> dict:
        return {"lag": self.lag, "LM": self.statistic, "df": self.df, "p_value": self.pvalue, "error": self.error}


def lm_serial_test(m: VarModel, max_lag: int = 4) -> list[LmResult]:
    """Breusch-Godfrey LM test of no residual autocorrelation at each single lag ``h``.

    The residuals are regressed on the VAR regressors plus the residuals
    lagged ``h`` times (pre-sample values set to zero);
    ``LM(h) = n · (k - tr(Ω_R⁻¹ Ω_U))`` with both covariances over ``n = T - p``
    rows, compared with χ²(k²).
    """
    if max_lag < 1:
        raise DataError(f"max_lag must be at least 1, got {max_lag}")
    k, p = m.k, m.p
    U = m.resid
    n = U.shape[0]
    if n <= k * (p + 1) + 1:
        raise DataError(f"LM test needs T - p > {k * (p + 1) + 1}, have {n}")
    _, Z = m.design()
    omega_r_inv = np.linalg.inv(U.T @ U / n)
    df = k * k
    out = []
    for h in range(1, max_lag + 1):
        if h >= n:
            out.append(LmResult(h, float("nan"), df, float("nan"), f"lag {h} exceeds the {n} residuals"))
            continue
        Ulag = np.zeros_like(U)
        Ulag[h:] = U[:-h]
        try:
            _, E, _ = multi_lstsq(np.hstack([Z, Ulag]), U)
        except CapflowError as exc:
            out.append(LmResult(h, float("nan"), df, float("nan"), str(exc)))
            continue
        lm = n * (k - np.trace(omega_r_inv @ (E.T @ E / n)))
        out.append(LmResult(h, float(lm), df, float(sps.chi2.sf(lm, df))))
    return out
