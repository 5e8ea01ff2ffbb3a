"""Moving-average representation and Cholesky forecast-error variance decomposition."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..errors import ConfigError, DataError, NotPositiveDefiniteError
from .model import VarModel

__all__ = ["vma_coefficients", "cholesky_factor", "FevdTable", "fevd", "fevd_all"]


def vma_coefficients(m, H: int) -> np.ndarray:
    """``B_0 .. B_H`` with ``B_0 = I`` and ``B_i = Σ_{j=1}^{min(p,i)} A_j B_{i-j}``.

    Returns an array of shape ``(H + 1, k, k)``.
    """
    coefs = m.coefs if isinstance(m, VarModel) else np.asarray(m, dtype=float)
    p, k = coefs.shape[0], coefs.shape[-1]
    if H < 0:
        raise ConfigError(f"horizon must be non-negative, got {H}")
    B = np.zeros((H + 1, k, k))
    B[0] = np.eye(k)
    for i in range(1, H + 1):
        for j in range(1, min(p, i) + 1):
            B[i] += coefs[j - 1] @ B[i - j]
    return B


def cholesky_factor(omega, tol: float = 1e-12) -> np.ndarray:
    """Lower-triangular ``P`` with ``P Pᵀ = omega`` and a positive diagonal.

    A pivot at or below ``tol`` times the largest diagonal entry of ``omega``
    is treated as a failure of positive definiteness.
    """
    S = np.array(omega, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DataError(f"covariance must be square, got shape {S.shape}")
    scale = max(float(np.max(np.abs(np.diag(S)))), np.finfo(float).tiny)
    if not np.allclose(S, S.T, rtol=1e-10, atol=1e-12 * scale):
        raise DataError("covariance matrix is not symmetric")
    k = S.shape[0]
    P = np.zeros_like(S)
    for j in range(k):
        pivot = S[j, j] - P[j, :j] @ P[j, :j]
        if not pivot > tol * scale:
            raise NotPositiveDefiniteError(
                f"covariance is not positive definite: pivot {j + 1} of {k} equals {pivot:.3e}", pivot=j
            )
        P[j, j] = math.sqrt(pivot)
        P[j + 1:, j] = (S[j + 1:, j] - P[j + 1:, :j] @ P[j, :j]) / P[j, j]
    return P


@dataclass(frozen=True)
class FevdTable:
    """Percentage of the ``h``-step forecast-error variance of ``target`` due to each orthogonal shock."""

    target: str
    horizons: np.ndarray
    se: np.ndarray
    shares: np.ndarray
    ordering: list[str]

    def share(self, h: int, shock: str) -> float:
        return float(self.shares[h - 1, self.ordering.index(shock)])

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "ordering": list(self.ordering),
            "rows": [
                {"period": int(h), "se": float(s), "shares": dict(zip(self.ordering, map(float, row)))}
                for h, s, row in zip(self.horizons, self.se, self.shares)
            ],
        }


def _ordered(m: VarModel, ordering: Sequence[str] | None) -> VarModel:
    if ordering is None or list(ordering) == m.names:
        return m
    if sorted(ordering) != sorted(m.names) or len(set(ordering)) != len(ordering):
        raise ConfigError(f"Cholesky ordering {list(ordering)} is not a permutation of {m.names}")
    return m.reorder(ordering)


def _orthogonal_irfs(m: VarModel, H: int) -> np.ndarray:
    P = cholesky_factor(m.omega)
    return vma_coefficients(m, H - 1) @ P


def fevd(m: VarModel, target: str, H: int = 10, ordering: Sequence[str] | None = None) -> FevdTable:
    """Cholesky FEVD of ``target`` for horizons ``1..H``.

    With ``Θ_i = B_i P``, the forecast MSE at horizon ``h`` is
    ``Σ_{i<h} Σ_j Θ_i[target, j]²`` and shock ``j``'s share is its part of that sum.
    """
    if H < 1:
        raise ConfigError(f"FEVD needs at least one horizon, got {H}")
    m = _ordered(m, ordering)
    if target not in m.names:
        raise ConfigError(f"unknown FEVD target {target!r}; model variables: {', '.join(m.names)}")
    t = m.names.index(target)
    theta = _orthogonal_irfs(m, H)
    contrib = np.cumsum(theta[:, t, :] ** 2, axis=0)
    mse = contrib.sum(axis=1)
    # rounding can push a sole contributor a ulp past 100
    shares = np.clip(100.0 * contrib / mse[:, None], 0.0, 100.0)
    return FevdTable(target, np.arange(1, H + 1), np.sqrt(mse), shares, list(m.names))


def fevd_all(m: VarModel, H: int = 10, ordering: Sequence[str] | None = None) -> dict[str, FevdTable]:
    m = _ordered(m, ordering)
    return {name: fevd(m, name, H) for name in m.names}
