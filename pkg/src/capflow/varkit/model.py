"""VAR(p) estimation, companion-form stability and simulation."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import linalg
from scipy import stats as sps

from ..core import Dataset
from ..errors import DataError, RankDeficientError
from ..regress import RCOND_TOL

__all__ = [
    "VarModel",
    "var_estimate",
    "lagged_design",
    "companion_matrix",
    "companion_roots",
    "simulate_var",
]


def _as_data(d, names=None) -> tuple[np.ndarray, list[str]]:
    if isinstance(d, Dataset):
        if names is not None:
            d = d.select(names)
        Y = d.matrix()
        names = d.names
    else:
        Y = np.asarray(d, dtype=float)
        if Y.ndim != 2:
            raise DataError(f"VAR data must be a (T, k) array, got shape {Y.shape}")
        names = [f"y{j + 1}" for j in range(Y.shape[1])] if names is None else list(names)
    if np.isnan(Y).any():
        raise DataError("VAR estimation needs aligned, complete data; align the dataset first")
    return Y, list(names)


def lagged_design(Y: np.ndarray, p: int, start: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Responses ``Y[t]`` and regressors ``[1, Y[t-1], ..., Y[t-p]]`` for ``t >= start``.

    ``start`` defaults to ``p``; a larger value fixes a common sample across orders.
    """
    T = Y.shape[0]
    start = p if start is None else start
    cols = [np.ones((T - start, 1))]
    cols += [Y[start - j:T - j] for j in range(1, p + 1)]
    return Y[start:], np.hstack(cols)


def multi_lstsq(Z: np.ndarray, Y: np.ndarray, labels: Sequence[str] | None = None):
    """Least squares of every column of ``Y`` on ``Z`` via one QR factorisation.

    Returns ``(B, resid, R)``.
    """
    Q, R = linalg.qr(Z, mode="economic")
    sv = np.linalg.svd(R, compute_uv=False)
    rcond = sv[-1] / sv[0] if sv[0] > 0 else 0.0
    if rcond < RCOND_TOL:
        col = None
        for j in range(1, Z.shape[1] + 1):
            s = np.linalg.svd(Z[:, :j], compute_uv=False)
            if s[0] == 0 or s[-1] / s[0] < RCOND_TOL:
                col = j - 1
                break
        which = labels[col] if labels is not None and col is not None else f"column {col}"
        raise RankDeficientError(f"lag matrix is rank deficient at {which} (rcond {rcond:.2e})", column=which)
    B = linalg.solve_triangular(R, Q.T @ Y)
    return B, Y - Z @ B, R


def _regressor_labels(names: Sequence[str], p: int) -> list[str]:
    return ["const"] + [f"{n}(-{j})" for j in range(1, p + 1) for n in names]


@dataclass(frozen=True)
class VarModel:
    """Estimated ``y_t = m + A_1 y_{t-1} + ... + A_p y_{t-p} + e_t``.

    ``omega`` divides the residual cross-products by the residual degrees of
    freedom ``T - p - (k·p + 1)``; ``omega_ml`` divides by ``T - p``.
    """

    names: list[str]
    p: int
    intercept: np.ndarray
    coefs: np.ndarray
    omega: np.ndarray
    omega_ml: np.ndarray
    resid: np.ndarray = field(repr=False)
    params: np.ndarray = field(repr=False)
    bse: np.ndarray = field(repr=False)
    data: np.ndarray = field(repr=False)

    @property
    def k(self) -> int:
        return len(self.names)

    @property
    def T(self) -> int:
        return self.data.shape[0]

    @property
    def nobs(self) -> int:
        return self.T - self.p

    @property
    def df_resid(self) -> int:
        return self.nobs - (self.k * self.p + 1)

    @property
    def A(self) -> np.ndarray:
        return self.coefs

    @property
    def regressor_names(self) -> list[str]:
        return _regressor_labels(self.names, self.p)

    @property
    def tvalues(self) -> np.ndarray:
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.params / self.bse

    @property
    def pvalues(self) -> np.ndarray:
        return 2.0 * sps.t.sf(np.abs(self.tvalues), self.df_resid)

    def design(self) -> tuple[np.ndarray, np.ndarray]:
        return lagged_design(self.data, self.p)

    def reorder(self, ordering: Sequence[str]) -> "VarModel":
        """The same model with variables permuted into ``ordering``."""
        perm = [self.names.index(n) for n in ordering]
        if sorted(perm) != list(range(self.k)):
            raise DataError(f"ordering {list(ordering)} is not a permutation of {self.names}")
        ix = np.ix_(perm, perm)
        coefs = np.array([A[ix] for A in self.coefs]) if self.p else self.coefs
        rows = [0] + [1 + j * self.k + i for j in range(self.p) for i in perm]
        return VarModel(
            names=list(ordering), p=self.p, intercept=self.intercept[perm], coefs=coefs,
            omega=self.omega[ix], omega_ml=self.omega_ml[ix], resid=self.resid[:, perm],
            params=self.params[np.ix_(rows, perm)], bse=self.bse[np.ix_(rows, perm)],
            data=self.data[:, perm],
        )

    def to_dict(self) -> dict:
        return {
            "names": list(self.names),
            "p": self.p,
            "nobs": self.nobs,
            "intercept": self.intercept.tolist(),
            "coefs": self.coefs.tolist(),
            "omega": self.omega.tolist(),
        }


def var_estimate(d, p: int, names: Sequence[str] | None = None) -> VarModel:
    """Equation-by-equation OLS of each variable on a constant and ``p`` lags of all variables."""
    Y, names = _as_data(d, names)
    T, k = Y.shape
    if p < 0:
        raise DataError(f"lag order must be non-negative, got {p}")
    if T - p <= k * p + 1:
        raise DataError(f"VAR({p}) with {k} variables needs T - p > {k * p + 1}; T = {T}")
    Yt, Z = lagged_design(Y, p)
    B, resid, R = multi_lstsq(Z, Yt, _regressor_labels(names, p))
    n = T - p
    df = n - (k * p + 1)
    cross = resid.T @ resid
    omega = cross / df
    omega_ml = cross / n
    Rinv = linalg.solve_triangular(R, np.eye(R.shape[0]))
    zz_inv_diag = np.sum(Rinv ** 2, axis=1)
    bse = np.sqrt(np.outer(zz_inv_diag, np.diag(omega)))
    coefs = np.array([B[1 + j * k:1 + (j + 1) * k].T for j in range(p)]).reshape(p, k, k)
    return VarModel(
        names=names, p=p, intercept=B[0].copy(), coefs=coefs, omega=omega, omega_ml=omega_ml,
        resid=resid, params=B, bse=bse, data=Y,
    )


def companion_matrix(coefs: np.ndarray) -> np.ndarray:
    """The ``kp x kp`` matrix ``[[A_1 ... A_p], [I 0]]``."""
    coefs = np.asarray(coefs, dtype=float)
    p, k, _ = coefs.shape
    C = np.zeros((k * p, k * p))
    C[:k] = np.hstack(list(coefs))
    if p > 1:
        C[k:, :-k] = np.eye(k * (p - 1))
    return C


def companion_roots(m) -> tuple[np.ndarray, bool]:
    """Eigenvalues of the companion matrix (inverse roots of the AR polynomial).

    Sorted by decreasing modulus; the model is stable when every modulus is below 1.
    """
    coefs = m.coefs if isinstance(m, VarModel) else np.asarray(m, dtype=float)
    if coefs.shape[0] == 0:
        return np.array([], dtype=complex), True
    C = companion_matrix(coefs)
    if not np.isfinite(C).all():
        raise DataError("companion matrix has non-finite entries")
    roots = np.linalg.eigvals(C).astype(complex)
    roots = roots[np.argsort(-np.abs(roots), kind="stable")]
    return roots, bool(np.all(np.abs(roots) < 1.0))


def simulate_var(coefs, n: int, omega=None, intercept=None, rng=None, burn: int = 200,
                 size: int | None = None) -> np.ndarray:
    """Draw a Gaussian VAR path of length ``n`` (after ``burn`` discarded steps).

    With ``size`` returns ``size`` independent paths stacked as ``(size, n, k)``.
    """
    coefs = np.asarray(coefs, dtype=float)
    p, k, _ = coefs.shape
    rng = np.random.default_rng(rng)
    omega = np.eye(k) if omega is None else np.asarray(omega, dtype=float)
    intercept = np.zeros(k) if intercept is None else np.asarray(intercept, dtype=float)
    chol = np.linalg.cholesky(omega)
    reps = 1 if size is None else size
    total = n + burn + p
    shocks = rng.standard_normal((reps, total, k)) @ chol.T
    y = np.zeros((reps, total, k))
    for t in range(p, total):
        acc = intercept + shocks[:, t]
        for j in range(p):
            acc = acc + y[:, t - j - 1] @ coefs[j].T
        y[:, t] = acc
    out = y[:, burn + p:]
    return out[0] if size is None else out
