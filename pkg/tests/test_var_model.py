import numpy as np
import pytest
from scipy import stats as sps

from capflow.core import Dataset
from capflow.errors import DataError, RankDeficientError
from capflow.regress import ols
from capflow.varkit import (
    companion_matrix,
    companion_roots,
    lag_select,
    lm_serial_test,
    simulate_var,
    var_estimate,
)

from oracles import random_stable_var, random_spd, var_polynomial_inverse_roots


def _frame(Y, names=None):
    names = names or [f"y{j + 1}" for j in range(Y.shape[1])]
    return Dataset.from_columns({n: Y[:, j] for j, n in enumerate(names)})


A_TRUE = np.array([[0.5, 0.1], [-0.2, 0.3]])


class TestEstimate:
    def test_recovers_coefficients(self):
        Y = simulate_var(A_TRUE[None], 5000, rng=1)
        m = var_estimate(_frame(Y), 1)
        assert np.all(np.abs(m.A[0] - A_TRUE) < 0.05)
        assert m.nobs == 4999 and m.T == 5000 and m.k == 2

    def test_matches_single_equation_ols(self, rng):
        Y = simulate_var(random_stable_var(3, 2, rng)[:, :, :], 200, random_spd(3, rng), rng=rng)
        m = var_estimate(_frame(Y), 2)
        Z = np.column_stack([Y[1:-1], Y[:-2]])
        for i in range(3):
            fit = ols(Y[2:, i], Z, intercept=True)
            # ols puts the constant last, VarModel first
            assert np.allclose(fit.params[:-1], m.params[1:, i], rtol=0, atol=1e-10)
            assert abs(fit.params[-1] - m.params[0, i]) < 1e-10
            assert np.allclose(fit.bse[:-1], m.bse[1:, i], rtol=0, atol=1e-10)

    def test_covariances(self, rng):
        Y = simulate_var(A_TRUE[None], 300, rng=rng)
        m = var_estimate(_frame(Y), 1)
        n = 299
        cross = m.resid.T @ m.resid
        assert np.allclose(m.omega, cross / (n - 3))
        assert np.allclose(m.omega_ml, cross / n)
        assert np.allclose(m.omega, m.omega.T)
        assert np.all(np.linalg.eigvalsh(m.omega) > 0)
        assert np.all(np.abs(m.resid.mean(axis=0)) < 1e-8 * np.abs(Y).max())

    def test_white_noise_small_coefficients(self, rng):
        Y = rng.normal(size=(2000, 3))
        m = var_estimate(_frame(Y), 1)
        assert np.all(np.abs(m.A[0]) < 0.1)
        assert (m.pvalues[1:] < 0.01).sum() <= 1

    def test_too_short(self, rng):
        with pytest.raises(DataError):
            var_estimate(_frame(rng.normal(size=(10, 3))), 3)

    def test_collinear_columns(self, rng):
        x = rng.normal(size=100)
        with pytest.raises(RankDeficientError):
            var_estimate(_frame(np.column_stack([x, 2 * x])), 1)

    def test_missing_rejected(self, rng):
        Y = rng.normal(size=(50, 2))
        Y[10, 0] = np.nan
        with pytest.raises(DataError):
            var_estimate(_frame(Y), 1)

    def test_reorder(self, rng):
        Y = simulate_var(A_TRUE[None], 300, rng=rng)
        m = var_estimate(_frame(Y, ["a", "b"]), 1)
        r = m.reorder(["b", "a"])
        ref = var_estimate(_frame(Y[:, ::-1], ["b", "a"]), 1)
        assert np.allclose(r.A, ref.A) and np.allclose(r.omega, ref.omega)


class TestCompanion:
    def test_half_identity(self):
        roots, stable = companion_roots(np.array([0.5 * np.eye(2)]))
        assert np.allclose(roots, [0.5, 0.5]) and stable

    def test_identity_is_unit_root(self):
        roots, stable = companion_roots(np.array([np.eye(2)]))
        assert np.allclose(np.abs(roots), 1.0) and not stable

    def test_layout(self):
        coefs = np.arange(12.0).reshape(3, 2, 2)
        C = companion_matrix(coefs)
        assert C.shape == (6, 6)
        assert np.array_equal(C[:2], np.hstack(list(coefs)))
        assert np.array_equal(C[2:, :4], np.eye(4)) and np.all(C[2:, 4:] == 0)

    @pytest.mark.parametrize("seed", range(10))
    def test_moduli_match_polynomial_oracle(self, seed):
        rng = np.random.default_rng(seed)
        coefs = random_stable_var(4, 1, rng, radius=0.8)
        roots, stable = companion_roots(coefs)
        oracle = np.sort(np.abs(var_polynomial_inverse_roots(coefs)))[::-1]
        assert stable
        assert np.allclose(np.abs(roots), oracle, rtol=0, atol=1e-8)

    def test_higher_order_sorted(self, rng):
        roots, stable = companion_roots(random_stable_var(3, 3, rng, radius=0.9))
        mod = np.abs(roots)
        assert len(roots) == 9 and stable
        assert abs(mod[0] - 0.9) < 1e-10
        assert np.all(np.diff(mod) <= 1e-12)


class TestSimulate:
    def test_shapes_and_seeding(self):
        a = simulate_var(A_TRUE[None], 50, rng=3)
        b = simulate_var(A_TRUE[None], 50, rng=3)
        assert a.shape == (50, 2) and np.array_equal(a, b)
        assert simulate_var(A_TRUE[None], 50, rng=3, size=4).shape == (4, 50, 2)

    def test_stationary_mean(self):
        mu = np.array([1.0, -0.5])
        Y = simulate_var(A_TRUE[None], 20_000, intercept=mu, rng=4)
        target = np.linalg.solve(np.eye(2) - A_TRUE, mu)
        assert np.allclose(Y.mean(axis=0), target, atol=0.05)


class TestLagSelect:
    def test_table_shape_and_optima(self, rng):
        Y = simulate_var(A_TRUE[None], 400, rng=rng)
        sel = lag_select(_frame(Y), 6)
        assert list(sel.lags) == list(range(7))
        assert sel.nobs == 394
        for crit in ("FPE", "AIC", "SC", "HQ"):
            col = sel.column(crit)
            assert sel.selected[crit] == int(np.flatnonzero(col == col.min())[0])
        assert np.isnan(sel.lr[0])

    def test_criteria_formulas(self, rng):
        Y = simulate_var(A_TRUE[None], 120, rng=rng)
        p_max, k = 3, 2
        sel = lag_select(_frame(Y), p_max)
        n = 120 - p_max
        for p in range(p_max + 1):
            Yt = Y[p_max:]
            Z = np.column_stack([np.ones(n)] + [Y[p_max - j:120 - j] for j in range(1, p + 1)])
            E = Yt - Z @ np.linalg.lstsq(Z, Yt, rcond=None)[0]
            S = E.T @ E / n
            logl = -0.5 * n * (k * (1 + np.log(2 * np.pi)) + np.log(np.linalg.det(S)))
            npar = k * (k * p + 1)
            m = k * p + 1
            assert abs(sel.logl[p] - logl) < 1e-8 * abs(logl)
            assert abs(sel.aic[p] - (-2 * logl + 2 * npar) / n) < 1e-10
            assert abs(sel.sc[p] - (-2 * logl + npar * np.log(n)) / n) < 1e-10
            assert abs(sel.fpe[p] - ((n + m) / (n - m)) ** k * np.linalg.det(S)) < 1e-10 * sel.fpe[p]

    def test_lr_sequential_rule(self, rng):
        Y = simulate_var(A_TRUE[None], 300, rng=rng)
        sel = lag_select(_frame(Y), 4)
        assert np.allclose(sel.lr_pvalue[1:], sps.chi2.sf(sel.lr[1:], 4))
        rejecting = [p for p in range(1, 5) if sel.lr_pvalue[p] < 0.05]
        assert sel.selected["LR"] == (max(rejecting) if rejecting else 0)

    def test_p_max_too_large(self, rng):
        with pytest.raises(DataError, match="too large"):
            lag_select(_frame(rng.normal(size=(30, 3))), 8)

    @pytest.mark.slow
    def test_white_noise_sc_picks_zero(self):
        rng = np.random.default_rng(8)
        hits = sum(lag_select(_frame(rng.normal(size=(500, 2))), 4).selected["SC"] == 0 for _ in range(100))
        assert hits >= 90


class TestLm:
    def test_output_and_df(self, rng):
        Y = simulate_var(A_TRUE[None], 200, rng=rng)
        res = lm_serial_test(var_estimate(_frame(Y), 1), 4)
        assert [r.lag for r in res] == [1, 2, 3, 4]
        assert all(r.df == 4 and r.error is None and 0 <= r.pvalue <= 1 for r in res)

    def test_matches_auxiliary_regression(self, rng):
        Y = simulate_var(A_TRUE[None], 150, rng=rng)
        m = var_estimate(_frame(Y), 1)
        U = m.resid
        n = U.shape[0]
        Ulag = np.vstack([np.zeros((2, 2)), U[:-2]])
        Z = np.column_stack([np.ones(n), Y[:-1], Ulag])
        E = U - Z @ np.linalg.lstsq(Z, U, rcond=None)[0]
        lm = n * (2 - np.trace(np.linalg.solve(U.T @ U / n, E.T @ E / n)))
        assert abs(lm_serial_test(m, 2)[1].statistic - lm) < 1e-8

    def test_published_lm_pvalues_follow_chi2_64(self):
        # an 8-equation system has k² = 64 restrictions per lag
        printed = {74.16596: 0.1806, 55.03953: 0.7801, 84.21320: 0.0460, 44.18706: 0.9721}
        for stat, p in printed.items():
            assert round(float(sps.chi2.sf(stat, 64)), 4) == p

    def test_per_lag_failure_recorded(self, rng):
        Y = simulate_var(A_TRUE[None], 12, rng=rng)
        res = lm_serial_test(var_estimate(_frame(Y), 1), 12)
        assert res[0].error is None
        assert res[-1].error is not None and np.isnan(res[-1].statistic)

    @pytest.mark.slow
    def test_size_and_misspecification(self):
        rng = np.random.default_rng(9)
        ok = sum(lm_serial_test(var_estimate(_frame(simulate_var(A_TRUE[None], 300, rng=rng)), 1), 1)[0].pvalue > 0.05
                 for _ in range(200))
        assert ok / 200 >= 0.90
        A2 = np.array([0.2 * np.eye(2), -0.5 * np.eye(2)])
        hits = sum(lm_serial_test(var_estimate(_frame(simulate_var(A2, 300, rng=rng)), 1), 2)[1].pvalue < 0.05
                   for _ in range(100))
        assert hits / 100 >= 0.90
