"""Synthetic monthly panel shaped like the capital-flow study (2005-01 to 2015-12).

The real source data are not public; this panel exists so the CLI and the
tests have a realistic file to run end to end.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .core import Dataset, Frequency, TimeIndex, TimeSeries, load_csv
from .varkit.model import simulate_var

__all__ = ["VAR_NAMES", "synthetic_panel", "example_path", "load_example", "DEFAULT_SEED"]

VAR_NAMES = ["FNCPIB", "FNPIB", "DNF", "BBCC", "CROUSD", "CROCDF", "CFPC"]
DEFAULT_SEED = 20160101
EXAMPLE_FILE = "synthetic_monthly.csv"


def _var_system(k: int) -> tuple[np.ndarray, np.ndarray]:
    A = np.diag(np.linspace(0.55, 0.25, k))
    A[0, 3] = 0.08
    A[0, 6] = 0.10
    A[1, 0] = 0.15
    A[3, 0] = -0.05
    A[6, 2] = 0.07
    L = np.eye(k)
    L[1:, 0] = 0.3
    L[2, 1] = 0.2
    omega = L @ np.diag(np.linspace(0.35, 0.1, k)) @ L.T
    return A, omega


def synthetic_panel(seed: int = DEFAULT_SEED, n: int = 132, start: str = "2005-01") -> Dataset:
    rng = np.random.default_rng(seed)
    index = TimeIndex.from_label(start, Frequency.MONTHLY, n)
    k = len(VAR_NAMES)
    A, omega = _var_system(k)
    var_block = simulate_var(A[None], n, omega, intercept=np.full(k, 0.05), rng=rng)

    sav = np.empty(n)
    inv = np.empty(n)
    sav[0], inv[0] = 12.0, 6.5
    for t in range(1, n):
        sav[t] = 2.4 + 0.8 * sav[t - 1] + rng.normal(0, 0.6)
        inv[t] = 0.33 * sav[t] + 0.40 * inv[t - 1] + rng.normal(0, 0.4)

    dcp = 0.8 + np.cumsum(rng.normal(0.002, 0.02, n)).clip(-0.5, None)
    m2 = 5.0 + 0.01 * np.arange(n) + rng.normal(0, 0.3, n)
    ypc = np.empty(n)
    ypc[0] = 1.0
    for t in range(1, n):
        ypc[t] = -0.63 - 0.25 * dcp[t] + 0.25 * m2[t] + 0.36 * ypc[t - 1] + rng.normal(0, 0.1)

    ide = rng.normal(4.0, 1.0, n)
    ipor = -0.8 * ide + rng.normal(3.5, 0.6, n)
    dct = 0.3 * m2 + rng.normal(0, 0.4, n)
    ca = -6.0 - 0.5 * (ide - 4.0) + rng.normal(0, 2.0, n)
    tcn = 500.0 + np.cumsum(rng.normal(0.5, 3.0, n))

    columns = {name: var_block[:, j] for j, name in enumerate(VAR_NAMES)}
    columns.update({
        "IPIB": inv, "SPIB": sav, "Dcp": dcp, "M2PIB": m2, "YPC": ypc,
        "IDE": ide, "IPOR": ipor, "DCT": dct, "CAPIB": ca, "TCN": tcn,
    })
    return Dataset(tuple(TimeSeries(name, index, np.round(v, 6)) for name, v in columns.items()))


def example_path() -> Path:
    return Path(str(resources.files("capflow") / "data" / EXAMPLE_FILE))


def load_example() -> Dataset:
    return load_csv(example_path(), "date", Frequency.MONTHLY)
