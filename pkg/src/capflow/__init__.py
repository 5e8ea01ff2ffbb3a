"""Econometrics of capital-flow volatility and financial stability.

Time-series containers and transforms (:mod:`capflow.core`), correlation
significance (:mod:`capflow.stats`), dynamic OLS applications
(:mod:`capflow.regress`), ADF unit-root tests (:mod:`capflow.unitroot`),
VAR tools (:mod:`capflow.varkit`) and depth/bonanza classifiers
(:mod:`capflow.macrofin`).
"""

__version__ = "0.1.0"

from .core import Dataset, Frequency, TimeIndex, TimeSeries, align, difference, hp_filter, lag, load_csv, log, write_csv
from .errors import CapflowError, ConfigError, DataError, LoadError, NotPositiveDefiniteError, NumericalError, RankDeficientError

__all__ = [
    "__version__",
    "CapflowError",
    "ConfigError",
    "DataError",
    "Dataset",
    "Frequency",
    "LoadError",
    "NotPositiveDefiniteError",
    "NumericalError",
    "RankDeficientError",
    "TimeIndex",
    "TimeSeries",
    "align",
    "difference",
    "hp_filter",
    "lag",
    "load_csv",
    "log",
    "write_csv",
]
