"""Financial-depth tiers and capital-bonanza flags.

All ratios are in percent (6.2 means 6.2% of GDP).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .core import TimeSeries
from .errors import ConfigError, DataError

__all__ = [
    "Tier",
    "DepthProfile",
    "BonanzaFlag",
    "DEPTH_THRESHOLDS",
    "BONANZA_PRESETS",
    "classify_depth",
    "classify_indicator",
    "detect_bonanza",
    "bonanza_series",
]


class Tier(str, Enum):
    DEVELOPED = "developed"
    EMERGING = "emerging"
    TAKEOFF = "takeoff"
    STARTUP = "startup"

    @property
    def label_fr(self) -> str:
        return {
            "developed": "pays développés",
            "emerging": "pays émergents",
            "takeoff": "pays en décollage",
            "startup": "pays en démarrage",
        }[self.value]


# (above: strictly greater -> developed, at_least -> emerging, at_least -> takeoff)
DEPTH_THRESHOLDS = {
    "credit_to_gdp": (70.0, 60.0, 20.0),
    "liquid_liabilities_to_gdp": (55.0, 45.0, 25.0),
    "credit_to_deposits": (95.0, 80.0, 60.0),
}

BONANZA_PRESETS = {"closed": 2.0, "open": 6.6}


def classify_indicator(value: float, indicator: str) -> Tier:
    developed, emerging, takeoff = DEPTH_THRESHOLDS[indicator]
    if value is None or math.isnan(value):
        raise DataError(f"{indicator} is missing")
    if value < 0:
        raise DataError(f"{indicator} must be non-negative, got {value}")
    if value > developed:
        return Tier.DEVELOPED
    if value >= emerging:
        return Tier.EMERGING
    if value >= takeoff:
        return Tier.TAKEOFF
    return Tier.STARTUP


@dataclass(frozen=True)
class DepthProfile:
    credit_to_gdp: float
    liquid_liabilities_to_gdp: float
    credit_to_deposits: float | None
    tiers: dict[str, Tier]

    def to_dict(self) -> dict:
        return {
            "credit_to_gdp": self.credit_to_gdp,
            "liquid_liabilities_to_gdp": self.liquid_liabilities_to_gdp,
            "credit_to_deposits": self.credit_to_deposits,
            "tiers": {k: v.value for k, v in self.tiers.items()},
        }


def classify_depth(credit_gdp: float, liquid_gdp: float, credit_deposits: float | None = None) -> DepthProfile:
    """Tier each depth indicator. "Supérieur à" is strict, "Au moins" inclusive."""
    tiers = {
        "credit_to_gdp": classify_indicator(credit_gdp, "credit_to_gdp"),
        "liquid_liabilities_to_gdp": classify_indicator(liquid_gdp, "liquid_liabilities_to_gdp"),
    }
    if credit_deposits is not None:
        tiers["credit_to_deposits"] = classify_indicator(credit_deposits, "credit_to_deposits")
    return DepthProfile(credit_gdp, liquid_gdp, credit_deposits, tiers)


@dataclass(frozen=True)
class BonanzaFlag:
    period: str
    current_account_deficit_to_gdp: float
    threshold: float
    is_bonanza: bool

    def to_dict(self) -> dict:
        return {
            "period": self.period,
            "deficit_to_gdp": self.current_account_deficit_to_gdp,
            "threshold": self.threshold,
            "is_bonanza": self.is_bonanza,
        }


def _resolve_threshold(threshold, openness) -> float:
    if threshold is not None:
        threshold = float(threshold)
        if threshold < 0:
            raise ConfigError(f"bonanza threshold must be non-negative, got {threshold}")
        return threshold
    if openness is None:
        raise ConfigError("bonanza detection needs an explicit threshold or an openness preset (closed/open)")
    try:
        return BONANZA_PRESETS[str(openness).lower()]
    except KeyError:
        raise ConfigError(f"unknown openness preset {openness!r}; expected closed or open") from None


def detect_bonanza(current_account_gdp, threshold: float | None = None, openness: str | None = None,
                   sign_convention: str | None = None,
                   periods: Sequence[str] | None = None) -> list[BonanzaFlag]:
    """Flag periods whose current-account deficit exceeds ``threshold`` percent of GDP.

    ``sign_convention`` must be ``"deficit_negative"`` (a current-account
    balance, deficits below zero) or ``"deficit_positive"`` (already a deficit
    ratio). Missing values are never flagged.
    """
    if sign_convention not in ("deficit_negative", "deficit_positive"):
        raise ConfigError(
            "sign_convention is required: 'deficit_negative' for a current-account balance "
            "or 'deficit_positive' for a deficit ratio"
        )
    limit = _resolve_threshold(threshold, openness)
    if isinstance(current_account_gdp, TimeSeries):
        values = current_account_gdp.values
        labels = current_account_gdp.index.labels() if periods is None else list(periods)
    else:
        values = np.asarray(current_account_gdp, dtype=float)
        labels = [str(i) for i in range(len(values))] if periods is None else [str(p) for p in periods]
    if len(labels) != len(values):
        raise DataError(f"{len(labels)} period labels for {len(values)} values")
    deficits = -values if sign_convention == "deficit_negative" else values
    return [
        BonanzaFlag(label, float(d), limit, bool(not math.isnan(d) and d > limit))
        for label, d in zip(labels, deficits)
    ]


def bonanza_series(flags: Sequence[BonanzaFlag], like: TimeSeries, name: str = "bonanza") -> TimeSeries:
    """0/1 series on the index of ``like``, ready to join onto a dataset."""
    if len(flags) != len(like):
        raise DataError(f"{len(flags)} flags for a series of length {len(like)}")
    values = [math.nan if math.isnan(f.current_account_deficit_to_gdp) else float(f.is_bonanza) for f in flags]
    return TimeSeries(name, like.index, values)
