"""Regressors for the default-risk panel, all in basis points.

Daily OHLCV bars support two range-based intraday volatility estimators:

    range:      (high - low) / close * 1e4
    parkinson:  ln(high / low) / (2 * sqrt(ln 2)) * 1e4

Parkinson is the default (it estimates the daily return standard deviation
from the high/low range under driftless diffusion); the plain range is kept
for sensitivity checks. Returns are close-to-close and therefore undefined
on a series' first date.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from datetime import date
from typing import Iterable, Sequence, TextIO

from .errors import AlignmentError, DomainError, EstimationError
from .marketdata import BarSeries, fmt_float
from .pegmodel import DefaultProbPoint

PARKINSON_FACTOR = 2.0 * math.sqrt(math.log(2.0))

ESTIMATORS = ("parkinson", "range")

PANEL_HEADER = ("date", "p_annualized_bps", "sigma_btc_bps", "sigma_usdt_bps", "r_btc_bps")


def intraday_vol(bars: BarSeries, estimator: str = "parkinson") -> list[tuple[date, float]]:
    """Per-bar intraday volatility in basis points."""
    if estimator not in ESTIMATORS:
        raise DomainError(f"unknown estimator {estimator!r}; expected one of {ESTIMATORS}")
    out = []
    for bar in bars.bars:
        if estimator == "range":
            sigma = (bar.high - bar.low) / bar.close * 1e4
        else:
            sigma = math.log(bar.high / bar.low) / PARKINSON_FACTOR * 1e4
        out.append((bar.timestamp, sigma))
    return out


def daily_returns(bars: BarSeries) -> list[tuple[date, float]]:
    """Close-to-close returns in basis points, one per consecutive bar pair."""
    if len(bars) < 2:
        raise EstimationError(f"need at least 2 bars for returns, got {len(bars)}")
    return [
        (cur.timestamp, (cur.close / prev.close - 1.0) * 1e4)
        for prev, cur in zip(bars.bars, bars.bars[1:])
    ]


@dataclass(frozen=True)
class FeaturePoint:
    """Volatility and return regressors for one date.

    ``r_btc_bps`` is None on the first date of the return series.
    """

    date: date
    sigma_btc_bps: float
    sigma_usdt_bps: float
    r_btc_bps: float | None


@dataclass(frozen=True)
class PanelRow:
    """One joined row of the regression panel: probability plus features."""

    date: date
    p_bps: float
    sigma_btc_bps: float
    sigma_usdt_bps: float
    r_btc_bps: float | None


def feature_points(
    btc: BarSeries, usdt: BarSeries, estimator: str = "parkinson"
) -> list[FeaturePoint]:
    """Inner join of BTC volatility, USDT volatility, and BTC returns by date."""
    sigma_btc = dict(intraday_vol(btc, estimator))
    sigma_usdt = dict(intraday_vol(usdt, estimator))
    returns = dict(daily_returns(btc)) if len(btc) >= 2 else {}
    common = sorted(set(sigma_btc) & set(sigma_usdt))
    if not common:
        raise AlignmentError("no dates in common between the BTC and USDT series")
    return [
        FeaturePoint(
            date=day,
            sigma_btc_bps=sigma_btc[day],
            sigma_usdt_bps=sigma_usdt[day],
            r_btc_bps=returns.get(day),
        )
        for day in common
    ]


def build_feature_panel(
    prob: Sequence[DefaultProbPoint],
    btc: BarSeries,
    usdt: BarSeries,
    estimator: str = "parkinson",
) -> list[PanelRow]:
    """Join probability points with the feature series on date.

    Rows without a return (the first BTC date) carry ``r_btc_bps = None``
    and are dropped only by regressions that use returns, so n probability
    points yield n rows for volatility-only designs and n-1 when returns
    enter.
    """
    if not prob:
        raise AlignmentError("probability series is empty")
    features = {point.date: point for point in feature_points(btc, usdt, estimator)}
    rows = [
        PanelRow(
            date=point.date,
            p_bps=point.p_annualized_bps,
            sigma_btc_bps=features[point.date].sigma_btc_bps,
            sigma_usdt_bps=features[point.date].sigma_usdt_bps,
            r_btc_bps=features[point.date].r_btc_bps,
        )
        for point in prob
        if point.date in features
    ]
    if not rows:
        raise AlignmentError("no dates in common across the probability series and feature inputs")
    return rows


def write_panel_csv(rows: Iterable[PanelRow], stream: TextIO) -> None:
    """Write the joined panel; undefined returns become empty cells."""
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(PANEL_HEADER)
    for row in rows:
        writer.writerow(
            [
                row.date.isoformat(),
                fmt_float(row.p_bps),
                fmt_float(row.sigma_btc_bps),
                fmt_float(row.sigma_usdt_bps),
                "" if row.r_btc_bps is None else fmt_float(row.r_btc_bps),
            ]
        )
