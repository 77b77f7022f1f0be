"""Monte Carlo engine for the jump-to-default peg model, plus fixture data.

Each path evolves the peg deviation one day at a time with i.i.d. Gaussian
innovations; an independent draw decides whether the peg survives to
contract expiry. Surviving paths terminate at 1 + deviation, broken ones
at the recovery value. The sample mean of terminal prices estimates the
futures price, which can be inverted back to the planted default
probability — an end-to-end check of the pricing identity that never
touches the closed form.

Everything is driven by one seeded generator with a fixed draw order, so a
given config always produces bit-identical output. Innovations are drawn
for every path regardless of its default flag to keep the draw count
invariant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, timedelta

import numpy as np

from .errors import DomainError
from .marketdata import Bar, BarSeries
from .pegmodel import implied_default_prob, theoretical_futures


@dataclass(frozen=True)
class SimConfig:
    """Parameters of one Monte Carlo run."""

    rho: float = 0.73
    innovation_sd: float = 5e-4
    delta0: float = 0.0
    horizon_days: int = 90
    p_default: float = 0.0
    recovery: float = 0.0
    n_paths: int = 100_000
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.rho < 1.0:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if self.innovation_sd < 0.0:
            raise DomainError(f"innovation_sd must be non-negative, got {self.innovation_sd}")
        if self.horizon_days < 1:
            raise DomainError(f"horizon_days must be at least 1, got {self.horizon_days}")
        if not 0.0 <= self.p_default <= 1.0:
            raise DomainError(f"p_default must lie in [0, 1], got {self.p_default}")
        if not 0.0 <= self.recovery <= 1.0:
            raise DomainError(f"recovery must lie in [0, 1], got {self.recovery}")
        if self.n_paths < 1:
            raise DomainError(f"n_paths must be at least 1, got {self.n_paths}")


@dataclass(frozen=True)
class SimResult:
    """Terminal sample and its first two moments."""

    terminal_spots: np.ndarray
    mc_futures: float
    mc_stderr: float
    default_count: int


def simulate_paths(config: SimConfig) -> SimResult:
    """Simulate terminal spot prices under the jump-to-default dynamics."""
    rng = np.random.default_rng(config.seed)
    n = config.n_paths
    defaulted = rng.random(n) < config.p_default
    deviation = np.full(n, config.delta0, dtype=float)
    for _ in range(config.horizon_days):
        deviation = config.rho * deviation + rng.normal(0.0, config.innovation_sd, n)
    terminal = np.where(defaulted, config.recovery, 1.0 + deviation)
    mc_futures = float(np.mean(terminal))
    mc_stderr = float(np.std(terminal, ddof=1) / math.sqrt(n)) if n > 1 else 0.0
    return SimResult(
        terminal_spots=terminal,
        mc_futures=mc_futures,
        mc_stderr=mc_stderr,
        default_count=int(np.count_nonzero(defaulted)),
    )


@dataclass(frozen=True)
class RecoveredProb:
    """Default probability recovered from a Monte Carlo futures price.

    ``stderr`` propagates the Monte Carlo standard error through the
    inversion (the derivative in the futures price has magnitude
    1 / (1 + rho**h * delta0 - recovery)).
    """

    p: float
    stderr: float
    sim: SimResult


def roundtrip_invert(config: SimConfig) -> RecoveredProb:
    """Invert the simulated futures price back to a default probability."""
    sim = simulate_paths(config)
    s = 1.0 + config.delta0
    p = implied_default_prob(s, sim.mc_futures, config.rho, config.horizon_days, config.recovery)
    sensitivity = 1.0 + config.rho**config.horizon_days * config.delta0 - config.recovery
    return RecoveredProb(p=p, stderr=sim.mc_stderr / sensitivity, sim=sim)


def simulate_ar1_series(
    rho: float,
    innovation_sd: float,
    n: int,
    delta0: float = 0.0,
    seed: int = 0,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """One daily mean-reverting deviation path, for fixtures and estimator checks."""
    if not 0.0 <= rho < 1.0:
        raise DomainError(f"rho must lie in [0, 1), got {rho}")
    if innovation_sd < 0.0:
        raise DomainError(f"innovation_sd must be non-negative, got {innovation_sd}")
    if n < 1:
        raise DomainError(f"series length must be at least 1, got {n}")
    if rng is None:
        rng = np.random.default_rng(seed)
    innovations = rng.normal(0.0, innovation_sd, n)
    out = np.empty(n, dtype=float)
    prev = delta0
    for t in range(n):
        prev = rho * prev + innovations[t]
        out[t] = prev
    return out


@dataclass(frozen=True)
class FixtureConfig:
    """Synthetic-market settings for :func:`generate_fixture`.

    The planted per-horizon default probability follows a slow sinusoid
    around ``p_default`` (amplitude 0 plants a constant). ``futures_noise_sd``
    adds market noise to the futures close on top of the model price.
    Range and volume settings only shape the synthesized OHLC fields.
    """

    n_days: int = 410
    start: date = date(2020, 2, 28)
    rho: float = 0.73
    innovation_sd: float = 5e-4
    delta0: float = 0.0
    horizon_days: int = 90
    p_default: float = 7.4e-4
    p_amplitude: float = 0.0
    p_period_days: int = 120
    recovery: float = 0.0
    futures_noise_sd: float = 2e-4
    intraday_range_sd: float = 5e-4
    btc_start: float = 20_000.0
    btc_daily_vol: float = 0.04
    btc_range_sd: float = 0.02
    volume_scale: float = 5e6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_days < 30:
            raise DomainError(f"n_days must be at least 30, got {self.n_days}")
        if not 0.0 <= self.rho < 1.0:
            raise DomainError(f"rho must lie in [0, 1), got {self.rho}")
        if not 0.0 <= self.p_default <= 1.0:
            raise DomainError(f"p_default must lie in [0, 1], got {self.p_default}")
        if not 0.0 <= self.recovery < 1.0:
            raise DomainError(f"recovery must lie in [0, 1), got {self.recovery}")
        if self.p_period_days < 1:
            raise DomainError(f"p_period_days must be at least 1, got {self.p_period_days}")
        for name in ("innovation_sd", "futures_noise_sd", "intraday_range_sd", "btc_range_sd"):
            if getattr(self, name) < 0.0:
                raise DomainError(f"{name} must be non-negative, got {getattr(self, name)}")


@dataclass(frozen=True)
class FixtureSet:
    """Paired synthetic series: stablecoin spot and futures, plus BTC."""

    spot: BarSeries
    futures: BarSeries
    btc: BarSeries
    planted_p: tuple[float, ...] = field(repr=False, default=())


def _bars_from_closes(
    closes: np.ndarray,
    days: list[date],
    rng: np.random.Generator,
    range_sd: float,
    volume_scale: float,
) -> list[Bar]:
    n = closes.size
    hi_off = np.abs(rng.normal(0.0, range_sd, n))
    lo_off = np.minimum(np.abs(rng.normal(0.0, range_sd, n)), 0.5)
    volumes = volume_scale * rng.lognormal(0.0, 0.5, n)
    bars = []
    prev_close = closes[0]
    for i in range(n):
        close = float(closes[i])
        open_ = float(prev_close)
        high = max(open_, close) * (1.0 + float(hi_off[i]))
        low = min(open_, close) * (1.0 - float(lo_off[i]))
        bars.append(
            Bar(
                timestamp=days[i],
                open=open_,
                high=high,
                low=low,
                close=close,
                volume=float(volumes[i]),
            )
        )
        prev_close = close
    return bars


def planted_prob_path(config: FixtureConfig) -> np.ndarray:
    """Per-day planted default probabilities (deterministic in the config)."""
    t = np.arange(config.n_days, dtype=float)
    path = config.p_default * (
        1.0 + config.p_amplitude * np.sin(2.0 * math.pi * t / config.p_period_days)
    )
    return np.clip(path, 0.0, 0.999)


def generate_fixture(config: FixtureConfig) -> FixtureSet:
    """Generate paired spot/futures bar series, plus a BTC series.

    Spot closes are 1 + an AR(1) deviation path; futures closes price the
    planted default probability through the survivor/recovery mixture and
    then receive additive market noise. The BTC series is an independent
    geometric random walk so the feature regressions have a realistic
    right-hand side. Deterministic: one seed, one fixed draw order.
    """
    rng = np.random.default_rng(config.seed)
    days = [config.start + timedelta(days=i) for i in range(config.n_days)]

    deviations = simulate_ar1_series(
        config.rho, config.innovation_sd, config.n_days, config.delta0, rng=rng
    )
    spot_closes = 1.0 + deviations

    p_path = planted_prob_path(config)
    futures_noise = rng.normal(0.0, config.futures_noise_sd, config.n_days)
    futures_closes = np.array(
        [
            theoretical_futures(
                float(deviations[i]), config.rho, config.horizon_days, float(p_path[i]), config.recovery
            )
            for i in range(config.n_days)
        ]
    )
    futures_closes = np.maximum(futures_closes + futures_noise, 1e-6)

    spot_bars = _bars_from_closes(spot_closes, days, rng, config.intraday_range_sd, config.volume_scale)
    futures_bars = _bars_from_closes(
        futures_closes, days, rng, config.intraday_range_sd, config.volume_scale
    )

    btc_steps = rng.normal(0.0, config.btc_daily_vol, config.n_days)
    btc_closes = config.btc_start * np.exp(np.cumsum(btc_steps))
    btc_bars = _bars_from_closes(btc_closes, days, rng, config.btc_range_sd, config.volume_scale / 100.0)

    return FixtureSet(
        spot=BarSeries(instrument="USDT_USD", venue="synthetic", bars=tuple(spot_bars)),
        futures=BarSeries(instrument="USDT_USD_FUT", venue="synthetic", bars=tuple(futures_bars)),
        btc=BarSeries(instrument="BTC_USDT", venue="synthetic", bars=tuple(btc_bars)),
        planted_p=tuple(float(p) for p in p_path),
    )
