"""Command-line driver: align, estimate, invert, regress, simulate.

Every parameter can come from a ``key=value`` config file (``--config``),
with command-line flags taking precedence. ``pipeline`` writes its
artifacts plus a run manifest that doubles as a config file, so

    pegrisk pipeline --config run_manifest.txt --out elsewhere

reproduces a run exactly. Errors exit nonzero with a single machine-
parsable line on stderr (``error stage=... type=... msg="..."``) and any
partially written artifacts are removed.
"""

from __future__ import annotations

import argparse
import dataclasses
import io
import sys
from dataclasses import dataclass
from pathlib import Path

from . import config as cfgmod
from . import econometrics, features, marketdata, pegmodel, simkit
from .errors import EstimationError, PegRiskError, SchemaError

FIGURE1_STUB = """\
{
  "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
  "description": "Spot and futures closes (top) and futures-spot basis (bottom)",
  "vconcat": [
    {
      "data": {"url": "aligned.csv"},
      "transform": [{"fold": ["s", "f"], "as": ["series", "price"]}],
      "mark": "line",
      "encoding": {
        "x": {"field": "date", "type": "temporal"},
        "y": {"field": "price", "type": "quantitative", "scale": {"zero": false}},
        "color": {"field": "series", "type": "nominal"}
      }
    },
    {
      "data": {"url": "aligned.csv"},
      "mark": "line",
      "encoding": {
        "x": {"field": "date", "type": "temporal"},
        "y": {"field": "basis_bps", "type": "quantitative"}
      }
    }
  ]
}
"""

FIGURE2_STUB = """\
{
  "$schema": "https://vega.github.io/schema/vega-lite/v5.json",
  "description": "Annualized implied default probability, basis points",
  "data": {"url": "prob.csv"},
  "mark": "line",
  "encoding": {
    "x": {"field": "date", "type": "temporal"},
    "y": {"field": "p_annualized_bps", "type": "quantitative"}
  }
}
"""

_TRUE = {"1", "true", "yes", "on"}
_FALSE = {"0", "false", "no", "off"}


class _Run:
    """Tracks the active stage and every file written, for cleanup on error."""

    def __init__(self) -> None:
        self.stage = "init"
        self.written: list[Path] = []

    def write_text(self, path: Path, text: str) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
        self.written.append(path)
        return path

    def discard_written(self) -> None:
        for path in self.written:
            try:
                path.unlink()
            except OSError:
                pass


class _Settings:
    """Flag > config > default resolution for one command invocation."""

    def __init__(self, args: argparse.Namespace) -> None:
        self.args = args
        self.cfg = cfgmod.load_config(args.config) if getattr(args, "config", None) else {}

    def get(self, key: str, default=None, cast=str):
        flag = getattr(self.args, key, None)
        if flag is not None:
            raw = flag
        elif key in self.cfg:
            raw = self.cfg[key]
        else:
            return default
        if cast is bool and isinstance(raw, str):
            lowered = raw.lower()
            if lowered in _TRUE:
                return True
            if lowered in _FALSE:
                return False
            raise SchemaError(f"expected a boolean for {key!r}, got {raw!r}")
        try:
            return cast(raw)
        except (TypeError, ValueError) as exc:
            raise SchemaError(f"bad value for {key!r}: {raw!r} ({exc})") from exc

    def require(self, key: str, cast=str):
        value = self.get(key, None, cast)
        if value is None:
            raise SchemaError(f"missing required input {key!r} (flag --{key.replace('_', '-')} or config)")
        return value

    def column_schema(self) -> dict[str, str]:
        schema = {}
        for role in marketdata.ROLES:
            value = self.get(f"col_{role}")
            if value is not None:
                schema[role] = value
        return schema


def _load_bars(settings: _Settings, path: str, instrument: str, venue_key: str) -> marketdata.BarSeries:
    venue = settings.get(venue_key, "unspecified")
    with open(path, newline="", encoding="utf-8") as stream:
        return marketdata.parse_bars(
            stream, schema=settings.column_schema(), instrument=instrument, venue=venue
        )


@dataclass
class _ModelParams:
    rho_request: str
    horizon: int
    recovery: float
    window: int
    estimator: str
    annualization: str
    trim: bool

    @classmethod
    def resolve(cls, settings: _Settings) -> "_ModelParams":
        return cls(
            rho_request=str(settings.get("rho", "0.73")),
            horizon=settings.get("horizon", 90, int),
            recovery=settings.get("recovery", 0.0, float),
            window=settings.get("window", 60, int),
            estimator=settings.get("estimator", "parkinson"),
            annualization=settings.get("annualization", "linear"),
            trim=settings.get("trim", True, bool),
        )


def _effective_rho(
    params: _ModelParams, deltas: list[float]
) -> tuple[float, pegmodel.Ar1Fit | None, pegmodel.RollingAr1 | None]:
    # estimation is informational when rho is fixed, so a degenerate series
    # (e.g. a perfectly pegged fixture) only fails in 'estimate' mode
    full_fit = None
    rolling = None
    fit_error: EstimationError | None = None
    try:
        full_fit = pegmodel.fit_ar1(deltas)
        if len(deltas) >= params.window:
            rolling = pegmodel.fit_ar1_rolling(deltas, params.window)
    except EstimationError as exc:
        fit_error = exc
    if params.rho_request == "estimate":
        if rolling is not None:
            return rolling.rho_mean, full_fit, rolling
        if full_fit is not None:
            return full_fit.rho, full_fit, rolling
        raise fit_error
    try:
        rho = float(params.rho_request)
    except ValueError:
        raise SchemaError(f"rho must be a number or 'estimate', got {params.rho_request!r}") from None
    return rho, full_fit, rolling


def _apply_trim(points: list[pegmodel.DefaultProbPoint]) -> list[pegmodel.DefaultProbPoint]:
    out = []
    for point in points:
        if point.p_horizon < 0.0:
            out.append(
                dataclasses.replace(point, p_horizon=0.0, p_annualized_bps=0.0, trimmed=True)
            )
        else:
            out.append(point)
    return out


def _summary_rows(
    aligned: marketdata.AlignedSeries, untrimmed: list[pegmodel.DefaultProbPoint]
) -> list[econometrics.SummaryRow]:
    return [
        econometrics.summary_stats("s", [o.s for o in aligned.observations]),
        econometrics.summary_stats("f", [o.f for o in aligned.observations]),
        econometrics.summary_stats("f_minus_s_bps", [o.basis_bps for o in aligned.observations]),
        econometrics.summary_stats("p_annualized_bps", [p.p_annualized_bps for p in untrimmed]),
    ]


def cmd_pipeline(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    spot_path = settings.require("spot")
    futures_path = settings.require("futures")
    btc_path = settings.require("btc")
    usdt_alt_path = settings.get("usdt_alt")
    outdir = Path(settings.get("out", "out"))

    run.stage = "parse"
    spot = _load_bars(settings, spot_path, "spot", "spot_venue")
    futures = _load_bars(settings, futures_path, "futures", "futures_venue")
    btc = _load_bars(settings, btc_path, "btc", "btc_venue")
    usdt = (
        _load_bars(settings, usdt_alt_path, "usdt_alt", "usdt_alt_venue")
        if usdt_alt_path
        else spot
    )

    run.stage = "align"
    aligned = marketdata.align_daily(spot, futures)

    run.stage = "fit"
    rho, full_fit, rolling = _effective_rho(params, aligned.deltas())

    run.stage = "prob"
    untrimmed = pegmodel.prob_series(
        aligned, rho, params.horizon, params.recovery, trim=False, method=params.annualization
    )
    published = _apply_trim(untrimmed) if params.trim else untrimmed

    run.stage = "features"
    panel = features.build_feature_panel(untrimmed, btc, usdt, params.estimator)

    run.stage = "regress"
    regressions = econometrics.run_panel_regressions(panel)

    run.stage = "stats"
    table3 = _summary_rows(aligned, untrimmed)

    run.stage = "write"
    outdir.mkdir(parents=True, exist_ok=True)
    buf = io.StringIO()
    marketdata.write_aligned_csv(aligned, buf)
    run.write_text(outdir / "aligned.csv", buf.getvalue())

    buf = io.StringIO()
    pegmodel.write_prob_csv(published, buf)
    run.write_text(outdir / "prob.csv", buf.getvalue())

    run.write_text(outdir / "table3.txt", econometrics.format_summary_table(table3))
    run.write_text(outdir / "table3.csv", econometrics.summary_table_csv(table3))
    run.write_text(outdir / "table4.txt", econometrics.format_regression_table(regressions))
    run.write_text(outdir / "table4.csv", econometrics.regression_table_csv(regressions))
    run.write_text(outdir / "figure1.vl.json", FIGURE1_STUB)
    run.write_text(outdir / "figure2.vl.json", FIGURE2_STUB)

    entries = {
        "spot": spot_path,
        "futures": futures_path,
        "btc": btc_path,
    }
    if usdt_alt_path:
        entries["usdt_alt"] = usdt_alt_path
    for role in marketdata.ROLES:
        value = settings.get(f"col_{role}")
        if value is not None:
            entries[f"col_{role}"] = value
    for venue_key in ("spot_venue", "futures_venue", "btc_venue", "usdt_alt_venue"):
        value = settings.get(venue_key)
        if value is not None:
            entries[venue_key] = value
    entries.update(
        {
            "rho": params.rho_request,
            "horizon": str(params.horizon),
            "recovery": marketdata.fmt_float(params.recovery),
            "window": str(params.window),
            "estimator": params.estimator,
            "annualization": params.annualization,
            "trim": "true" if params.trim else "false",
        }
    )
    comments = [
        "pegrisk run manifest; feed back via --config to reproduce",
        f"rho_effective = {marketdata.fmt_float(rho)}",
        (
            f"rho_full_sample = {marketdata.fmt_float(full_fit.rho)} (stderr {marketdata.fmt_float(full_fit.stderr)})"
            if full_fit is not None
            else "full-sample fit unavailable (degenerate deviation series)"
        ),
        (
            f"rho_rolling_mean = {marketdata.fmt_float(rolling.rho_mean)} over {len(rolling.fits)} windows"
            if rolling is not None
            else f"rolling fit unavailable (series shorter than window {params.window} or degenerate)"
        ),
        (
            f"join: matched {aligned.join_report.matched}, dropped "
            f"{aligned.join_report.dropped_spot} spot / {aligned.join_report.dropped_futures} futures"
        ),
        "artifacts: aligned.csv prob.csv table3.txt table3.csv table4.txt table4.csv "
        "figure1.vl.json figure2.vl.json",
    ]
    run.write_text(outdir / "run_manifest.txt", cfgmod.format_kv(entries, comments))

    print(f"wrote {len(run.written)} artifacts to {outdir}")
    print(
        f"aligned {aligned.join_report.matched} dates "
        f"(dropped {aligned.join_report.dropped_spot} spot, "
        f"{aligned.join_report.dropped_futures} futures); rho = {rho:.4f}"
    )
    mean_p = sum(p.p_annualized_bps for p in untrimmed) / len(untrimmed)
    print(f"mean annualized default probability: {mean_p:.2f} bps over {len(untrimmed)} dates")
    return 0


def cmd_align(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    spot_path = settings.require("spot")
    futures_path = settings.require("futures")
    outdir = Path(settings.get("out", "out"))

    run.stage = "parse"
    spot = _load_bars(settings, spot_path, "spot", "spot_venue")
    futures = _load_bars(settings, futures_path, "futures", "futures_venue")

    run.stage = "align"
    aligned = marketdata.align_daily(spot, futures)

    run.stage = "write"
    buf = io.StringIO()
    marketdata.write_aligned_csv(aligned, buf)
    outdir.mkdir(parents=True, exist_ok=True)
    run.write_text(outdir / "aligned.csv", buf.getvalue())
    print(
        f"aligned {aligned.join_report.matched} dates "
        f"(dropped {aligned.join_report.dropped_spot} spot, "
        f"{aligned.join_report.dropped_futures} futures)"
    )
    return 0


def cmd_fit(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    spot_path = settings.require("spot")

    run.stage = "parse"
    spot = _load_bars(settings, spot_path, "spot", "spot_venue")

    run.stage = "fit"
    deltas = [bar.close - 1.0 for bar in spot.bars]
    full_fit = pegmodel.fit_ar1(deltas)
    print(f"full-sample rho = {full_fit.rho:.6f} (stderr {full_fit.stderr:.6f}, n {full_fit.n})")
    if full_fit.is_stable:
        print(f"half-life = {pegmodel.half_life(full_fit.rho):.3f} days")
    else:
        print("fit is not stable (rho outside (0, 1)); no half-life")
    if len(deltas) >= params.window:
        rolling = pegmodel.fit_ar1_rolling(deltas, params.window)
        print(
            f"rolling mean rho = {rolling.rho_mean:.6f} "
            f"over {len(rolling.fits)} windows of {params.window} days"
        )
    else:
        print(f"series shorter than window {params.window}; rolling fit skipped")
    return 0


def _aligned_and_prob(
    settings: _Settings, params: _ModelParams, run: _Run
) -> tuple[marketdata.AlignedSeries, list[pegmodel.DefaultProbPoint], float]:
    spot_path = settings.require("spot")
    futures_path = settings.require("futures")

    run.stage = "parse"
    spot = _load_bars(settings, spot_path, "spot", "spot_venue")
    futures = _load_bars(settings, futures_path, "futures", "futures_venue")

    run.stage = "align"
    aligned = marketdata.align_daily(spot, futures)

    run.stage = "fit"
    rho, _, _ = _effective_rho(params, aligned.deltas())

    run.stage = "prob"
    untrimmed = pegmodel.prob_series(
        aligned, rho, params.horizon, params.recovery, trim=False, method=params.annualization
    )
    return aligned, untrimmed, rho


def cmd_prob(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    outdir = Path(settings.get("out", "out"))
    _, untrimmed, rho = _aligned_and_prob(settings, params, run)
    published = _apply_trim(untrimmed) if params.trim else untrimmed

    run.stage = "write"
    buf = io.StringIO()
    pegmodel.write_prob_csv(published, buf)
    outdir.mkdir(parents=True, exist_ok=True)
    run.write_text(outdir / "prob.csv", buf.getvalue())
    mean_p = sum(p.p_annualized_bps for p in published) / len(published)
    print(f"wrote {len(published)} points (rho {rho:.4f}); mean {mean_p:.2f} bps annualized")
    return 0


def _panel_from_args(
    settings: _Settings, params: _ModelParams, run: _Run
) -> list[features.PanelRow]:
    btc_path = settings.require("btc")
    usdt_alt_path = settings.get("usdt_alt")
    aligned, untrimmed, _ = _aligned_and_prob(settings, params, run)

    run.stage = "parse"
    btc = _load_bars(settings, btc_path, "btc", "btc_venue")
    if usdt_alt_path:
        usdt = _load_bars(settings, usdt_alt_path, "usdt_alt", "usdt_alt_venue")
    else:
        spot_path = settings.require("spot")
        usdt = _load_bars(settings, spot_path, "spot", "spot_venue")

    run.stage = "features"
    return features.build_feature_panel(untrimmed, btc, usdt, params.estimator)


def cmd_features(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    outdir = Path(settings.get("out", "out"))
    panel = _panel_from_args(settings, params, run)

    run.stage = "write"
    buf = io.StringIO()
    features.write_panel_csv(panel, buf)
    outdir.mkdir(parents=True, exist_ok=True)
    run.write_text(outdir / "features.csv", buf.getvalue())
    print(f"wrote {len(panel)} panel rows")
    return 0


def cmd_regress(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    out = settings.get("out")
    panel = _panel_from_args(settings, params, run)

    run.stage = "regress"
    regressions = econometrics.run_panel_regressions(panel)
    text = econometrics.format_regression_table(regressions)
    print(text, end="")
    if out:
        run.stage = "write"
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        run.write_text(outdir / "table4.txt", text)
        run.write_text(outdir / "table4.csv", econometrics.regression_table_csv(regressions))
    return 0


def cmd_stats(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    params = _ModelParams.resolve(settings)
    out = settings.get("out")
    aligned, untrimmed, _ = _aligned_and_prob(settings, params, run)

    run.stage = "stats"
    rows = _summary_rows(aligned, untrimmed)
    text = econometrics.format_summary_table(rows)
    print(text, end="")
    if out:
        run.stage = "write"
        outdir = Path(out)
        outdir.mkdir(parents=True, exist_ok=True)
        run.write_text(outdir / "table3.txt", text)
        run.write_text(outdir / "table3.csv", econometrics.summary_table_csv(rows))
    return 0


def cmd_simulate(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    config = simkit.SimConfig(
        rho=settings.get("rho", 0.73, float),
        innovation_sd=settings.get("innovation_sd", 5e-4, float),
        delta0=settings.get("delta0", 0.0, float),
        horizon_days=settings.get("horizon", 90, int),
        p_default=settings.get("p_default", 0.005, float),
        recovery=settings.get("recovery", 0.0, float),
        n_paths=settings.get("n_paths", 100_000, int),
        seed=settings.get("seed", 0, int),
    )

    run.stage = "simulate"
    recovered = simkit.roundtrip_invert(config)
    sim = recovered.sim
    rate = sim.default_count / config.n_paths
    print(f"mc_futures = {sim.mc_futures:.8f} +- {sim.mc_stderr:.2e}")
    print(f"defaults   = {sim.default_count} / {config.n_paths} (rate {rate:.6f})")
    gap = abs(recovered.p - config.p_default)
    gap_se = gap / recovered.stderr if recovered.stderr > 0 else float("inf") if gap > 0 else 0.0
    low = recovered.p - 1.96 * recovered.stderr
    high = recovered.p + 1.96 * recovered.stderr
    print(
        f"recovered_p = {recovered.p:.8f} +- {recovered.stderr:.2e} "
        f"(planted {config.p_default}, |diff| = {gap_se:.2f} se)"
    )
    print(f"95% CI     = [{low:.8f}, {high:.8f}]")
    return 0


def cmd_fixture(args: argparse.Namespace, run: _Run) -> int:
    run.stage = "config"
    settings = _Settings(args)
    config = simkit.FixtureConfig(
        n_days=settings.get("n_days", 410, int),
        rho=settings.get("rho", 0.73, float),
        innovation_sd=settings.get("innovation_sd", 5e-4, float),
        delta0=settings.get("delta0", 0.0, float),
        horizon_days=settings.get("horizon", 90, int),
        p_default=settings.get("p_default", 7.4e-4, float),
        p_amplitude=settings.get("p_amplitude", 0.0, float),
        p_period_days=settings.get("p_period_days", 120, int),
        recovery=settings.get("recovery", 0.0, float),
        futures_noise_sd=settings.get("futures_noise_sd", 2e-4, float),
        intraday_range_sd=settings.get("intraday_range_sd", 5e-4, float),
        seed=settings.get("seed", 0, int),
    )
    outdir = Path(settings.get("out", "out"))

    run.stage = "fixture"
    fixture = simkit.generate_fixture(config)

    run.stage = "write"
    outdir.mkdir(parents=True, exist_ok=True)
    for name, series in (("spot", fixture.spot), ("futures", fixture.futures), ("btc", fixture.btc)):
        buf = io.StringIO()
        marketdata.write_bars_csv(series, buf)
        run.write_text(outdir / f"{name}.csv", buf.getvalue())
    annualized = pegmodel.annualize(config.p_default, config.horizon_days)
    print(
        f"wrote spot.csv futures.csv btc.csv ({config.n_days} days, seed {config.seed}); "
        f"planted p = {config.p_default} per horizon ({annualized:.2f} bps annualized)"
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pegrisk",
        description="Market-implied peg-break probabilities from stablecoin spot and futures prices",
    )
    sub = parser.add_subparsers(dest="command")

    cfg = argparse.ArgumentParser(add_help=False)
    cfg.add_argument("--config", help="key=value config file; flags override it")

    market = argparse.ArgumentParser(add_help=False)
    market.add_argument("--spot", help="spot OHLCV CSV")
    market.add_argument("--futures", help="futures OHLCV CSV")
    market.add_argument("--spot-venue", dest="spot_venue")
    market.add_argument("--futures-venue", dest="futures_venue")

    btc = argparse.ArgumentParser(add_help=False)
    btc.add_argument("--btc", help="BTC OHLCV CSV")
    btc.add_argument("--usdt-alt", dest="usdt_alt", help="alternative USDT series for its volatility")
    btc.add_argument("--btc-venue", dest="btc_venue")
    btc.add_argument("--usdt-alt-venue", dest="usdt_alt_venue")

    model = argparse.ArgumentParser(add_help=False)
    model.add_argument("--rho", help="mean-reversion coefficient, or 'estimate'")
    model.add_argument("--horizon", type=int, help="futures horizon in days (default 90)")
    model.add_argument("--recovery", type=float, help="recovery rate in [0, 1) (default 0)")
    model.add_argument("--window", type=int, help="rolling estimation window (default 60)")
    model.add_argument("--estimator", choices=features.ESTIMATORS, help="intraday volatility estimator")
    model.add_argument("--annualization", choices=("linear", "compounded"))
    trim = model.add_mutually_exclusive_group()
    trim.add_argument("--trim", dest="trim", action="store_const", const="true")
    trim.add_argument("--no-trim", dest="trim", action="store_const", const="false")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--out", help="output directory")

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--innovation-sd", dest="innovation_sd", type=float)
    sim.add_argument("--delta0", type=float)
    sim.add_argument("--p-default", dest="p_default", type=float)
    sim.add_argument("--seed", type=int)

    p = sub.add_parser("pipeline", parents=[cfg, market, btc, model, out], help="run everything and write all artifacts")
    p.set_defaults(func=cmd_pipeline)
    p = sub.add_parser("align", parents=[cfg, market, out], help="align spot and futures into a daily panel")
    p.set_defaults(func=cmd_align)
    p = sub.add_parser("fit", parents=[cfg, market, model], help="estimate the mean-reversion coefficient")
    p.set_defaults(func=cmd_fit)
    p = sub.add_parser("prob", parents=[cfg, market, model, out], help="write the default-probability series")
    p.set_defaults(func=cmd_prob)
    p = sub.add_parser("features", parents=[cfg, market, btc, model, out], help="write the regression panel")
    p.set_defaults(func=cmd_features)
    p = sub.add_parser("regress", parents=[cfg, market, btc, model, out], help="run the panel regressions")
    p.set_defaults(func=cmd_regress)
    p = sub.add_parser("stats", parents=[cfg, market, model, out], help="summary statistics of the panel")
    p.set_defaults(func=cmd_stats)
    p = sub.add_parser("simulate", parents=[cfg, model, sim], help="Monte Carlo check of the pricing identity")
    p.add_argument("--n-paths", dest="n_paths", type=int)
    p.set_defaults(func=cmd_simulate)
    p = sub.add_parser("fixture", parents=[cfg, model, sim, out], help="generate a synthetic dataset")
    p.add_argument("--n-days", dest="n_days", type=int)
    p.add_argument("--p-amplitude", dest="p_amplitude", type=float)
    p.add_argument("--p-period-days", dest="p_period_days", type=int)
    p.add_argument("--futures-noise-sd", dest="futures_noise_sd", type=float)
    p.add_argument("--intraday-range-sd", dest="intraday_range_sd", type=float)
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "func"):
        parser.print_help()
        return 2
    run = _Run()
    try:
        return args.func(args, run)
    except (PegRiskError, OSError) as exc:
        run.discard_written()
        message = " ".join(str(exc).split())
        print(
            f'error stage={run.stage} type={type(exc).__name__} msg="{message}"',
            file=sys.stderr,
        )
        return 1


if __name__ == "__main__":
    sys.exit(main())
