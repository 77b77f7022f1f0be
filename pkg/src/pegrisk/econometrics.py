"""Summary statistics and OLS with White (HC0) robust standard errors.

The coefficient covariance is the sandwich

    (X'X)^-1 X' diag(e^2) X (X'X)^-1

computed through the QR factorization of X; X'X is never inverted
explicitly. Quartiles use linear interpolation between order statistics
and the sample standard deviation uses the n-1 denominator, matching
standard statistical-package output. Significance stars use two-sided
normal critical values.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.linalg import solve_triangular

from .errors import EstimationError
from .features import PanelRow

STAR_THRESHOLDS = ((2.576, "***"), (1.960, "**"), (1.645, "*"))

# Regressor sets for the four panel regressions, keyed by column label.
REGRESSOR_SETS: dict[str, tuple[str, ...]] = {
    "I": ("sigma_btc_bps",),
    "II": ("sigma_usdt_bps",),
    "III": ("r_btc_bps",),
    "IV": ("sigma_btc_bps", "sigma_usdt_bps", "r_btc_bps"),
}


@dataclass(frozen=True)
class SummaryRow:
    """Distribution summary of one named series."""

    name: str
    count: int
    mean: float
    std: float
    min: float
    q25: float
    q50: float
    q75: float
    max: float


def summary_stats(name: str, values: Sequence[float] | np.ndarray) -> SummaryRow:
    arr = np.sort(np.asarray(values, dtype=float))  # canonical order: result is permutation-invariant
    if arr.size == 0:
        raise EstimationError(f"empty series {name!r}")
    q25, q50, q75 = (float(q) for q in np.quantile(arr, [0.25, 0.5, 0.75]))
    return SummaryRow(
        name=name,
        count=int(arr.size),
        mean=float(arr.mean()),
        std=float(arr.std(ddof=1)) if arr.size > 1 else float("nan"),
        min=float(arr.min()),
        q25=q25,
        q50=q50,
        q75=q75,
        max=float(arr.max()),
    )


def _stars(t: float) -> str:
    magnitude = abs(t)
    for threshold, mark in STAR_THRESHOLDS:
        if magnitude >= threshold:
            return mark
    return ""


@dataclass(frozen=True)
class RegressionResult:
    """OLS estimates with HC0 standard errors.

    ``names`` follows the column order of the design matrix (intercept
    first when present). t statistics are coefficient / stderr; a zero
    stderr yields +-inf for a nonzero coefficient and nan otherwise.
    """

    names: tuple[str, ...]
    coefficients: tuple[float, ...]
    hc0_stderr: tuple[float, ...]
    t_stats: tuple[float, ...]
    stars: tuple[str, ...]
    r_squared: float
    n: int


def ols_hc0(
    y: Sequence[float] | np.ndarray,
    X: Sequence[Sequence[float]] | np.ndarray,
    names: Sequence[str] | None = None,
) -> RegressionResult:
    """Least squares with the White heteroscedasticity-robust covariance.

    ``X`` must already contain the intercept column if one is wanted.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).reshape(-1)
    if X.ndim != 2:
        raise EstimationError("design matrix must be two-dimensional")
    n, k = X.shape
    if y.size != n:
        raise EstimationError(f"response length {y.size} does not match {n} design rows")
    if n <= k:
        raise EstimationError(f"need more observations ({n}) than coefficients ({k})")
    if np.linalg.matrix_rank(X) < k:
        raise EstimationError("singular design: regressors are collinear")
    if names is None:
        names = tuple(f"x{i}" for i in range(k))
    elif len(names) != k:
        raise EstimationError(f"{len(names)} names for {k} columns")

    q, r = np.linalg.qr(X)
    beta = solve_triangular(r, q.T @ y)
    residuals = y - X @ beta

    # sandwich: B' B with B = diag(e) X (X'X)^-1, via (R'R) B' = (diag(e) X)'
    scores = X * residuals[:, None]
    half = solve_triangular(r, scores.T, trans="T")
    bt = solve_triangular(r, half)
    cov = bt @ bt.T
    stderr = np.sqrt(np.diag(cov))

    with np.errstate(divide="ignore", invalid="ignore"):
        t_stats = beta / stderr

    ssr = float(residuals @ residuals)
    sst = float(((y - y.mean()) ** 2).sum())
    # a (numerically) constant response has no centered variance to explain;
    # R^2 is undefined there rather than a ratio of rounding noise
    if sst <= 1e-24 * float(y @ y):
        r_squared = float("nan")
    else:
        r_squared = 1.0 - ssr / sst

    return RegressionResult(
        names=tuple(names),
        coefficients=tuple(float(b) for b in beta),
        hc0_stderr=tuple(float(s) for s in stderr),
        t_stats=tuple(float(t) for t in t_stats),
        stars=tuple(_stars(float(t)) for t in t_stats),
        r_squared=r_squared,
        n=n,
    )


def run_panel_regressions(panel: Sequence[PanelRow]) -> dict[str, RegressionResult]:
    """Regress annualized default probability on the feature columns.

    Four designs: BTC volatility alone, USDT volatility alone, BTC returns
    alone, and all three together. Rows with an undefined return are
    dropped only from the designs that use returns.
    """
    results = {}
    for label, regressors in REGRESSOR_SETS.items():
        uses_returns = "r_btc_bps" in regressors
        rows = [row for row in panel if not uses_returns or row.r_btc_bps is not None]
        if not rows:
            raise EstimationError(f"no usable rows for regression {label}")
        y = [row.p_bps for row in rows]
        X = [[1.0] + [getattr(row, reg) for reg in regressors] for row in rows]
        results[label] = ols_hc0(y, X, names=("intercept",) + regressors)
    return results


def format_summary_table(rows: Iterable[SummaryRow]) -> str:
    """Render summary rows as aligned plain text."""
    header = ("", "count", "mean", "std", "min", "25%", "50%", "75%", "max")
    body = [
        (
            row.name,
            f"{row.count}",
            f"{row.mean:.4f}",
            f"{row.std:.4f}",
            f"{row.min:.4f}",
            f"{row.q25:.4f}",
            f"{row.q50:.4f}",
            f"{row.q75:.4f}",
            f"{row.max:.4f}",
        )
        for row in rows
    ]
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = []
    for line in [header, *body]:
        first, rest = line[0], line[1:]
        cells = [first.ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(rest, widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def summary_table_csv(rows: Iterable[SummaryRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("name", "count", "mean", "std", "min", "q25", "q50", "q75", "max"))
    for row in rows:
        writer.writerow(
            [row.name, row.count]
            + [repr(v) for v in (row.mean, row.std, row.min, row.q25, row.q50, row.q75, row.max)]
        )
    return buf.getvalue()


def _cell(value: float, stars: str) -> str:
    return f"{value:.4f}{stars}"


def format_regression_table(results: Mapping[str, RegressionResult]) -> str:
    """Render the regression columns side by side, stderrs in parentheses.

    Regressors appear in panel order with the intercept last, then the
    R-squared and observation-count rows.
    """
    labels = list(results)
    regressor_order: list[str] = []
    for result in results.values():
        for name in result.names:
            if name != "intercept" and name not in regressor_order:
                regressor_order.append(name)
    regressor_order.append("intercept")

    def column_cells(name: str) -> list[tuple[str, str]]:
        cells = []
        for label in labels:
            result = results[label]
            if name in result.names:
                i = result.names.index(name)
                cells.append(
                    (_cell(result.coefficients[i], result.stars[i]), f"({result.hc0_stderr[i]:.4f})")
                )
            else:
                cells.append(("", ""))
        return cells

    rows: list[tuple[str, ...]] = [("", *labels)]
    for name in regressor_order:
        cells = column_cells(name)
        rows.append((name, *(c[0] for c in cells)))
        rows.append(("", *(c[1] for c in cells)))
    rows.append(("r_squared", *(f"{results[l].r_squared:.2f}" for l in labels)))
    rows.append(("n_obs", *(f"{results[l].n}" for l in labels)))

    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [cell.rjust(w) for cell, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def regression_table_csv(results: Mapping[str, RegressionResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("column", "regressor", "coefficient", "hc0_stderr", "t_stat", "stars", "r_squared", "n_obs"))
    for label, result in results.items():
        for name, coef, se, t, stars in zip(
            result.names, result.coefficients, result.hc0_stderr, result.t_stats, result.stars
        ):
            writer.writerow([label, name, repr(coef), repr(se), repr(t), stars, repr(result.r_squared), result.n])
    return buf.getvalue()
