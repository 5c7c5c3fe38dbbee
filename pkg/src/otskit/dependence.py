"""Serial dependence measures: lagged distances, ordinal Cohen's kappa,
cumulative-binarization correlations and the ordinal/numeric cross measures."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import ClampWarning, DegenerateStateError, NumericSeries, OrdinalSeries, StateDistance
from .features import _check_pair, divc_expected_distance
from .probabilities import c_joint_probabilities, c_marginal_probabilities

INDEX_MODES = ("definitional", "estimation")


def cumulative_binarization(series: OrdinalSeries) -> np.ndarray:
    """T x n binary matrix with entry (t, i) = 1 iff the code at t is <= i."""
    levels = np.arange(series.n)
    return (series.codes[:, None] <= levels[None, :]).astype(float)


def lagged_expected_distance(series: OrdinalSeries, dist: StateDistance, lag: int) -> float:
    """Average distance between observations `lag` steps apart (0 at lag 0)."""
    _check_pair(series, dist)
    lag = int(lag)
    T = len(series)
    if not 0 <= lag <= T - 1:
        raise ValueError(f"lag must satisfy 0 <= lag <= T-1 = {T - 1}; got {lag}")
    if lag == 0:
        return 0.0
    c = series.codes
    return float(dist.matrix[c[lag:], c[:-lag]].mean())


def ordinal_cohens_kappa(series: OrdinalSeries, dist: StateDistance, lag: int) -> float:
    """Relative drop of dispersion caused by lag-l dependence (1 at lag 0)."""
    disp = divc_expected_distance(series, dist)
    if disp == 0:
        raise ValueError("kappa is undefined for a constant series (zero dispersion)")
    return (disp - lagged_expected_distance(series, dist, lag)) / disp


def _checked_f(series: OrdinalSeries) -> np.ndarray:
    f = c_marginal_probabilities(series)
    for i, fi in enumerate(f):
        if fi <= 0.0 or fi >= 1.0:
            raise DegenerateStateError(i, float(fi))
    return f


def _clamp(values: np.ndarray, clamp: bool) -> np.ndarray:
    if not clamp:
        return values
    if np.any(np.abs(values) > 1.0):
        warnings.warn(
            "plug-in correlation outside [-1, 1] was clamped (small-sample artifact)",
            ClampWarning,
            stacklevel=3,
        )
        values = np.clip(values, -1.0, 1.0)
    return values


def cumulative_correlations(series: OrdinalSeries, lag: int, clamp: bool = True) -> np.ndarray:
    """n x n matrix of lag-l correlations between cumulative-binarization levels.

    Marginals use all T observations while the joint uses the T - l pairs, so
    entries can slightly exceed 1 in magnitude; they are clamped (with a
    warning) unless ``clamp=False``.
    """
    f = _checked_f(series)
    fj = c_joint_probabilities(series, lag)
    sd = np.sqrt(f * (1.0 - f))
    psi = (fj - np.outer(f, f)) / np.outer(sd, sd)
    return _clamp(psi, clamp)


def total_c_cor(series: OrdinalSeries, lag: int, features: bool = False):
    """Mean squared cumulative correlation at lag l (or the matrix itself)."""
    psi = cumulative_correlations(series, lag)
    if features:
        return psi
    return float(np.mean(psi**2))


def _as_values(z, T: int) -> np.ndarray:
    values = z.values if isinstance(z, NumericSeries) else np.asarray(z, dtype=float)
    if values.shape != (T,):
        raise ValueError(f"numeric series must have the same length T={T} as the ordinal one")
    return values


def _window(series: OrdinalSeries, z, lag: int) -> tuple[np.ndarray, np.ndarray]:
    T = len(series)
    lag = int(lag)
    if not 0 <= lag <= T - 1:
        raise ValueError(f"lag must satisfy 0 <= lag <= T-1 = {T - 1}; got {lag}")
    values = _as_values(z, T)
    y = cumulative_binarization(series)
    if lag == 0:
        return y, values
    return y[lag:], values[:-lag]


def _window_cov(yw: np.ndarray, xw: np.ndarray) -> np.ndarray:
    """Covariance of each binarization column with xw, divisor = window length."""
    yc = yw - yw.mean(axis=0)
    xc = xw - xw.mean(axis=0)
    return yc.T @ xc / yw.shape[0]


def mixed_linear_correlations(series: OrdinalSeries, z, lag: int, clamp: bool = True) -> np.ndarray:
    """Linear correlation of each binarization level with the numeric series at lag l."""
    f = _checked_f(series)
    values = _as_values(z, len(series))
    var = float(np.mean((values - values.mean()) ** 2))
    if var == 0:
        raise ValueError("numeric series is constant (zero variance)")
    yw, zw = _window(series, values, lag)
    cov = _window_cov(yw, zw)
    psi = cov / np.sqrt(f * (1.0 - f) * var)
    return _clamp(psi, clamp)


def empirical_quantile(values: np.ndarray, rho: float) -> float:
    """Right-continuous inverse of the empirical CDF: order statistic ceil(rho*T)."""
    values = np.asarray(values, dtype=float)
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie strictly inside (0, 1); got {rho}")
    k = int(np.ceil(rho * values.size))
    return float(np.sort(values)[k - 1])


def mixed_quantile_correlations(
    series: OrdinalSeries, z, lag: int, rho: float, clamp: bool = True
) -> np.ndarray:
    """Correlation of each binarization level with I(Z lagged <= empirical rho-quantile).

    The denominator uses the nominal rho*(1-rho), not the indicator's sample
    frequency.
    """
    f = _checked_f(series)
    values = _as_values(z, len(series))
    threshold = empirical_quantile(values, rho)
    yw, zw = _window(series, values, lag)
    cov = _window_cov(yw, (zw <= threshold).astype(float))
    psi = cov / np.sqrt(f * (1.0 - f) * rho * (1.0 - rho))
    return _clamp(psi, clamp)


def _total(sq: np.ndarray, index_mode: str) -> float:
    # sq holds the squared (clamped) correlations for indices 0..n-1
    if index_mode not in INDEX_MODES:
        raise ValueError(f"index_mode must be one of {INDEX_MODES}; got {index_mode!r}")
    if index_mode == "definitional":
        return float(np.mean(sq))
    if sq.size < 2:
        raise ValueError("estimation index mode requires at least two binarization levels")
    return float(np.mean(sq[1:]))


def total_mixed_c_cor(
    series: OrdinalSeries,
    z,
    lag: int,
    features: bool = False,
    index_mode: str = "definitional",
):
    """Mean squared linear cross-correlation at lag l (or the vector itself)."""
    psi = mixed_linear_correlations(series, z, lag)
    if features:
        return psi
    return _total(psi**2, index_mode)


def total_mixed_c_qcor(
    series: OrdinalSeries,
    z,
    lag: int,
    nodes: int = 100,
    index_mode: str = "definitional",
) -> float:
    """Quantile-integrated squared cross-correlation at lag l.

    The integral over the probability level is approximated by the midpoint
    rule on `nodes` points, which avoids the undefined endpoints 0 and 1.
    """
    if nodes < 1:
        raise ValueError("nodes must be >= 1")
    f = _checked_f(series)
    values = _as_values(z, len(series))
    rhos = (np.arange(nodes) + 0.5) / nodes
    thresholds = np.sort(values)[np.ceil(rhos * values.size).astype(int) - 1]
    yw, zw = _window(series, values, lag)
    indicators = (zw[:, None] <= thresholds[None, :]).astype(float)
    cov = _window_cov(yw, indicators)  # n x nodes
    psi = cov / np.outer(np.sqrt(f * (1.0 - f)), np.sqrt(rhos * (1.0 - rhos)))
    sq = np.clip(psi, -1.0, 1.0) ** 2
    return _total(sq.mean(axis=1), index_mode)


@dataclass(frozen=True, eq=False)
class DependenceSummary:
    """Lag-l dependence measures for one series (cross measures need a companion z)."""

    lag: int
    kappa: float
    psi_matrix: np.ndarray
    tcc: float
    tmclc: float | None = None
    tmcqc: float | None = None
    clamped: bool = False


def dependence_summary(
    series: OrdinalSeries,
    dist: StateDistance,
    lag: int,
    z=None,
    quantile_nodes: int = 100,
) -> DependenceSummary:
    """Bundle kappa, the cumulative correlation matrix, TCC and, when a numeric
    companion series is supplied, TMCLC and TMCQC."""
    raw = cumulative_correlations(series, lag, clamp=False)
    clamped = bool(np.any(np.abs(raw) > 1.0))
    psi = np.clip(raw, -1.0, 1.0)
    tmclc = tmcqc = None
    if z is not None:
        raw_lin = mixed_linear_correlations(series, z, lag, clamp=False)
        clamped = clamped or bool(np.any(np.abs(raw_lin) > 1.0))
        tmclc = float(np.mean(np.clip(raw_lin, -1.0, 1.0) ** 2))
        tmcqc = total_mixed_c_qcor(series, z, lag, nodes=quantile_nodes)
    return DependenceSummary(
        lag=int(lag),
        kappa=ordinal_cohens_kappa(series, dist, lag),
        psi_matrix=psi,
        tcc=float(np.mean(psi**2)),
        tmclc=tmclc,
        tmcqc=tmcqc,
        clamped=clamped,
    )
