"""Asymptotic tests and confidence intervals for ordinal series.

The kappa serial-independence test uses the normal approximation that is
valid for the block distance. Tests/intervals for dispersion, asymmetry and
skewness use the delta method over the estimated state probabilities, with
either an i.i.d. covariance or a Bartlett-weighted long-run covariance of the
one-hot state indicators.
"""

from __future__ import annotations

from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .core import OrdinalSeries, StateDistance, build_state_distance
from .dependence import ordinal_cohens_kappa
from .features import divc_expected_distance
from .probabilities import c_marginal_probabilities, marginal_probabilities

_NORMAL = NormalDist()

FEATURES = ("dispersion", "asymmetry", "skewness")


def norm_cdf(x: float) -> float:
    return _NORMAL.cdf(x)


def norm_quantile(tau: float) -> float:
    return _NORMAL.inv_cdf(tau)


def _block_distance(series: OrdinalSeries, dist: StateDistance | None) -> StateDistance:
    if dist is None:
        return build_state_distance("block", series.state_space)
    if dist.kind != "block":
        raise ValueError(
            f"the kappa normal approximation is only available for the block "
            f"distance, not {dist.kind!r}"
        )
    return dist


def kappa_null_distribution(
    series: OrdinalSeries, dist: StateDistance | None = None
) -> tuple[float, float]:
    """Mean and variance of the block-distance kappa estimate under serial
    independence."""
    dist = _block_distance(series, dist)
    T = len(series)
    disp = divc_expected_distance(series, dist)
    if disp == 0:
        raise ValueError("kappa null distribution is undefined for a constant series")
    f = c_marginal_probabilities(series)
    s = float(np.sum((np.minimum.outer(f, f) - np.outer(f, f)) ** 2))
    return -1.0 / T, 4.0 * s / (T * disp**2)


def kappa_critical_values(
    series: OrdinalSeries, alpha: float, dist: StateDistance | None = None
) -> tuple[float, float]:
    """Two-sided rejection bounds for kappa at level alpha (lag-independent)."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1]; got {alpha}")
    mean, var = kappa_null_distribution(series, dist)
    half = norm_quantile(1.0 - alpha / 2.0) * np.sqrt(var)
    return mean - half, mean + half


@dataclass(frozen=True, eq=False)
class KappaDiagnostics:
    """Kappa values, p-values and the shared critical bounds for lags 1..max_lag."""

    max_lag: int
    kappas: np.ndarray
    p_values: np.ndarray
    critical_pair: tuple[float, float]
    alpha: float

    @property
    def lags(self) -> np.ndarray:
        return np.arange(1, self.max_lag + 1)


def kappa_diagnostics(
    series: OrdinalSeries,
    max_lag: int = 10,
    alpha: float = 0.05,
    dist: StateDistance | None = None,
) -> KappaDiagnostics:
    """Serial-dependence diagnostics analogous to an autocorrelation plot."""
    max_lag = int(max_lag)
    if not 1 <= max_lag <= len(series) - 1:
        raise ValueError(f"max_lag must satisfy 1 <= max_lag <= T-1; got {max_lag}")
    dist = _block_distance(series, dist)
    mean, var = kappa_null_distribution(series, dist)
    sd = float(np.sqrt(var))
    kappas = np.array([ordinal_cohens_kappa(series, dist, l) for l in range(1, max_lag + 1)])
    p_values = np.array([2.0 * (1.0 - norm_cdf(abs(k - mean) / sd)) for k in kappas])
    return KappaDiagnostics(
        max_lag=max_lag,
        kappas=kappas,
        p_values=p_values,
        critical_pair=kappa_critical_values(series, alpha, dist),
        alpha=alpha,
    )


def long_run_covariance(series: OrdinalSeries, bandwidth: int | None = None) -> np.ndarray:
    """Bartlett-weighted long-run covariance of the one-hot state indicators.

    Autocovariances use the 1/T divisor about the full-sample mean; the result
    is symmetrized and projected to the PSD cone (negative eigenvalues floored
    at zero). Default bandwidth is floor(T^(1/3)).
    """
    T = len(series)
    if T < 4:
        raise ValueError("long-run covariance needs T >= 4")
    if bandwidth is None:
        bandwidth = int(np.floor(T ** (1.0 / 3.0)))
    bandwidth = int(bandwidth)
    if bandwidth < 0:
        raise ValueError("bandwidth must be >= 0")
    v = np.eye(series.n + 1)[series.codes]  # T x (n+1) one-hot
    vc = v - v.mean(axis=0)
    sigma = vc.T @ vc / T
    for h in range(1, min(bandwidth, T - 1) + 1):
        w = 1.0 - h / (bandwidth + 1.0)
        gamma = vc[h:].T @ vc[:-h] / T
        sigma = sigma + w * (gamma + gamma.T)
    sigma = (sigma + sigma.T) / 2.0
    eigval, eigvec = np.linalg.eigh(sigma)
    return (eigvec * np.clip(eigval, 0.0, None)) @ eigvec.T


def _feature_value_and_gradient(
    p: np.ndarray, dist: StateDistance, feature: str
) -> tuple[float, np.ndarray]:
    d = dist.matrix
    if feature == "dispersion":
        return float(p @ d @ p), 2.0 * d @ p
    if feature == "asymmetry":
        dj = d[:, ::-1]  # D J
        return float(p @ dj @ p - p @ d @ p), (dj + dj.T) @ p - 2.0 * d @ p
    if feature == "skewness":
        c = d[:, -1] - d[:, 0]
        return float(c @ p), c
    raise ValueError(f"feature must be one of {FEATURES}; got {feature!r}")


def _delta_se(series: OrdinalSeries, dist: StateDistance, feature: str, temporal: bool,
              bandwidth: int | None) -> tuple[float, float]:
    p = marginal_probabilities(series)
    value, grad = _feature_value_and_gradient(p, dist, feature)
    T = len(series)
    if temporal:
        cov = long_run_covariance(series, bandwidth) / T
    else:
        cov = (np.diag(p) - np.outer(p, p)) / T
    return value, float(np.sqrt(grad @ cov @ grad))


def block_bootstrap_se(
    series: OrdinalSeries,
    dist: StateDistance,
    feature: str,
    n_resamples: int = 1000,
    seed: int = 0,
) -> float:
    """Circular block bootstrap standard error of a marginal feature.

    Block length is ceil(T^(1/3)); resampled series wrap around the end.
    """
    T = len(series)
    block = int(np.ceil(T ** (1.0 / 3.0)))
    n_blocks = int(np.ceil(T / block))
    rng = np.random.default_rng(seed)
    codes = series.codes
    doubled = np.concatenate([codes, codes])
    values = np.empty(n_resamples)
    offsets = np.arange(block)
    for r in range(n_resamples):
        starts = rng.integers(0, T, size=n_blocks)
        sample = doubled[(starts[:, None] + offsets[None, :]).ravel()[:T]]
        p = np.bincount(sample, minlength=series.n + 1) / T
        values[r], _ = _feature_value_and_gradient(p, dist, feature)
    return float(np.std(values, ddof=1))


@dataclass(frozen=True)
class TestResult:
    """Two-sided asymptotic test of a marginal feature against a null value."""

    statistic: float
    p_value: float
    critical_value: float
    alpha: float
    h0_value: float
    mode: str
    estimate: float
    se: float

    @property
    def reject(self) -> bool:
        return self.p_value < self.alpha


@dataclass(frozen=True)
class ConfidenceInterval:
    lower: float
    upper: float
    level: float


def _se_for(
    series: OrdinalSeries,
    dist: StateDistance,
    feature: str,
    temporal: bool,
    bandwidth: int | None,
    se_method: str,
    n_resamples: int,
    seed: int,
) -> tuple[float, float]:
    value, se = _delta_se(series, dist, feature, temporal, bandwidth)
    if se_method == "bootstrap":
        se = block_bootstrap_se(series, dist, feature, n_resamples, seed)
    elif se_method != "delta":
        raise ValueError(f"se_method must be 'delta' or 'bootstrap'; got {se_method!r}")
    if se == 0.0:
        raise ValueError(f"standard error of {feature} is zero (degenerate series)")
    return value, se


def test_marginal_feature(
    series: OrdinalSeries,
    dist: StateDistance,
    feature: str,
    h0: float,
    alpha: float = 0.05,
    temporal: bool = True,
    bandwidth: int | None = None,
    se_method: str = "delta",
    n_resamples: int = 1000,
    seed: int = 0,
) -> TestResult:
    """Two-sided test of H0: feature = h0 for dispersion, asymmetry or skewness.

    The estimate is a smooth function of the state probabilities, so its
    variance comes from the delta method: gradient' Cov gradient, with
    Cov = (diag(p) - p p') / T for i.i.d. data and the Bartlett long-run
    covariance of the one-hot indicators divided by T in temporal mode.
    ``se_method="bootstrap"`` replaces the delta-method standard error with a
    circular-block-bootstrap one (same point estimate and p-value formula).

    Raises ValueError when the standard error is zero, e.g. for a constant
    series, or for the asymmetry of an exactly symmetric sample.
    """
    if not 0.0 < alpha <= 1.0:
        raise ValueError(f"alpha must lie in (0, 1]; got {alpha}")
    value, se = _se_for(series, dist, feature, temporal, bandwidth, se_method, n_resamples, seed)
    statistic = (value - h0) / se
    return TestResult(
        statistic=statistic,
        p_value=2.0 * (1.0 - norm_cdf(abs(statistic))),
        critical_value=norm_quantile(1.0 - alpha / 2.0),
        alpha=alpha,
        h0_value=float(h0),
        mode="temporal" if temporal else "iid",
        estimate=value,
        se=se,
    )


def ci_marginal_feature(
    series: OrdinalSeries,
    dist: StateDistance,
    feature: str,
    level: float = 0.95,
    temporal: bool = True,
    bandwidth: int | None = None,
    se_method: str = "delta",
    n_resamples: int = 1000,
    seed: int = 0,
) -> ConfidenceInterval:
    """Symmetric asymptotic confidence interval for a marginal feature."""
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must lie in (0, 1); got {level}")
    value, se = _se_for(series, dist, feature, temporal, bandwidth, se_method, n_resamples, seed)
    half = norm_quantile((1.0 + level) / 2.0) * se
    return ConfidenceInterval(lower=value - half, upper=value + half, level=level)


def holm_adjust(p_values) -> np.ndarray:
    """Step-down Holm adjustment; preserves the input order."""
    p = np.asarray(p_values, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValueError("p_values must be a nonempty one-dimensional sequence")
    if np.any(p < 0) or np.any(p > 1):
        raise ValueError("p-values must lie in [0, 1]")
    m = p.size
    order = np.argsort(p, kind="stable")
    scaled = (m - np.arange(m)) * p[order]
    adjusted_sorted = np.minimum(np.maximum.accumulate(scaled), 1.0)
    out = np.empty(m)
    out[order] = adjusted_sorted
    return out
