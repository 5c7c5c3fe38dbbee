"""Marginal, lagged-joint and cumulative probability estimators.

Conventions shared by the whole package: marginal estimates always use the
full T observations, lagged joints use the T - l aligned pairs, and in every
joint matrix the first index refers to the earlier observation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import OrdinalSeries, _readonly


def _check_lag(series: OrdinalSeries, lag: int) -> int:
    lag = int(lag)
    T = len(series)
    if not 1 <= lag <= T - 1:
        raise ValueError(f"lag must satisfy 1 <= lag <= T-1 = {T - 1}; got {lag}")
    return lag


def marginal_probabilities(series: OrdinalSeries) -> np.ndarray:
    """Relative frequency of each state, length n+1."""
    counts = np.bincount(series.codes, minlength=series.n + 1)
    return counts / len(series)


def joint_probabilities(series: OrdinalSeries, lag: int) -> np.ndarray:
    """(n+1)x(n+1) matrix of lag-l pair frequencies; entry (i, j) counts
    pairs with earlier value i and later value j."""
    lag = _check_lag(series, lag)
    c = series.codes
    n1 = series.n + 1
    earlier = c[:-lag]
    later = c[lag:]
    counts = np.zeros((n1, n1))
    np.add.at(counts, (earlier, later), 1.0)
    return counts / earlier.size


def c_marginal_probabilities(series: OrdinalSeries) -> np.ndarray:
    """Cumulative state frequencies for indices 0..n-1 (the last one is 1)."""
    return np.cumsum(marginal_probabilities(series))[: series.n]


def c_joint_probabilities(series: OrdinalSeries, lag: int) -> np.ndarray:
    """n x n matrix of lag-l cumulative pair frequencies; entry (i, j) counts
    pairs with earlier value <= i and later value <= j."""
    joint = joint_probabilities(series, lag)
    return np.cumsum(np.cumsum(joint, axis=0), axis=1)[: series.n, : series.n]


@dataclass(frozen=True, eq=False)
class ProbabilityProfile:
    """Estimated marginal probabilities and their cumulative version."""

    p_hat: np.ndarray
    f_hat: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p_hat", _readonly(np.asarray(self.p_hat, float)))
        object.__setattr__(self, "f_hat", _readonly(np.asarray(self.f_hat, float)))


@dataclass(frozen=True, eq=False)
class LaggedProbabilityProfile:
    """Estimated lag-l joint probabilities and their cumulative version."""

    lag: int
    p_joint: np.ndarray
    f_joint: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p_joint", _readonly(np.asarray(self.p_joint, float)))
        object.__setattr__(self, "f_joint", _readonly(np.asarray(self.f_joint, float)))


def probability_profile(series: OrdinalSeries) -> ProbabilityProfile:
    return ProbabilityProfile(
        p_hat=marginal_probabilities(series),
        f_hat=c_marginal_probabilities(series),
    )


def lagged_probability_profile(series: OrdinalSeries, lag: int) -> LaggedProbabilityProfile:
    return LaggedProbabilityProfile(
        lag=int(lag),
        p_joint=joint_probabilities(series, lag),
        f_joint=c_joint_probabilities(series, lag),
    )
