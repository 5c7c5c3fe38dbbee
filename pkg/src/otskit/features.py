"""Distance-based marginal features: locations, dispersions, asymmetry, skewness."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import AssumptionWarning, OrdinalSeries, StateDistance
from .probabilities import marginal_probabilities


def _check_pair(series: OrdinalSeries, dist: StateDistance) -> None:
    if dist.n != series.n:
        raise ValueError(
            f"distance is over {dist.n + 1} states but series has {series.n + 1}"
        )


def _warn_missing(dist: StateDistance, flag: str) -> None:
    if not getattr(dist, flag):
        warnings.warn(
            f"distance kind {dist.kind!r} does not satisfy {flag}; "
            "the feature is still computed but its usual range no longer applies",
            AssumptionWarning,
            stacklevel=3,
        )


def _normalize(value: float, dist: StateDistance, normalized: bool) -> float:
    if not normalized:
        return value
    _warn_missing(dist, "maximization")
    if dist.d0n == 0:
        raise ValueError("cannot normalize: distance between extreme states is zero")
    return value / dist.d0n


def expected_distance_to_state(series: OrdinalSeries, dist: StateDistance, i: int) -> float:
    """Average distance from the observations to the fixed state s_i."""
    _check_pair(series, dist)
    i = int(i)
    if not 0 <= i <= series.n:
        raise ValueError(f"state index must lie in [0, {series.n}]; got {i}")
    return float(dist.matrix[series.codes, i].mean())


def divc_expected_distance(series: OrdinalSeries, dist: StateDistance) -> float:
    """Expected distance between two independent copies of the marginal law."""
    _check_pair(series, dist)
    p = marginal_probabilities(series)
    return float(p @ dist.matrix @ p)


def reflected_expected_distance(series: OrdinalSeries, dist: StateDistance) -> float:
    """Expected distance between the series and an independent reflected copy."""
    _check_pair(series, dist)
    p = marginal_probabilities(series)
    return float(p @ dist.matrix @ p[::-1])


def ordinal_location_1(series: OrdinalSeries, dist: StateDistance) -> int:
    """State index minimizing the expected distance to the series (ties -> lowest)."""
    _check_pair(series, dist)
    p = marginal_probabilities(series)
    return int(np.argmin(dist.matrix @ p))


def ordinal_location_2(series: OrdinalSeries, dist: StateDistance) -> int:
    """State index whose distance to s0 best matches the expected distance to s0."""
    _check_pair(series, dist)
    target = expected_distance_to_state(series, dist, 0)
    return int(np.argmin(np.abs(target - dist.matrix[:, 0])))


def ordinal_dispersion_1(series: OrdinalSeries, dist: StateDistance) -> float:
    """Expected distance to the standard location."""
    return expected_distance_to_state(series, dist, ordinal_location_1(series, dist))


def ordinal_dispersion_2(
    series: OrdinalSeries, dist: StateDistance, normalized: bool = False
) -> float:
    """Independent-copies dispersion, optionally divided by d(s0, sn)."""
    return _normalize(divc_expected_distance(series, dist), dist, normalized)


def ordinal_asymmetry(
    series: OrdinalSeries, dist: StateDistance, normalized: bool = False
) -> float:
    """Reflected expected distance minus the independent-copies dispersion."""
    _warn_missing(dist, "centrosymmetric")
    value = reflected_expected_distance(series, dist) - divc_expected_distance(series, dist)
    return _normalize(value, dist, normalized)


def ordinal_skewness(
    series: OrdinalSeries, dist: StateDistance, normalized: bool = False
) -> float:
    """Expected distance to the top state minus expected distance to the bottom one."""
    _warn_missing(dist, "centrosymmetric")
    value = expected_distance_to_state(series, dist, series.n) - expected_distance_to_state(
        series, dist, 0
    )
    return _normalize(value, dist, normalized)


@dataclass(frozen=True)
class MarginalFeatureSet:
    """The six marginal features for one series under one distance."""

    location_standard: int
    location_wrt_s0: int
    dispersion_1: float
    dispersion_2: float
    asymmetry: float
    skewness: float
    normalized: bool = False

    def as_dict(self) -> dict:
        return {
            "location_standard": self.location_standard,
            "location_wrt_s0": self.location_wrt_s0,
            "dispersion_1": self.dispersion_1,
            "dispersion_2": self.dispersion_2,
            "asymmetry": self.asymmetry,
            "skewness": self.skewness,
            "normalized": self.normalized,
        }


def marginal_feature_set(
    series: OrdinalSeries, dist: StateDistance, normalized: bool = False
) -> MarginalFeatureSet:
    """Compute all six marginal features in one pass."""
    return MarginalFeatureSet(
        location_standard=ordinal_location_1(series, dist),
        location_wrt_s0=ordinal_location_2(series, dist),
        dispersion_1=_normalize(ordinal_dispersion_1(series, dist), dist, normalized),
        dispersion_2=ordinal_dispersion_2(series, dist, normalized),
        asymmetry=ordinal_asymmetry(series, dist, normalized),
        skewness=ordinal_skewness(series, dist, normalized),
        normalized=normalized,
    )
