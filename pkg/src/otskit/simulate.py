"""Synthetic ordinal series generators and benchmark dataset assembly.

Three count-model families are provided: binomial AR(p) via binomial
thinning, binomial INARCH(p), and an ordinal logit AR(1) with a logistic
feedback term. Generation is deterministic given the spec and seed; the
first 500 steps are discarded as burn-in.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Mapping

import numpy as np

from .core import OrdinalSeries, OtsDataset, StateSpace

BURN_IN = 500

FAMILIES = ("binomial-ar", "binomial-inarch", "ordinal-logit-ar1")


@dataclass(frozen=True)
class GeneratorSpec:
    """One parametrized count model: family, number of states, coefficients."""

    family: str
    n: int
    params: Mapping[str, object]
    length: int = 600
    seed: int = 0

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}; got {self.family!r}")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.length < 1:
            raise ValueError("length must be >= 1")
        object.__setattr__(self, "params", dict(self.params))


@dataclass(frozen=True)
class BenchmarkSpec:
    """Groups of generator specs sharing one state space."""

    groups: tuple[GeneratorSpec, ...]
    per_group: int = 20
    name: str = "benchmark"

    def __post_init__(self):
        groups = tuple(self.groups)
        if not groups:
            raise ValueError("benchmark needs at least one group")
        if len({g.n for g in groups}) != 1:
            raise ValueError("all benchmark groups must share the same number of states")
        if self.per_group < 1:
            raise ValueError("per_group must be >= 1")
        object.__setattr__(self, "groups", groups)

    @property
    def n(self) -> int:
        return self.groups[0].n


def _success_counts(uniforms: np.ndarray, prob: float) -> np.ndarray:
    """Row t, column c: successes among the first c Bernoulli(prob) draws."""
    hits = np.cumsum(uniforms < prob, axis=1)
    return np.concatenate([np.zeros((uniforms.shape[0], 1), dtype=np.int64), hits], axis=1)


def _binomial_ar_params(spec: GeneratorSpec) -> tuple[float, float, np.ndarray]:
    params = spec.params
    pi = float(params["pi"])
    rho = float(params["rho"])
    if not 0.0 < pi < 1.0:
        raise ValueError(f"pi must lie in (0, 1); got {pi}")
    low = max(-pi / (1.0 - pi), -(1.0 - pi) / pi)
    if not low < rho < 1.0:
        raise ValueError(f"rho must lie in ({low:.6g}, 1); got {rho}")
    beta = pi * (1.0 - rho)
    alpha = beta + rho
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ValueError(f"derived thinning probabilities out of [0, 1]: alpha={alpha}, beta={beta}")
    mix = np.asarray(params.get("mix", [1.0]), dtype=float)
    if mix.ndim != 1 or mix.size < 1 or np.any(mix < 0) or abs(mix.sum() - 1.0) > 1e-9:
        raise ValueError("mix weights must be nonnegative and sum to 1")
    return alpha, beta, mix


def simulate_binomial_ar(spec: GeneratorSpec) -> OrdinalSeries:
    """Binomial AR(p): thinning of a previous count and of its complement.

    One step draws C_t = alpha o C_{t-k} + beta o (n - C_{t-k}), where
    "o" is binomial thinning (a sum of independent Bernoulli draws), the lag
    k is sampled from the mixing weights ``params["mix"]`` (omit for AR(1)),
    and alpha = beta + rho, beta = pi (1 - rho). With a single weight the
    chain has stationary marginal Binomial(n, pi) and lag-1 autocorrelation
    rho.
    """
    alpha, beta, mix = _binomial_ar_params(spec)
    n, p = spec.n, mix.size
    steps = spec.length + BURN_IN
    rng = np.random.default_rng(spec.seed)
    count_alpha = _success_counts(rng.random((steps, n)), alpha)
    count_beta = _success_counts(rng.random((steps, n)), beta)
    lag_choice = rng.choice(p, size=steps, p=mix) if p > 1 else np.zeros(steps, dtype=np.int64)
    pi = float(spec.params["pi"])
    out = np.empty(steps + p, dtype=np.int64)
    out[:p] = rng.binomial(n, pi, size=p)
    for t in range(steps):
        prev = out[p + t - 1 - lag_choice[t]]
        out[p + t] = count_alpha[t, prev] + count_beta[t, n - prev]
    return OrdinalSeries(codes=out[p + BURN_IN :], state_space=StateSpace(n + 1))


def _inarch_params(spec: GeneratorSpec) -> tuple[float, np.ndarray]:
    a0 = float(spec.params["a0"])
    a = np.asarray(spec.params["a"], dtype=float)
    if a.ndim != 1 or a.size < 1:
        raise ValueError("a must be a nonempty coefficient vector")
    if a0 <= 0 or np.any(a < 0) or a0 + a.sum() >= 1.0:
        raise ValueError("INARCH needs a0 > 0, a_k >= 0 and a0 + sum(a) < 1")
    return a0, a


def simulate_binomial_inarch(spec: GeneratorSpec) -> OrdinalSeries:
    """Binomial INARCH(p): conditionally Binomial(n, a0 + sum a_k * C_{t-k}/n)."""
    a0, a = _inarch_params(spec)
    n, p = spec.n, a.size
    steps = spec.length + BURN_IN
    rng = np.random.default_rng(spec.seed)
    uniforms = rng.random((steps, n))
    mean_pi = a0 / (1.0 - a.sum())
    out = np.empty(steps + p, dtype=np.int64)
    out[:p] = rng.binomial(n, mean_pi, size=p)
    for t in range(steps):
        window = out[p + t - p : p + t][::-1]  # C_{t-1}, ..., C_{t-p}
        pi_t = a0 + float(a @ window) / n
        out[p + t] = int(np.count_nonzero(uniforms[t] < pi_t))
    return OrdinalSeries(codes=out[p + BURN_IN :], state_space=StateSpace(n + 1))


def _logit_params(spec: GeneratorSpec, n: int) -> tuple[np.ndarray, float]:
    eta = np.asarray(spec.params["eta"], dtype=float)
    phi = float(spec.params.get("phi", 0.0))
    if eta.shape != (n,):
        raise ValueError(f"eta must have length n = {n}")
    if np.any(np.diff(eta) <= 0):
        raise ValueError("eta thresholds must be strictly increasing")
    return eta, phi


def simulate_ordinal_logit_ar1(spec: GeneratorSpec) -> OrdinalSeries:
    """Ordinal logit AR(1): cumulative logits shifted by a feedback of the
    previous state mapped to [-1, 1]."""
    n = spec.n
    eta, phi = _logit_params(spec, n)
    steps = spec.length + BURN_IN
    rng = np.random.default_rng(spec.seed)
    uniforms = rng.random(steps)
    prev_grid = 2.0 * np.arange(n + 1) / n - 1.0
    cdf_table = 1.0 / (1.0 + np.exp(-(eta[None, :] - phi * prev_grid[:, None])))
    state = int(np.searchsorted(1.0 / (1.0 + np.exp(-eta)), rng.random()))
    out = np.empty(steps, dtype=np.int64)
    for t in range(steps):
        state = int(np.searchsorted(cdf_table[state], uniforms[t]))
        out[t] = state
    return OrdinalSeries(codes=out[BURN_IN:], state_space=StateSpace(n + 1))


_SIMULATORS = {
    "binomial-ar": simulate_binomial_ar,
    "binomial-inarch": simulate_binomial_inarch,
    "ordinal-logit-ar1": simulate_ordinal_logit_ar1,
}


def simulate(spec: GeneratorSpec) -> OrdinalSeries:
    """Generate one series from any supported family."""
    return _SIMULATORS[spec.family](spec)


def derive_seed(master_seed: int, group: int, index: int) -> int:
    """Deterministic per-series sub-seed, independent of generation order."""
    child = np.random.SeedSequence((int(master_seed), int(group), int(index)))
    return int(child.generate_state(1, np.uint64)[0])


def make_benchmark_dataset(spec: BenchmarkSpec, seed: int = 0) -> OtsDataset:
    """Generate per_group series from every group; class labels are 1-based
    group ids."""
    series = []
    labels = []
    for g, gen in enumerate(spec.groups):
        for i in range(spec.per_group):
            sub = replace(gen, seed=derive_seed(seed, g, i))
            series.append(simulate(sub))
            labels.append(g + 1)
    return OtsDataset(
        series=tuple(series),
        state_space=series[0].state_space,
        class_labels=tuple(labels),
        name=spec.name,
    )
