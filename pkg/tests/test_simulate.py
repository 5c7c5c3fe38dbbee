import numpy as np
import pytest
from numpy.testing import assert_array_equal

from otskit.core import StateSpace, build_state_distance
from otskit.dependence import ordinal_cohens_kappa
from otskit.inference import kappa_critical_values
from otskit.probabilities import c_marginal_probabilities
from otskit.simulate import (
    BenchmarkSpec,
    GeneratorSpec,
    derive_seed,
    make_benchmark_dataset,
    simulate,
    simulate_binomial_ar,
    simulate_binomial_inarch,
    simulate_ordinal_logit_ar1,
)


def test_codes_stay_in_range_and_length():
    for family, params in (
        ("binomial-ar", {"pi": 0.3, "rho": 0.5}),
        ("binomial-inarch", {"a0": 0.2, "a": [0.3, 0.2]}),
        ("ordinal-logit-ar1", {"eta": [-1.0, 0.0, 1.0, 2.0], "phi": 0.8}),
    ):
        s = simulate(GeneratorSpec(family, n=4, params=params, length=500, seed=3))
        assert len(s) == 500
        assert s.codes.min() >= 0 and s.codes.max() <= 4


def test_same_seed_identical_series():
    spec = GeneratorSpec("binomial-ar", n=5, params={"pi": 0.4, "rho": 0.3}, length=200, seed=99)
    assert_array_equal(simulate(spec).codes, simulate(spec).codes)
    other = GeneratorSpec("binomial-ar", n=5, params={"pi": 0.4, "rho": 0.3}, length=200, seed=100)
    assert not np.array_equal(simulate(spec).codes, simulate(other).codes)


def test_binomial_ar_independent_case_matches_binomial_marginal():
    spec = GeneratorSpec("binomial-ar", n=5, params={"pi": 0.35, "rho": 0.0},
                         length=100_000, seed=4)
    codes = np.asarray(simulate(spec).codes, float)
    se = np.sqrt(5 * 0.35 * 0.65 / codes.size)
    assert abs(codes.mean() - 5 * 0.35) < 3 * se


def test_binomial_ar_autocorrelation_target():
    spec = GeneratorSpec("binomial-ar", n=5, params={"pi": 0.5, "rho": 0.9},
                         length=100_000, seed=5)
    c = np.asarray(simulate(spec).codes, float)
    acf1 = np.corrcoef(c[1:], c[:-1])[0, 1]
    assert abs(acf1 - 0.9) < 0.01


def test_binomial_ar_parameter_validation():
    with pytest.raises(ValueError, match="pi"):
        simulate_binomial_ar(GeneratorSpec("binomial-ar", n=3, params={"pi": 1.2, "rho": 0.0}))
    with pytest.raises(ValueError, match="rho"):
        simulate_binomial_ar(GeneratorSpec("binomial-ar", n=3, params={"pi": 0.5, "rho": 1.0}))
    with pytest.raises(ValueError, match="rho"):
        simulate_binomial_ar(GeneratorSpec("binomial-ar", n=3, params={"pi": 0.1, "rho": -0.5}))
    with pytest.raises(ValueError, match="mix"):
        simulate_binomial_ar(
            GeneratorSpec("binomial-ar", n=3, params={"pi": 0.5, "rho": 0.2, "mix": [0.5, 0.4]})
        )


def test_inarch_no_feedback_is_iid_binomial():
    spec = GeneratorSpec("binomial-inarch", n=5, params={"a0": 0.3, "a": [0.0]},
                         length=50_000, seed=6)
    codes = np.asarray(simulate(spec).codes, float)
    se = np.sqrt(5 * 0.3 * 0.7 / codes.size)
    assert abs(codes.mean() - 1.5) < 3 * se
    lag1 = np.corrcoef(codes[1:], codes[:-1])[0, 1]
    assert abs(lag1) < 0.02


def test_inarch_stationary_mean():
    spec = GeneratorSpec("binomial-inarch", n=5, params={"a0": 0.3, "a": [0.4]},
                         length=100_000, seed=7)
    codes = np.asarray(simulate(spec).codes, float)
    assert abs(codes.mean() - 2.5) < 0.05


def test_inarch_positive_dependence_detected_by_kappa_test():
    dist = build_state_distance("block", StateSpace(6))
    rejections = 0
    reps = 200
    for r in range(reps):
        s = simulate(GeneratorSpec("binomial-inarch", n=5, params={"a0": 0.3, "a": [0.4]},
                                   length=600, seed=1000 + r))
        lower, upper = kappa_critical_values(s, 0.05)
        k1 = ordinal_cohens_kappa(s, dist, 1)
        rejections += not (lower <= k1 <= upper)
    assert rejections / reps > 0.95


def test_inarch_parameter_validation():
    with pytest.raises(ValueError, match="a0"):
        simulate_binomial_inarch(GeneratorSpec("binomial-inarch", n=3,
                                               params={"a0": 0.5, "a": [0.6]}))
    with pytest.raises(ValueError, match="a0"):
        simulate_binomial_inarch(GeneratorSpec("binomial-inarch", n=3,
                                               params={"a0": 0.0, "a": [0.3]}))


def test_logit_independent_case_matches_logistic_marginal():
    eta = np.array([-2.2, -0.85, 0.0, 0.85, 2.2])
    spec = GeneratorSpec("ordinal-logit-ar1", n=5, params={"eta": eta.tolist(), "phi": 0.0},
                         length=100_000, seed=8)
    s = simulate(spec)
    f_hat = c_marginal_probabilities(s)
    f_true = 1 / (1 + np.exp(-eta))
    se = np.sqrt(f_true * (1 - f_true) / len(s))
    assert np.all(np.abs(f_hat - f_true) < 3.5 * se)


def test_logit_positive_feedback_gives_positive_kappa():
    dist = build_state_distance("block", StateSpace(6))
    kappas = []
    for r in range(200):
        s = simulate(GeneratorSpec("ordinal-logit-ar1", n=5,
                                   params={"eta": [-2.2, -0.85, 0.0, 0.85, 2.2], "phi": 1.2},
                                   length=300, seed=2000 + r))
        kappas.append(ordinal_cohens_kappa(s, dist, 1))
    kappas = np.array(kappas)
    assert kappas.mean() > 2.33 * kappas.std(ddof=1) / np.sqrt(kappas.size)


def test_logit_conditional_cdf_monotone():
    eta = np.array([-1.5, -0.5, 0.5, 1.5])
    for prev in range(5):
        shift = 1.2 * (2 * prev / 4 - 1)
        cdf = 1 / (1 + np.exp(-(eta - shift)))
        assert np.all(np.diff(cdf) > 0)


def test_logit_parameter_validation():
    with pytest.raises(ValueError, match="increasing"):
        simulate_ordinal_logit_ar1(
            GeneratorSpec("ordinal-logit-ar1", n=3, params={"eta": [0.0, 0.0, 1.0], "phi": 0.1})
        )
    with pytest.raises(ValueError, match="length"):
        simulate_ordinal_logit_ar1(
            GeneratorSpec("ordinal-logit-ar1", n=3, params={"eta": [0.0, 1.0], "phi": 0.1})
        )


def test_independence_cases_pass_kappa_size_check():
    dist = build_state_distance("block", StateSpace(5))
    specs = [
        GeneratorSpec("binomial-ar", n=4, params={"pi": 0.45, "rho": 0.0}, length=500),
        GeneratorSpec("binomial-inarch", n=4, params={"a0": 0.45, "a": [0.0]}, length=500),
        GeneratorSpec("ordinal-logit-ar1", n=4,
                      params={"eta": [-1.4, -0.4, 0.4, 1.4], "phi": 0.0}, length=500),
    ]
    from dataclasses import replace

    for spec in specs:
        rejections = 0
        reps = 200
        for r in range(reps):
            s = simulate(replace(spec, seed=3000 + r))
            lower, upper = kappa_critical_values(s, 0.05)
            k1 = ordinal_cohens_kappa(s, dist, 1)
            rejections += not (lower <= k1 <= upper)
        assert 0.01 <= rejections / reps <= 0.11, spec.family


def test_benchmark_dataset_defaults():
    groups = tuple(
        GeneratorSpec("binomial-ar", n=5, params={"pi": p, "rho": r}, length=600)
        for p, r in ((0.3, 0.1), (0.5, 0.5), (0.7, 0.1), (0.5, 0.1))
    )
    spec = BenchmarkSpec(groups=groups, per_group=20)
    ds = make_benchmark_dataset(spec, seed=1)
    assert len(ds) == 80
    assert all(len(s) == 600 for s in ds.series)
    assert ds.state_space.n == 5
    assert ds.class_labels == tuple([1] * 20 + [2] * 20 + [3] * 20 + [4] * 20)


def test_benchmark_dataset_deterministic():
    groups = (GeneratorSpec("binomial-ar", n=3, params={"pi": 0.4, "rho": 0.2}, length=50),)
    spec = BenchmarkSpec(groups=groups, per_group=5)
    a = make_benchmark_dataset(spec, seed=77)
    b = make_benchmark_dataset(spec, seed=77)
    for x, y in zip(a.series, b.series):
        assert_array_equal(x.codes, y.codes)
    c = make_benchmark_dataset(spec, seed=78)
    assert any(not np.array_equal(x.codes, y.codes) for x, y in zip(a.series, c.series))


def test_benchmark_validation_and_subseeds():
    bad = (
        GeneratorSpec("binomial-ar", n=3, params={"pi": 0.4, "rho": 0.2}),
        GeneratorSpec("binomial-ar", n=5, params={"pi": 0.4, "rho": 0.2}),
    )
    with pytest.raises(ValueError, match="share"):
        BenchmarkSpec(groups=bad)
    assert derive_seed(1, 0, 0) != derive_seed(1, 0, 1)
    assert derive_seed(1, 0, 0) == derive_seed(1, 0, 0)


def test_unknown_family_rejected():
    with pytest.raises(ValueError, match="family"):
        GeneratorSpec("poisson-ar", n=3, params={})
