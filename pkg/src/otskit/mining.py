"""Dataset-level machinery: feature matrices, pairwise dissimilarities,
2-D scaling, PAM and k-means clustering, ARI and outlier scoring."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .core import OrdinalSeries, OtsDataset, StateDistance, _readonly
from .dependence import ordinal_cohens_kappa
from .features import (
    ordinal_asymmetry,
    ordinal_dispersion_2,
    ordinal_location_1,
    ordinal_skewness,
)
from .probabilities import (
    c_joint_probabilities,
    c_marginal_probabilities,
    joint_probabilities,
    marginal_probabilities,
)

Descriptor = tuple  # (feature name, lag or None, index or None)


def descriptor_name(desc: Descriptor) -> str:
    name, lag, index = desc
    parts = [str(name)]
    if lag is not None:
        parts.append(f"lag{lag}")
    if index is not None:
        if isinstance(index, tuple):
            parts.append("_".join(str(x) for x in index))
        else:
            parts.append(str(index))
    return "_".join(parts)


@dataclass(frozen=True, eq=False)
class FeatureMatrix:
    """One feature vector per series plus the schema describing each column."""

    values: np.ndarray
    schema: tuple[Descriptor, ...]

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2:
            raise ValueError("values must be a 2-D array")
        if v.shape[1] != len(self.schema):
            raise ValueError("schema length must equal the number of columns")
        object.__setattr__(self, "values", _readonly(v))
        object.__setattr__(self, "schema", tuple(self.schema))

    @property
    def column_names(self) -> list[str]:
        return [descriptor_name(d) for d in self.schema]


def cumulative_feature_vector(series: OrdinalSeries, max_lag: int = 2) -> np.ndarray:
    """Cumulative marginal probabilities followed by the cumulative joint
    matrices for lags 1..max_lag, flattened row-major."""
    parts = [c_marginal_probabilities(series)]
    parts += [c_joint_probabilities(series, l).ravel() for l in range(1, max_lag + 1)]
    return np.concatenate(parts)


def pmf_feature_vector(series: OrdinalSeries, max_lag: int = 2) -> np.ndarray:
    """Plain marginal probabilities followed by the joint matrices for lags
    1..max_lag, flattened row-major."""
    parts = [marginal_probabilities(series)]
    parts += [joint_probabilities(series, l).ravel() for l in range(1, max_lag + 1)]
    return np.concatenate(parts)


def _probability_schema(n: int, max_lag: int, cumulative: bool) -> tuple[Descriptor, ...]:
    if cumulative:
        marg, joint, size = "f", "f_joint", n
    else:
        marg, joint, size = "p", "p_joint", n + 1
    schema = [(marg, None, i) for i in range(size)]
    for l in range(1, max_lag + 1):
        schema += [(joint, l, (i, j)) for i in range(size) for j in range(size)]
    return tuple(schema)


def cumulative_feature_matrix(dataset: OtsDataset, max_lag: int = 2) -> FeatureMatrix:
    values = np.vstack([cumulative_feature_vector(s, max_lag) for s in dataset.series])
    return FeatureMatrix(values, _probability_schema(dataset.state_space.n, max_lag, True))


def pmf_feature_matrix(dataset: OtsDataset, max_lag: int = 2) -> FeatureMatrix:
    values = np.vstack([pmf_feature_vector(s, max_lag) for s in dataset.series])
    return FeatureMatrix(values, _probability_schema(dataset.state_space.n, max_lag, False))


def marginal_serial_feature_matrix(
    dataset: OtsDataset, dist: StateDistance, kappa_lags: tuple[int, ...] = (1, 2)
) -> FeatureMatrix:
    """The classification feature set: location, DIVC dispersion, asymmetry,
    skewness and kappa at the requested lags."""
    rows = []
    for s in dataset.series:
        row = [
            float(ordinal_location_1(s, dist)),
            ordinal_dispersion_2(s, dist),
            ordinal_asymmetry(s, dist),
            ordinal_skewness(s, dist),
        ]
        row += [ordinal_cohens_kappa(s, dist, l) for l in kappa_lags]
        rows.append(row)
    schema = [
        ("location_1", None, None),
        ("dispersion_2", None, None),
        ("asymmetry", None, None),
        ("skewness", None, None),
    ] + [("kappa", l, None) for l in kappa_lags]
    return FeatureMatrix(np.asarray(rows, dtype=float), tuple(schema))


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """Symmetric pairwise distances stored in condensed upper-triangular form."""

    size: int
    condensed: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.condensed, dtype=float)
        expected = self.size * (self.size - 1) // 2
        if c.shape != (expected,):
            raise ValueError(f"condensed storage must have length {expected}, got {c.shape}")
        if np.any(c < 0):
            raise ValueError("distances must be nonnegative")
        object.__setattr__(self, "condensed", _readonly(c))

    @classmethod
    def from_full(cls, full: np.ndarray) -> "DistanceMatrix":
        full = np.asarray(full, dtype=float)
        m = full.shape[0]
        if full.shape != (m, m):
            raise ValueError("distance matrix must be square")
        if not np.allclose(full, full.T, atol=1e-9):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.abs(np.diag(full)) > 1e-12):
            raise ValueError("distance matrix must have a zero diagonal")
        iu = np.triu_indices(m, k=1)
        return cls(size=m, condensed=full[iu])

    def full(self) -> np.ndarray:
        out = np.zeros((self.size, self.size))
        iu = np.triu_indices(self.size, k=1)
        out[iu] = self.condensed
        return out + out.T

    def at(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        i, j = (i, j) if i < j else (j, i)
        m = self.size
        return float(self.condensed[m * i - i * (i + 1) // 2 + (j - i - 1)])


def _squared_euclidean(rows: np.ndarray) -> np.ndarray:
    sq = np.sum(rows**2, axis=1)
    d2 = sq[:, None] + sq[None, :] - 2.0 * rows @ rows.T
    np.fill_diagonal(d2, 0.0)
    return np.maximum(d2, 0.0)


def feature_distance_matrix(features, squared: bool = False) -> DistanceMatrix:
    """Pairwise (squared) Euclidean distances between feature rows."""
    rows = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, float)
    if rows.shape[0] < 2:
        raise ValueError("need at least two feature rows")
    d2 = _squared_euclidean(rows)
    return DistanceMatrix.from_full(d2 if squared else np.sqrt(d2))


def pairwise_distance_matrix(
    dataset: OtsDataset,
    metric: str = "d1",
    max_lag: int = 2,
    squared: bool = True,
) -> DistanceMatrix:
    """Pairwise dissimilarities between the series of a dataset.

    ``d1`` uses cumulative probability features, ``dpmf`` plain probability
    features. ``squared=True`` gives the sum-of-squared-differences form;
    ``squared=False`` the plain Euclidean distance on the same vectors.
    """
    if len(dataset) < 2:
        raise ValueError("need at least two series")
    metric = metric.lower()
    if metric == "d1":
        fm = cumulative_feature_matrix(dataset, max_lag)
    elif metric == "dpmf":
        fm = pmf_feature_matrix(dataset, max_lag)
    else:
        raise ValueError(f"metric must be 'd1' or 'dpmf'; got {metric!r}")
    return feature_distance_matrix(fm, squared=squared)


def classical_mds(dm: DistanceMatrix, dims: int = 2) -> np.ndarray:
    """Classical (Torgerson) multidimensional scaling of a distance matrix.

    Parameters
    ----------
    dm : DistanceMatrix
        Pairwise distances to embed.
    dims : int, optional (default=2)
        Target dimension of the configuration.

    Returns
    -------
    np.ndarray of shape (m, dims)
        Coordinates centered at the origin, one row per object. The squared
        distances are double-centered and the top `dims` nonnegative
        eigenpairs kept; when fewer positive eigenvalues exist, the remaining
        coordinates are zero and a warning is emitted. The configuration is
        unique only up to rotation/reflection.
    """
    m = dm.size
    if m < dims + 1:
        raise ValueError(f"need at least dims+1 = {dims + 1} points, got {m}")
    d2 = dm.full() ** 2
    b = d2 - d2.mean(axis=0) - d2.mean(axis=1)[:, None] + d2.mean()
    b *= -0.5
    eigval, eigvec = np.linalg.eigh(b)
    order = np.argsort(eigval)[::-1]
    eigval, eigvec = eigval[order], eigvec[:, order]
    tol = 1e-12 * max(abs(eigval[0]), 1.0)
    positive = int(np.sum(eigval[:dims] > tol))
    if positive < dims:
        warnings.warn(
            f"only {positive} positive eigenvalues; remaining coordinates set to zero",
            stacklevel=2,
        )
    coords = np.zeros((m, dims))
    if positive:
        coords[:, :positive] = eigvec[:, :positive] * np.sqrt(eigval[:positive])
    return coords - coords.mean(axis=0)


@dataclass(frozen=True, eq=False)
class PamResult:
    labels: np.ndarray
    medoids: tuple[int, ...]
    cost: float


def _pam_cost(full: np.ndarray, medoids: list[int]) -> float:
    return float(full[:, medoids].min(axis=1).sum())


def pam_cluster(dm: DistanceMatrix, k: int) -> PamResult:
    """Partitioning Around Medoids: greedy BUILD then best-improvement SWAP.

    Deterministic: all ties break toward the lowest index.
    """
    m = dm.size
    k = int(k)
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= {m}; got {k}")
    full = dm.full()

    medoids = [int(np.argmin(full.sum(axis=0)))]
    while len(medoids) < k:
        nearest = full[:, medoids].min(axis=1)
        gains = np.maximum(nearest[:, None] - full, 0.0).sum(axis=0)
        gains[medoids] = -np.inf
        medoids.append(int(np.argmax(gains)))

    cost = _pam_cost(full, medoids)
    improved = True
    while improved:
        improved = False
        best = (0.0, None, None)
        for mi, med in enumerate(medoids):
            for cand in range(m):
                if cand in medoids:
                    continue
                trial = medoids.copy()
                trial[mi] = cand
                delta = _pam_cost(full, trial) - cost
                if delta < best[0] - 1e-12:
                    best = (delta, mi, cand)
        if best[1] is not None:
            medoids[best[1]] = best[2]
            cost = _pam_cost(full, medoids)
            improved = True

    medoids = sorted(medoids)
    labels = np.argmin(full[:, medoids], axis=1)
    return PamResult(labels=labels, medoids=tuple(medoids), cost=_pam_cost(full, medoids))


@dataclass(frozen=True, eq=False)
class KmeansResult:
    labels: np.ndarray
    centers: np.ndarray
    inertia: float


def _kmeans_pp_init(rows: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    m = rows.shape[0]
    centers = [rows[rng.integers(m)]]
    for _ in range(1, k):
        d2 = np.min(_cross_sqdist(rows, np.asarray(centers)), axis=1)
        total = d2.sum()
        if total == 0:
            centers.append(rows[rng.integers(m)])
            continue
        centers.append(rows[rng.choice(m, p=d2 / total)])
    return np.asarray(centers)


def _cross_sqdist(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.maximum(
        np.sum(a**2, axis=1)[:, None] + np.sum(b**2, axis=1)[None, :] - 2.0 * a @ b.T, 0.0
    )


def _lloyd(rows: np.ndarray, centers: np.ndarray, max_iter: int) -> tuple[np.ndarray, np.ndarray, float]:
    k = centers.shape[0]
    labels = np.full(rows.shape[0], -1)
    for _ in range(max_iter):
        d2 = _cross_sqdist(rows, centers)
        new_labels = np.argmin(d2, axis=1)
        for c in range(k):
            members = new_labels == c
            if not members.any():
                # re-seed an empty cluster at the point farthest from its center
                far = int(np.argmax(d2[np.arange(rows.shape[0]), new_labels]))
                centers[c] = rows[far]
                new_labels[far] = c
                members = new_labels == c
            centers[c] = rows[members].mean(axis=0)
        if np.array_equal(new_labels, labels):
            break
        labels = new_labels
    inertia = float(np.sum((rows - centers[labels]) ** 2))
    return labels, centers, inertia


def kmeans_cluster(
    features,
    k: int,
    seed: int = 0,
    n_restarts: int = 10,
    max_iter: int = 300,
) -> KmeansResult:
    """Lloyd k-means with k-means++ seeding; the best of `n_restarts` runs wins."""
    rows = features.values if isinstance(features, FeatureMatrix) else np.asarray(features, float)
    m = rows.shape[0]
    k = int(k)
    if not 1 <= k <= m:
        raise ValueError(f"k must satisfy 1 <= k <= {m}; got {k}")
    seeds = np.random.SeedSequence(seed).spawn(n_restarts)
    best: KmeansResult | None = None
    for ss in seeds:
        rng = np.random.default_rng(ss)
        centers = _kmeans_pp_init(rows, k, rng).copy()
        labels, centers, inertia = _lloyd(rows, centers, max_iter)
        if best is None or inertia < best.inertia:
            best = KmeansResult(labels=labels, centers=centers, inertia=inertia)
    return best


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-corrected agreement between two partitions of the same items."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("label vectors must be one-dimensional and of equal length")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    contingency = np.zeros((ai.max() + 1, bi.max() + 1))
    np.add.at(contingency, (ai, bi), 1.0)

    def comb2(x):
        return x * (x - 1) / 2.0

    sum_ij = comb2(contingency).sum()
    sum_a = comb2(contingency.sum(axis=1)).sum()
    sum_b = comb2(contingency.sum(axis=0)).sum()
    total = comb2(a.size)
    expected = sum_a * sum_b / total if total else 0.0
    maximum = (sum_a + sum_b) / 2.0
    if maximum == expected:
        return 1.0
    return float((sum_ij - expected) / (maximum - expected))


@dataclass(frozen=True, eq=False)
class OutlierReport:
    """Per-series outlying scores, the decreasing-score ranking and fence flags."""

    scores: np.ndarray
    ranking: np.ndarray
    fence_flags: np.ndarray | None = None
    upper_fence: float | None = None


def outlier_ranking(dm: DistanceMatrix) -> OutlierReport:
    """Rank series by their summed distance to all others (ties -> lowest index)."""
    if dm.size < 2:
        raise ValueError("need at least two series")
    scores = dm.full().sum(axis=1)
    ranking = np.argsort(-scores, kind="stable")
    return OutlierReport(scores=scores, ranking=ranking)


def boxplot_outlier_flags(scores, range_coef: float = 1.0) -> np.ndarray:
    """Flag scores strictly above Q3 + range_coef * IQR (linear-interpolation quartiles)."""
    scores = np.asarray(scores, dtype=float)
    if scores.size < 4:
        raise ValueError("need at least four scores for the boxplot rule")
    q1, q3 = np.percentile(scores, [25, 75])
    return scores > q3 + range_coef * (q3 - q1)


def detect_outliers(dm: DistanceMatrix, range_coef: float = 1.0) -> OutlierReport:
    """Complete outlier report: scores, ranking and upper-fence flags."""
    base = outlier_ranking(dm)
    q1, q3 = np.percentile(base.scores, [25, 75])
    fence = float(q3 + range_coef * (q3 - q1))
    return OutlierReport(
        scores=base.scores,
        ranking=base.ranking,
        fence_flags=base.scores > fence,
        upper_fence=fence,
    )
