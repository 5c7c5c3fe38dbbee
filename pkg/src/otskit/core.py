"""Core domain types: state spaces, state distances and series containers.

Every object in this module is immutable after construction (arrays are
marked read-only), so instances can be shared freely across workers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

DISTANCE_KINDS = ("hamming", "block", "euclidean", "custom")


class DegenerateStateError(ValueError):
    """A cumulative level is empty or full, so a correlation is undefined."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(
            f"cumulative probability for state index {index} is {value:g}; "
            "correlations require it strictly inside (0, 1)"
        )


class AssumptionWarning(UserWarning):
    """A distance lacks a property (maximization/centrosymmetry) a feature expects."""


class ClampWarning(UserWarning):
    """A plug-in correlation fell outside [-1, 1] and was clamped."""


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class StateSpace:
    """Ordered range of states s0 < s1 < ... < sn, identified by their labels."""

    labels: tuple[str, ...]

    def __init__(self, labels: Sequence[str] | int):
        if isinstance(labels, int):
            labels = tuple(str(i) for i in range(labels))
        labels = tuple(str(s) for s in labels)
        if len(labels) < 2:
            raise ValueError("a state space needs at least two states")
        if len(set(labels)) != len(labels):
            raise ValueError("state labels must be distinct")
        object.__setattr__(self, "labels", labels)

    @property
    def n(self) -> int:
        """Largest state index (number of states minus one)."""
        return len(self.labels) - 1

    @property
    def n_states(self) -> int:
        return len(self.labels)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(str(label))
        except ValueError:
            raise ValueError(f"unknown state label {label!r}") from None


@dataclass(frozen=True, eq=False)
class StateDistance:
    """Pairwise distance between states, with the flags features rely on."""

    kind: str
    matrix: np.ndarray
    d0n: float = field(init=False)
    maximization: bool = field(init=False)
    centrosymmetric: bool = field(init=False)

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 2:
            raise ValueError("distance matrix must be square with size >= 2")
        if not np.allclose(m, m.T, atol=1e-12):
            raise ValueError("distance matrix must be symmetric")
        if np.any(np.diag(m) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if np.any(m < 0):
            raise ValueError("distance matrix entries must be nonnegative")
        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "d0n", float(m[0, -1]))
        object.__setattr__(self, "maximization", bool(m[0, -1] >= m.max() - 1e-12))
        object.__setattr__(
            self, "centrosymmetric", bool(np.allclose(m, m[::-1, ::-1], atol=1e-12))
        )

    @property
    def n(self) -> int:
        return self.matrix.shape[0] - 1


def build_state_distance(
    kind: str,
    state_space: StateSpace,
    custom_matrix: np.ndarray | None = None,
) -> StateDistance:
    """Build one of the standard state distances (or wrap a custom matrix).

    Hamming is 1 for distinct states, block is |i - j| and Euclidean is
    (i - j)^2 on the state indices.
    """
    kind = kind.lower()
    if kind not in DISTANCE_KINDS:
        raise ValueError(f"unknown distance kind {kind!r}; expected one of {DISTANCE_KINDS}")
    n1 = state_space.n_states
    idx = np.arange(n1)
    if kind == "custom":
        if custom_matrix is None:
            raise ValueError("custom distance requires custom_matrix")
        m = np.asarray(custom_matrix, dtype=float)
        if m.shape != (n1, n1):
            raise ValueError(f"custom_matrix must have shape ({n1}, {n1}), got {m.shape}")
    else:
        if custom_matrix is not None:
            raise ValueError("custom_matrix is only allowed with kind='custom'")
        diff = idx[:, None] - idx[None, :]
        if kind == "hamming":
            m = (diff != 0).astype(float)
        elif kind == "block":
            m = np.abs(diff).astype(float)
        else:  # euclidean
            m = (diff.astype(float)) ** 2
    return StateDistance(kind=kind, matrix=m)


def validate_asymmetry_assumption(dist: StateDistance, tol: float = 1e-9) -> bool:
    """Check that (J - I) D is positive semidefinite (J = counteridentity).

    Only the quadratic form matters, so the symmetric part of the product is
    tested; eigenvalues may dip below zero by `tol` relative to the largest
    magnitude.
    """
    d = dist.matrix
    m = d[::-1, :] - d  # (J - I) D
    sym = (m + m.T) / 2.0
    eig = np.linalg.eigvalsh(sym)
    scale = np.max(np.abs(eig)) if eig.size else 0.0
    return bool(np.all(eig >= -tol * scale))


@dataclass(frozen=True, eq=False)
class OrdinalSeries:
    """A T-length realization stored as integer count codes in [0, n].

    The number of states always comes from the state space; a realization
    need not visit every state.
    """

    codes: np.ndarray
    state_space: StateSpace

    def __post_init__(self):
        c = np.asarray(self.codes)
        if c.ndim != 1 or c.size < 1:
            raise ValueError("codes must be a nonempty one-dimensional sequence")
        if not np.issubdtype(c.dtype, np.integer):
            as_int = c.astype(np.int64)
            if np.any(as_int != c):
                raise ValueError("codes must be integers")
            c = as_int
        n = self.state_space.n
        if c.min() < 0 or c.max() > n:
            raise ValueError(f"codes must lie in [0, {n}]; got range [{c.min()}, {c.max()}]")
        object.__setattr__(self, "codes", _readonly(c.astype(np.int64)))

    def __len__(self) -> int:
        return self.codes.size

    @property
    def n(self) -> int:
        return self.state_space.n

    def to_labels(self) -> list[str]:
        return [self.state_space.labels[c] for c in self.codes]

    @classmethod
    def from_labels(cls, labels: Sequence[str], state_space: StateSpace) -> "OrdinalSeries":
        codes = np.array([state_space.index_of(s) for s in labels], dtype=np.int64)
        return cls(codes=codes, state_space=state_space)


@dataclass(frozen=True, eq=False)
class NumericSeries:
    """A real-valued companion series (same length as the ordinal one when paired)."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 1 or v.size < 1:
            raise ValueError("values must be a nonempty one-dimensional sequence")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "values", _readonly(v))

    def __len__(self) -> int:
        return self.values.size


@dataclass(frozen=True)
class OtsDataset:
    """A named collection of ordinal series over one shared state space."""

    series: tuple[OrdinalSeries, ...]
    state_space: StateSpace
    class_labels: tuple[int, ...] | None = None
    name: str = ""

    def __post_init__(self):
        series = tuple(self.series)
        if not series:
            raise ValueError("dataset must contain at least one series")
        for s in series:
            if s.state_space != self.state_space:
                raise ValueError("all series must share the dataset's state space")
        object.__setattr__(self, "series", series)
        if self.class_labels is not None:
            labels = tuple(int(v) for v in self.class_labels)
            if len(labels) != len(series):
                raise ValueError("class_labels must have one entry per series")
            object.__setattr__(self, "class_labels", labels)

    def __len__(self) -> int:
        return len(self.series)
