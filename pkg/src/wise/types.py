"""Core immutable data containers.

All arrays are float64 and marked read-only after construction, so instances
are safe to share across threads. Validation happens in ``__post_init__``;
downstream code may assume the invariants hold.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidValue, NotAQuantile, ShapeMismatch

if TYPE_CHECKING:
    from .weights import WeightSpec

SERIES_KINDS = ("vector", "matrix", "function", "quantile")

_KIND_NDIM = {"vector": 2, "matrix": 3, "function": 2, "quantile": 2}


def _freeze(a: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(a, dtype=np.float64)
    if out is a:
        out = a.copy()
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class ObservationSeries:
    """A time-ordered sample of identically shaped observations.

    Parameters
    ----------
    kind : str
        One of ``vector`` (data shape (n, p)), ``matrix`` ((n, rows, cols)),
        ``function`` ((n, grid_len), sampled on a uniform grid over [0, 1]),
        or ``quantile`` ((n, grid_len), each row nondecreasing).
    data : np.ndarray
        The observations, first axis indexing time.

    Notes
    -----
    Construction requires only n >= 1; the analytic test path additionally
    requires n >= 4 and enforces that in :func:`wise.core.validate_series`
    and :func:`wise.engine.permutation_moments`.
    """

    kind: str
    data: np.ndarray

    def __post_init__(self):
        if self.kind not in SERIES_KINDS:
            raise InvalidValue(f"unknown observation kind {self.kind!r}")
        arr = _freeze(np.asarray(self.data))
        object.__setattr__(self, "data", arr)
        if arr.ndim != _KIND_NDIM[self.kind]:
            raise ShapeMismatch(
                f"kind={self.kind} expects {_KIND_NDIM[self.kind]}-d data, "
                f"got shape {arr.shape}"
            )
        if arr.shape[0] < 1:
            raise ShapeMismatch("series holds no observations")
        if min(arr.shape[1:]) < 1:
            raise ShapeMismatch(f"degenerate observation shape {arr.shape[1:]}")
        if self.kind == "function" and arr.shape[1] < 2:
            raise ShapeMismatch("function observations need at least 2 grid points")
        if not np.isfinite(arr).all():
            raise InvalidValue("series contains NaN or infinite entries")
        if self.kind == "quantile" and np.any(np.diff(arr, axis=1) < 0):
            raise NotAQuantile("quantile observations must be nondecreasing")

    @property
    def n(self) -> int:
        return self.data.shape[0]

    @property
    def p(self) -> int:
        if self.kind != "vector":
            raise ShapeMismatch(f"p is defined for vector series, not {self.kind}")
        return self.data.shape[1]

    @property
    def rows(self) -> int:
        if self.kind != "matrix":
            raise ShapeMismatch(f"rows is defined for matrix series, not {self.kind}")
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        if self.kind != "matrix":
            raise ShapeMismatch(f"cols is defined for matrix series, not {self.kind}")
        return self.data.shape[2]

    @property
    def grid_len(self) -> int:
        if self.kind not in ("function", "quantile"):
            raise ShapeMismatch(f"grid_len is not defined for {self.kind} series")
        return self.data.shape[1]


@dataclass(frozen=True)
class SimilarityMatrix:
    """Symmetric n x n matrix of pairwise observation similarities."""

    values: np.ndarray

    def __post_init__(self):
        arr = _freeze(np.asarray(self.values))
        object.__setattr__(self, "values", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeMismatch(f"similarity matrix must be square, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise InvalidValue("similarity matrix contains NaN or infinite entries")
        if not np.array_equal(arr, arr.T):
            raise ShapeMismatch("similarity matrix must be exactly symmetric")

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class WeightMatrix:
    """Materialized lag weights: values[i][j] = w(|i-j|), zero diagonal."""

    values: np.ndarray
    spec: "WeightSpec"

    def __post_init__(self):
        arr = _freeze(np.asarray(self.values))
        object.__setattr__(self, "values", arr)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ShapeMismatch(f"weight matrix must be square, got {arr.shape}")
        if not np.isfinite(arr).all():
            raise InvalidValue("weight matrix contains NaN or infinite entries")
        if np.any(arr.diagonal() != 0.0):
            raise InvalidValue("weight matrix diagonal must be zero (w(0) = 0)")

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class MomentSummary:
    """Scalar summaries of a (similarity, weight) pair.

    With W the weight matrix and S the similarity matrix, all sums running
    over off-diagonal pairs (j != i):

        w1 = sum_ij W_ij        w_row[i] = sum_j W_ij
        w2 = sum_ij W_ij^2      w3 = sum_i w_row[i]^2

    and S1, S_row, S2, S3 defined the same way from S. These are exactly the
    quantities the closed-form permutation moments consume.
    """

    w1: float
    w2: float
    w3: float
    w_row: np.ndarray
    s1: float
    s2: float
    s3: float
    s_row: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "w_row", _freeze(np.asarray(self.w_row)))
        object.__setattr__(self, "s_row", _freeze(np.asarray(self.s_row)))
        if self.w_row.shape != self.s_row.shape or self.w_row.ndim != 1:
            raise ShapeMismatch("row-sum vectors must share one dimension")

    @property
    def n(self) -> int:
        return self.w_row.shape[0]
