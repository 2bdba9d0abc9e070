"""Series validation and construction of similarity and weight matrices.

The scalar summaries computed here (w1, w2, w3 and S1, S2, S3 plus the row
sums) are exactly the inputs of the closed-form permutation moments; all of
them sum over off-diagonal pairs only.
"""

from __future__ import annotations

from typing import Callable, Union

import numpy as np
from scipy.linalg import toeplitz

from .errors import InvalidValue, ShapeMismatch, TooFewObservations
from .kernels import KernelSpec, pairwise_similarity
from .types import MomentSummary, ObservationSeries, SimilarityMatrix, WeightMatrix
from .weights import WeightSpec, weight_profile

Kernel = Union[KernelSpec, Callable[[np.ndarray, np.ndarray], float]]


def validate_series(raw, kind: str) -> ObservationSeries:
    """Turn untyped tabular input into a validated series.

    ``raw`` is any nested sequence or array: (n, p) for vector kind,
    (n, rows, cols) for matrix kind, (n, grid_len) for function/quantile.
    Requires n >= 4, the minimum the analytic test supports.
    """
    try:
        arr = np.asarray(raw, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        # ragged rows raise ValueError on conversion in recent numpy
        if "inhomogeneous" in str(exc) or "sequence" in str(exc):
            raise ShapeMismatch(f"rows have inconsistent shapes: {exc}") from None
        raise InvalidValue(f"input is not numeric: {exc}") from None
    if arr.dtype == object:
        raise ShapeMismatch("rows have inconsistent shapes")
    if arr.ndim >= 1 and arr.shape[0] < 4:
        raise TooFewObservations(
            f"need at least 4 observations, got {arr.shape[0] if arr.ndim else 0}"
        )
    return ObservationSeries(kind, arr)


def build_similarity_matrix(series: ObservationSeries, kernel: Kernel) -> SimilarityMatrix:
    """Pairwise similarity matrix, symmetrized as (s(i,j) + s(j,i)) / 2.

    ``kernel`` is either a KernelSpec or a callable s(x, y) -> float, which
    need not be symmetric; symmetrization is applied unconditionally (it is
    idempotent for the built-ins). The diagonal holds the kernel's
    self-similarity; moment sums exclude it downstream.
    """
    if isinstance(kernel, KernelSpec):
        raw = pairwise_similarity(kernel, series)
    else:
        n = series.n
        raw = np.empty((n, n))
        for i in range(n):
            for j in range(n):
                raw[i, j] = kernel(series.data[i], series.data[j])
        if not np.isfinite(raw).all():
            raise InvalidValue("user kernel produced NaN or infinite similarity")
    return SimilarityMatrix((raw + raw.T) / 2.0)


def build_weight_matrix(n: int, spec: WeightSpec) -> WeightMatrix:
    """Toeplitz matrix values[i][j] = w(|i-j|); zero diagonal since w(0)=0."""
    if n < 2:
        raise TooFewObservations(f"weight matrix needs n >= 2, got {n}")
    profile = weight_profile(spec, np.arange(n))
    return WeightMatrix(toeplitz(profile), spec)


def moment_summary(S: SimilarityMatrix, W: WeightMatrix) -> MomentSummary:
    """Off-diagonal sums feeding the permutation-null moment formulas.

        w1 = sum_{i != j} W_ij    w_row[i] = sum_{j != i} W_ij
        w2 = sum_{i != j} W_ij^2  w3 = sum_i w_row[i]^2

    and the same for S. numpy's pairwise-summation reductions keep the
    accumulated rounding error at the 1e-12 relative level required here.
    """
    if S.n != W.n:
        raise ShapeMismatch(f"dimension mismatch: S is {S.n}x{S.n}, W is {W.n}x{W.n}")
    so = S.values.copy()
    np.fill_diagonal(so, 0.0)
    s_row = so.sum(axis=1)
    # W's diagonal is zero by construction, so no masking needed
    w = W.values
    w_row = w.sum(axis=1)
    return MomentSummary(
        w1=float(w_row.sum()),
        w2=float((w * w).sum()),
        w3=float((w_row * w_row).sum()),
        w_row=w_row,
        s1=float(s_row.sum()),
        s2=float((so * so).sum()),
        s3=float((s_row * s_row).sum()),
        s_row=s_row,
    )
