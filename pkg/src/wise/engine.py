"""Test statistic, exact permutation-null moments, and decision procedures.

The statistic aggregates the similarity field against lag weights,

    Z = sum_i sum_j w(|i-j|) S(X_i, X_j),

and is calibrated against the permutation null: the distribution of Z when
the series is re-indexed by a uniformly random permutation. Its mean and
variance under that null have closed forms in the off-diagonal sums
(w1, w2, w3, S1, S2, S3), so the standardized statistic

    Z_G = (Z - EZ) / sqrt(varZ)

can be compared to N(0, 1) without any resampling. A seeded Monte-Carlo
permutation test is available as a cross-check, and a Mahalanobis-type
statistic combines several weight choices into one test.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations as _all_permutations
from typing import Optional, Sequence, Tuple

import numpy as np
from numpy.random import SeedSequence, default_rng
from scipy.special import ndtr

from .core import build_similarity_matrix, build_weight_matrix, moment_summary
from .errors import (
    DegenerateVariance,
    InvalidValue,
    ShapeMismatch,
    TooFewObservations,
    TooLarge,
)
from .types import MomentSummary, ObservationSeries, SimilarityMatrix, WeightMatrix

SIDES = ("two_sided", "upper", "lower")

# relative threshold below which varZ is treated as exactly zero
_DEGENERATE_REL = 1e-12
# negative varZ beyond rounding noise means the moment formula was misfed
_CLAMP_REL = 1e-9


@dataclass(frozen=True)
class TestConfig:
    __test__ = False  # not a pytest class, despite the name

    alpha: float = 0.05
    method: str = "analytic"
    permutations: int = 1000
    seed: int = 0
    sidedness: str = "two_sided"

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise InvalidValue(f"alpha must lie in (0,1), got {self.alpha}")
        if self.method not in ("analytic", "permutation"):
            raise InvalidValue(f"method must be analytic or permutation, got {self.method!r}")
        if self.method == "permutation" and self.permutations < 100:
            raise InvalidValue(f"permutation method needs B >= 100, got {self.permutations}")
        if not 0 <= int(self.seed) < 2**64:
            raise InvalidValue("seed must be a 64-bit unsigned integer")
        if self.sidedness not in SIDES:
            raise InvalidValue(f"sidedness must be one of {SIDES}, got {self.sidedness!r}")


@dataclass(frozen=True)
class DiagnosticsReport:
    """Observable surrogates for the normal-approximation conditions.

    ratio1..ratio3 are the three centered-similarity ratios whose smallness
    underwrites the N(0,1) limit of Z_G; values above 1 trigger warnings.
    alignment = tr(W-centered^T S)/sqrt(n) measures how strongly the weight
    pattern lines up with the observed similarity field (near 0 under
    independence, diverging under matched dependence).
    """

    ratio1: float
    ratio2: float
    ratio3: float
    alignment: float
    warnings: Tuple[str, ...] = ()

    def to_json_obj(self) -> dict:
        return {
            "ratio1": _json_real(self.ratio1),
            "ratio2": _json_real(self.ratio2),
            "ratio3": _json_real(self.ratio3),
            "alignment": _json_real(self.alignment),
            "warnings": list(self.warnings),
        }


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class, despite the name

    z: float
    e_z: float
    var_z: float
    z_g: float
    p_value: float
    reject: bool
    alpha: float
    method: str
    diagnostics: DiagnosticsReport

    def to_json_obj(self) -> dict:
        return {
            "z": _json_real(self.z),
            "e_z": _json_real(self.e_z),
            "var_z": _json_real(self.var_z),
            "z_g": _json_real(self.z_g),
            "p_value": _json_real(self.p_value),
            "reject": bool(self.reject),
            "alpha": float(self.alpha),
            "method": self.method,
            "diagnostics": self.diagnostics.to_json_obj(),
        }


def _json_real(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def compute_z(S: SimilarityMatrix, W: WeightMatrix) -> float:
    """Z = sum_ij W_ij S_ij; the diagonal contributes nothing since w(0)=0."""
    if S.n != W.n:
        raise ShapeMismatch(f"dimension mismatch: S is {S.n}x{S.n}, W is {W.n}x{W.n}")
    return float((W.values * S.values).sum())


def _raw_moments(M: MomentSummary, n: int) -> Tuple[float, float, bool]:
    """(EZ, varZ, clamped) from the closed-form permutation-null moments."""
    if n < 4:
        raise TooFewObservations(f"closed-form variance needs n >= 4, got n={n}")
    if M.n != n:
        raise ShapeMismatch(f"summary is for n={M.n}, got n={n}")
    w1, w2, w3 = M.w1, M.w2, M.w3
    s1, s2, s3 = M.s1, M.s2, M.s3
    ez = w1 * s1 / (n * (n - 1))
    dw3 = w3 - w1 * w1 / n
    ds3 = s3 - s1 * s1 / n
    dw2 = w2 - w1 * w1 / (n * (n - 1))
    ds2 = s2 - s1 * s1 / (n * (n - 1))
    t1 = 4.0 * (n + 1) * dw3 * ds3 / (n * (n - 1) * (n - 2) * (n - 3))
    t2 = 2.0 * dw2 * ds2 / (n * (n - 3))
    t3 = -4.0 * dw2 * ds3 / (n * (n - 2) * (n - 3))
    t4 = -4.0 * dw3 * ds2 / (n * (n - 2) * (n - 3))
    var = t1 + t2 + t3 + t4
    clamped = False
    if var < 0.0:
        scale = abs(t1) + abs(t2) + abs(t3) + abs(t4)
        if var >= -_CLAMP_REL * scale:
            var = 0.0
            clamped = True
        else:
            raise InvalidValue(
                f"variance formula produced {var}, far below rounding tolerance"
            )
    return ez, var, clamped


def permutation_moments(M: MomentSummary, n: int) -> Tuple[float, float]:
    """Exact mean and variance of Z under uniformly random re-indexing.

    Tiny negative variances (rounding residue of the four-term formula) are
    clamped to 0.
    """
    ez, var, _ = _raw_moments(M, n)
    return ez, var


def enumerate_moments(S: SimilarityMatrix, W: WeightMatrix) -> Tuple[float, float]:
    """Brute-force moments over all n! permutations; oracle for small n."""
    if S.n != W.n:
        raise ShapeMismatch(f"dimension mismatch: S is {S.n}x{S.n}, W is {W.n}x{W.n}")
    n = S.n
    if n > 8:
        raise TooLarge(f"exhaustive enumeration is limited to n <= 8, got n={n}")
    perms = np.array(list(_all_permutations(range(n))), dtype=np.intp)
    gathered = S.values[perms[:, :, None], perms[:, None, :]]
    zs = np.einsum("ij,bij->b", W.values, gathered)
    return float(zs.mean()), float(zs.var())


def _permuted_z(
    s_values: np.ndarray, w_stack: np.ndarray, B: int, seed: int, chunk: int = 256
) -> np.ndarray:
    """Z for B seeded random permutations, one row per draw.

    Permutation b is generated from the seed pair (seed, b), so the stream
    does not depend on chunking or thread count.
    """
    n = s_values.shape[0]
    out = np.empty((B, w_stack.shape[0]))
    for start in range(0, B, chunk):
        stop = min(start + chunk, B)
        perms = np.stack(
            [default_rng(SeedSequence((seed, b))).permutation(n) for b in range(start, stop)]
        )
        gathered = s_values[perms[:, :, None], perms[:, None, :]]
        out[start:stop] = np.einsum("kij,bij->bk", w_stack, gathered)
    return out


def regularity_diagnostics(S: SimilarityMatrix, W: WeightMatrix) -> DiagnosticsReport:
    """Centered-similarity ratios plus the weight/similarity alignment.

    Centering subtracts the off-diagonal mean (S1/(n(n-1)) and likewise for
    w) from the off-diagonal entries. With Xt the centered matrix,

        ratio1 = n max(Xt)^2 / sum(Xt^2)
        ratio2 = max_i (sum_j |Xt_ij|)^2 / (n sum(Xt^2))
        ratio3 = sum_i (sum_j |Xt_ij|)^2 / (n sum(Xt^2))

    all three must vanish asymptotically for the normal approximation to be
    trustworthy; warnings fire on the heuristic threshold 1. alignment is
    tr(Wt^T S)/sqrt(n) with Wt centered and S raw.
    """
    if S.n != W.n:
        raise ShapeMismatch(f"dimension mismatch: S is {S.n}x{S.n}, W is {W.n}x{W.n}")
    n = S.n
    if n < 4:
        raise TooFewObservations(f"diagnostics need n >= 4, got n={n}")
    off = ~np.eye(n, dtype=bool)
    st = S.values.copy()
    st[off] -= st[off].sum() / (n * (n - 1))
    wt = W.values.copy()
    wt[off] -= wt[off].sum() / (n * (n - 1))
    s2p = float((st * st).sum())
    if s2p == 0.0:
        raise DegenerateVariance("centered similarity field is identically zero")
    abs_rows = np.abs(st).sum(axis=1)
    s0p = float(np.abs(st).max())
    s1p = float(abs_rows.max())
    s3p = float((abs_rows * abs_rows).sum())
    ratio1 = n * s0p * s0p / s2p
    ratio2 = s1p * s1p / (n * s2p)
    ratio3 = s3p / (n * s2p)
    alignment = float(np.einsum("ij,ij->", wt, S.values)) / math.sqrt(n)
    warnings = tuple(
        f"regularity {name} = {value:.4g} exceeds 1; "
        "the normal approximation may be unreliable"
        for name, value in (("ratio1", ratio1), ("ratio2", ratio2), ("ratio3", ratio3))
        if value > 1.0
    )
    return DiagnosticsReport(ratio1, ratio2, ratio3, alignment, warnings)


def rearrangement_bounds(S: SimilarityMatrix, W: WeightMatrix) -> Tuple[float, float]:
    """Extremal values of Z over all joint re-labelings of the series.

    Sorting all n^2 entries of W and S and pairing them in matched order
    maximizes the sum; opposed order minimizes it. Every permuted Z lies in
    between.
    """
    if S.n != W.n:
        raise ShapeMismatch(f"dimension mismatch: S is {S.n}x{S.n}, W is {W.n}x{W.n}")
    ws = np.sort(W.values, axis=None)
    ss = np.sort(S.values, axis=None)
    upper = float(np.sum(ws * ss))
    lower = float(np.sum(ws * ss[::-1]))
    return lower, upper


def _diagnostics_or_degenerate(S, W) -> Tuple[DiagnosticsReport, bool]:
    try:
        return regularity_diagnostics(S, W), False
    except DegenerateVariance:
        nan = float("nan")
        n = S.n
        off = ~np.eye(n, dtype=bool)
        wt = W.values.copy()
        wt[off] -= wt[off].sum() / (n * (n - 1))
        alignment = float(np.einsum("ij,ij->", wt, S.values)) / math.sqrt(n)
        report = DiagnosticsReport(
            nan,
            nan,
            nan,
            alignment,
            ("centered similarity field is identically zero",),
        )
        return report, True


def run_test(
    series: ObservationSeries,
    kernel,
    weight_spec,
    config: Optional[TestConfig] = None,
) -> TestResult:
    """Full test: similarity matrix, null moments, p-value, diagnostics.

    With a degenerate null (constant similarity field) the result carries
    p = 1 and a warning instead of raising: a field with no variation holds
    no evidence against independence.
    """
    if config is None:
        config = TestConfig()
    n = series.n
    if n < 4:
        raise TooFewObservations(f"the test needs n >= 4 observations, got n={n}")
    S = build_similarity_matrix(series, kernel)
    W = build_weight_matrix(n, weight_spec)
    M = moment_summary(S, W)
    z = compute_z(S, W)
    ez, var, clamped = _raw_moments(M, n)
    diagnostics, degenerate_field = _diagnostics_or_degenerate(S, W)
    extra = list(diagnostics.warnings)
    if clamped:
        extra.append("variance formula returned a tiny negative value; clamped to 0")

    degenerate = var <= _DEGENERATE_REL * M.w2 * M.s2
    if degenerate:
        if not degenerate_field:
            extra.append("permutation variance is degenerate; reporting p = 1")
        diagnostics = DiagnosticsReport(
            diagnostics.ratio1,
            diagnostics.ratio2,
            diagnostics.ratio3,
            diagnostics.alignment,
            tuple(extra),
        )
        return TestResult(
            z=z,
            e_z=ez,
            var_z=0.0 if var < 0 else var,
            z_g=0.0,
            p_value=1.0,
            reject=False,
            alpha=config.alpha,
            method=config.method,
            diagnostics=diagnostics,
        )

    z_g = (z - ez) / math.sqrt(var)
    if config.method == "analytic":
        if config.sidedness == "two_sided":
            p = float(2.0 * ndtr(-abs(z_g)))
        elif config.sidedness == "upper":
            p = float(ndtr(-z_g))
        else:
            p = float(ndtr(z_g))
    else:
        zs = _permuted_z(S.values, W.values[None, :, :], config.permutations, config.seed)[:, 0]
        if config.sidedness == "two_sided":
            count = int(np.sum(np.abs(zs - ez) >= abs(z - ez)))
        elif config.sidedness == "upper":
            count = int(np.sum(zs >= z))
        else:
            count = int(np.sum(zs <= z))
        p = (1.0 + count) / (config.permutations + 1.0)

    diagnostics = DiagnosticsReport(
        diagnostics.ratio1,
        diagnostics.ratio2,
        diagnostics.ratio3,
        diagnostics.alignment,
        tuple(extra),
    )
    return TestResult(
        z=z,
        e_z=ez,
        var_z=var,
        z_g=z_g,
        p_value=p,
        reject=bool(p < config.alpha),
        alpha=config.alpha,
        method=config.method,
        diagnostics=diagnostics,
    )


def mahalanobis_aggregate(
    series: ObservationSeries,
    kernel,
    weight_specs: Sequence,
    B: int = 1000,
    seed: int = 0,
) -> Tuple[float, float]:
    """Combine several weight choices into one Mahalanobis-type statistic.

    The coordinates Z_1..Z_m share one similarity matrix; their means come
    from the closed-form null moments and their covariance from B shared
    random permutations (the same permutation is applied to every
    coordinate). The p-value is the permutation tail of M over those draws.
    """
    m = len(weight_specs)
    if m < 2:
        raise InvalidValue(f"need at least 2 weight specs, got {m}")
    if B < 500:
        raise InvalidValue(f"need at least 500 permutations, got {B}")
    n = series.n
    if n < 4:
        raise TooFewObservations(f"the test needs n >= 4 observations, got n={n}")
    S = build_similarity_matrix(series, kernel)
    ws = [build_weight_matrix(n, spec) for spec in weight_specs]
    w_stack = np.stack([w.values for w in ws])
    mu = np.array([permutation_moments(moment_summary(S, w), n)[0] for w in ws])
    z_obs = np.einsum("kij,ij->k", w_stack, S.values)
    z_perm = _permuted_z(S.values, w_stack, B, seed)
    sigma = np.cov(z_perm, rowvar=False, ddof=1)
    sigma = sigma + 1e-8 * (np.trace(sigma) / m) * np.eye(m)
    try:
        d_obs = z_obs - mu
        m_obs = float(d_obs @ np.linalg.solve(sigma, d_obs))
        d_perm = z_perm - mu
        m_perm = np.einsum("bk,kb->b", d_perm, np.linalg.solve(sigma, d_perm.T))
    except np.linalg.LinAlgError:
        raise DegenerateVariance(
            "permutation covariance is singular even after regularization"
        ) from None
    if not math.isfinite(m_obs) or not np.isfinite(m_perm).all():
        raise DegenerateVariance("Mahalanobis statistic is not finite")
    p = (1.0 + int(np.sum(m_perm >= m_obs))) / (B + 1.0)
    return m_obs, float(p)
