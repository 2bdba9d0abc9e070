import numpy as np
import pytest

from wise.core import (
    build_similarity_matrix,
    build_weight_matrix,
    moment_summary,
    validate_series,
)
from wise.errors import (
    InvalidValue,
    NotAQuantile,
    ShapeMismatch,
    TooFewObservations,
)
from wise.kernels import gaussian, neg_l1
from wise.types import ObservationSeries, SimilarityMatrix, WeightMatrix
from wise.weights import cosine, default_weight, fourier, geometric, mixed


def test_validate_series_well_formed():
    rng = np.random.default_rng(0)
    series = validate_series(rng.standard_normal((50, 200)), "vector")
    assert series.n == 50
    assert series.p == 200


def test_validate_series_too_short():
    with pytest.raises(TooFewObservations):
        validate_series(np.zeros((3, 5)), "vector")


def test_validate_series_nan_rejected():
    data = np.zeros((5, 4))
    data[2, 1] = np.nan
    with pytest.raises(InvalidValue):
        validate_series(data, "vector")


def test_validate_series_ragged_rejected():
    with pytest.raises(ShapeMismatch):
        validate_series([[1.0, 2.0], [3.0], [4.0, 5.0], [6.0, 7.0]], "vector")


def test_validate_series_nonmonotone_quantile():
    data = np.tile(np.linspace(0, 1, 6), (4, 1))
    data[1, 3] = -5.0
    with pytest.raises(NotAQuantile):
        validate_series(data, "quantile")


def test_validate_series_matrix_kind():
    series = validate_series(np.zeros((4, 3, 2)), "matrix")
    assert series.rows == 3 and series.cols == 2


def test_similarity_two_point_example():
    series = ObservationSeries("vector", np.array([[0.0, 0.0], [3.0, 4.0]]))
    S = build_similarity_matrix(series, neg_l1())
    assert S.values[0, 1] == -7.0
    assert S.values[1, 0] == -7.0
    assert S.values[0, 0] == 0.0


def test_similarity_symmetrizes_user_kernel():
    rng = np.random.default_rng(1)
    series = ObservationSeries("vector", rng.standard_normal((6, 3)))

    def lopsided(x, y):
        return float(x[0] - 2.0 * y[0])

    S = build_similarity_matrix(series, lopsided)
    assert np.array_equal(S.values, S.values.T)
    want01 = (lopsided(series.data[0], series.data[1]) + lopsided(series.data[1], series.data[0])) / 2
    assert S.values[0, 1] == pytest.approx(want01, rel=1e-15)


def test_similarity_identical_observations():
    series = ObservationSeries("vector", np.ones((5, 3)))
    S = build_similarity_matrix(series, neg_l1())
    assert np.array_equal(S.values, np.zeros((5, 5)))


def test_similarity_diagonal_keeps_kernel_self_value():
    rng = np.random.default_rng(2)
    series = ObservationSeries("vector", rng.standard_normal((5, 3)))
    S = build_similarity_matrix(series, gaussian(1.5))
    assert np.array_equal(np.diag(S.values), np.ones(5))


def test_similarity_equivariant_under_reordering():
    rng = np.random.default_rng(3)
    data = rng.standard_normal((8, 4))
    perm = rng.permutation(8)
    S = build_similarity_matrix(ObservationSeries("vector", data), neg_l1())
    S_perm = build_similarity_matrix(ObservationSeries("vector", data[perm]), neg_l1())
    assert np.allclose(S_perm.values, S.values[np.ix_(perm, perm)], atol=0, rtol=1e-14)


def test_weight_matrix_default_first_row():
    W = build_weight_matrix(4, default_weight())
    assert np.array_equal(W.values[0], np.array([0.0, -0.5, -0.8, -0.9]))


def test_weight_matrix_geometric_entry():
    W = build_weight_matrix(4, geometric(0.5))
    assert W.values[0, 2] == -0.75


def test_weight_matrix_cosine_period():
    W = build_weight_matrix(5, cosine(4.0))
    assert W.values[0, 4] == pytest.approx(0.0, abs=1e-15)
    assert W.values[0, 2] == pytest.approx(-2.0, abs=1e-15)


@pytest.mark.parametrize(
    "spec",
    [default_weight(), geometric(0.5), cosine(3.0), fourier([(0.5, 4.0), (0.5, 6.0)]), mixed(0.5, 1.2, 7.0)],
    ids=lambda s: s.family,
)
@pytest.mark.parametrize("n", [2, 4, 9])
def test_weight_matrix_toeplitz_zero_diagonal(spec, n):
    W = build_weight_matrix(n, spec)
    assert np.array_equal(W.values, W.values.T)
    assert np.array_equal(np.diag(W.values), np.zeros(n))
    for i in range(n - 1):
        for j in range(n - 1):
            assert W.values[i, j] == W.values[i + 1, j + 1]


def test_weight_matrix_needs_two_points():
    with pytest.raises(TooFewObservations):
        build_weight_matrix(1, default_weight())


def test_moment_summary_default_weight_n4():
    S = SimilarityMatrix(np.zeros((4, 4)))
    W = build_weight_matrix(4, default_weight())
    M = moment_summary(S, W)
    assert M.w1 == -8.0
    assert M.w2 == pytest.approx(5.68, rel=1e-12)
    assert M.w3 == pytest.approx(16.16, rel=1e-12)


def test_moment_summary_single_pair():
    s = np.zeros((4, 4))
    s[0, 1] = s[1, 0] = 1.0
    M = moment_summary(SimilarityMatrix(s), build_weight_matrix(4, default_weight()))
    assert (M.s1, M.s2, M.s3) == (2.0, 2.0, 2.0)


def test_moment_summary_zero_field():
    M = moment_summary(SimilarityMatrix(np.zeros((5, 5))), build_weight_matrix(5, default_weight()))
    assert (M.s1, M.s2, M.s3) == (0.0, 0.0, 0.0)


def test_moment_summary_excludes_diagonal():
    # gaussian self-similarity sits on the diagonal and must not leak in
    rng = np.random.default_rng(4)
    series = ObservationSeries("vector", rng.standard_normal((6, 3)))
    S = build_similarity_matrix(series, gaussian(1.0))
    M = moment_summary(S, build_weight_matrix(6, default_weight()))
    off = ~np.eye(6, dtype=bool)
    assert M.s1 == pytest.approx(S.values[off].sum(), rel=1e-12)
    assert M.s2 == pytest.approx((S.values[off] ** 2).sum(), rel=1e-12)


def test_moment_summary_row_sum_identities():
    rng = np.random.default_rng(5)
    for _ in range(25):
        n = int(rng.integers(4, 12))
        a = rng.uniform(-1, 1, size=(n, n))
        S = SimilarityMatrix((a + a.T) / 2)
        M = moment_summary(S, build_weight_matrix(n, default_weight()))
        assert M.w1 == pytest.approx(M.w_row.sum(), rel=1e-12)
        assert M.s1 == pytest.approx(M.s_row.sum(), rel=1e-12)
        assert M.w3 == pytest.approx((M.w_row**2).sum(), rel=1e-12)
        assert M.s3 == pytest.approx((M.s_row**2).sum(), rel=1e-12)


def test_moment_summary_dimension_mismatch():
    with pytest.raises(ShapeMismatch):
        moment_summary(SimilarityMatrix(np.zeros((4, 4))), build_weight_matrix(5, default_weight()))


def test_similarity_matrix_requires_exact_symmetry():
    a = np.zeros((3, 3))
    a[0, 1] = 1e-9
    with pytest.raises(ShapeMismatch):
        SimilarityMatrix(a)


def test_weight_matrix_rejects_nonzero_diagonal():
    vals = np.zeros((3, 3))
    vals[1, 1] = 0.5
    with pytest.raises(InvalidValue):
        WeightMatrix(vals, default_weight())


def test_series_is_immutable():
    series = ObservationSeries("vector", np.zeros((4, 2)))
    with pytest.raises(ValueError):
        series.data[0, 0] = 1.0
