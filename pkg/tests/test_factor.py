import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from krylovkalman import DenseMatrix, PrimeField, col_reduced_form, dependency_coefficients, lup, matmul, solve_triangular
from krylovkalman.densemat import Permutation
from krylovkalman.errors import NotADependentRow, SingularDiagonal
from krylovkalman.factor import IncrementalLup, determinant, inverse, solve
from oracles import brute_force_combination, greedy_columns, inverse_py, rank_py, reduce_rows


def rank_deficient(rows, cols, rank, field, rng):
    if rank == 0:
        return DenseMatrix.zeros(rows, cols, field)
    return matmul(DenseMatrix.random(rows, rank, field, rng), DenseMatrix.random(rank, cols, field, rng))


def check_factorization(M):
    f = lup(M)
    p = M.p
    assert matmul(f.L, f.U) == M
    assert f.rank == rank_py(M.tolist(), p)
    assert list(f.row_select) == reduce_rows(M.tolist(), p)
    Ls = f.L[list(f.row_select)]
    assert Ls.shape == (f.rank, f.rank)
    assert np.array_equal(np.triu(Ls.array, 1), np.zeros_like(Ls.array))
    assert np.all(np.diagonal(Ls.array) == 1)
    U1 = f.U1.array
    assert np.array_equal(np.tril(U1, -1), np.zeros_like(U1))
    assert np.all(np.diagonal(U1) != 0)
    return f


def test_identity(gf7):
    f = check_factorization(DenseMatrix.identity(4, gf7))
    assert f.rank == 4 and f.row_select == (0, 1, 2, 3)
    assert f.L == DenseMatrix.identity(4, gf7) and f.U1 == DenseMatrix.identity(4, gf7)
    assert f.P.is_identity()


def test_zero_matrix(gf7):
    f = lup(DenseMatrix.zeros(3, 4, gf7))
    assert f.rank == 0 and f.row_select == ()
    assert f.L.shape == (3, 0) and f.U.shape == (0, 4)


def test_antidiagonal(gf7):
    M = DenseMatrix([[0, 1], [1, 0]], gf7)
    f = check_factorization(M)
    assert f.rank == 2 and f.P.images == (1, 0)


def test_empty_shapes(gf7):
    for shape in ((0, 0), (0, 3), (3, 0)):
        f = lup(DenseMatrix.zeros(*shape, gf7))
        assert f.rank == 0
        assert matmul(f.L, f.U).shape == shape


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([3, 5, 7, 101]), st.integers(0, 12), st.integers(0, 12), st.integers(0, 12), st.integers(0, 2**32 - 1))
def test_reconstruction_and_greedy(p, a, b, k, seed):
    F = PrimeField(p)
    rng = np.random.default_rng(seed)
    M = rank_deficient(a, b, min(k, a, b), F, rng)
    if seed % 3 == 0 and a > 1:
        # duplicate rows make the dependent-row bookkeeping do real work
        arr = M.array.copy()
        arr[a - 1] = arr[0]
        M = DenseMatrix(arr, F)
    check_factorization(M)


def test_greedy_rank_steps(rng):
    F = PrimeField(5)
    M = rank_deficient(10, 6, 4, F, rng)
    f = lup(M)
    rows = M.tolist()
    for i in range(M.rows):
        step = rank_py(rows[: i + 1], 5) - rank_py(rows[:i], 5)
        assert step == (1 if i in f.row_select else 0)


def test_col_reduced_form_examples(gf5, gf7, rng):
    I = DenseMatrix.identity(4, gf7)
    assert col_reduced_form(I) == (I, [0, 1, 2, 3])
    v = np.array([1, 2, 3])
    w = np.array([0, 1, 0])
    M = DenseMatrix(np.stack([v, 2 * v, w], 1), gf5)
    Mp, idx = col_reduced_form(M)
    assert idx == [0, 2]
    assert Mp == M[:, [0, 2]]


def test_col_reduced_form_random_matches_scan(rng):
    F = PrimeField(7)
    for _ in range(20):
        M = rank_deficient(6, 9, 4, F, rng)
        Mp, idx = col_reduced_form(M)
        assert idx == greedy_columns(M.tolist(), 7)
        assert rank_py(Mp.tolist(), 7) == len(idx) == rank_py(M.tolist(), 7)


def test_solve_triangular_examples(gf5):
    L = DenseMatrix([[1, 0], [2, 1]], gf5)
    z = solve_triangular(L, DenseMatrix([[3], [2]], gf5), "unitLower")
    assert z.tolist() == [[3], [1]]
    rhs = DenseMatrix([[1, 2], [3, 4]], gf5)
    assert solve_triangular(DenseMatrix.identity(2, gf5), rhs, "upper") == rhs


@pytest.mark.parametrize("shape", ["unitLower", "upper"])
@pytest.mark.parametrize("side", ["left", "right"])
@pytest.mark.parametrize("transposed", [False, True])
def test_solve_triangular_round_trip(shape, side, transposed, rng):
    F = PrimeField(101)
    n = 7
    T = DenseMatrix.random(n, n, F, rng).array
    if shape == "unitLower":
        T = np.tril(T, -1) + np.eye(n, dtype=np.int64)
    else:
        T = np.triu(T)
        T[np.diag_indices(n)] = rng.integers(1, 101, n)
    T = DenseMatrix(T, F)
    op = T.T if transposed else T
    Z = DenseMatrix.random(n, 3, F, rng) if side == "left" else DenseMatrix.random(3, n, F, rng)
    rhs = op @ Z if side == "left" else Z @ op
    assert solve_triangular(T, rhs, shape, side, transposed) == Z


def test_singular_diagonal(gf7):
    with pytest.raises(SingularDiagonal):
        solve_triangular(DenseMatrix([[1, 1], [0, 0]], gf7), DenseMatrix([[1], [1]], gf7), "upper")


def test_dependency_coefficients_examples(gf5):
    M = DenseMatrix([[1, 0], [0, 1], [1, 2]], gf5)
    f = lup(M)
    assert dependency_coefficients(f, M, 2) == [1, 2]
    D = DenseMatrix([[1, 0], [1, 0]], gf5)
    assert dependency_coefficients(lup(D), D, 1) == [1]
    with pytest.raises(NotADependentRow):
        dependency_coefficients(f, M, 0)


def test_dependency_coefficients_brute_force(rng):
    F = PrimeField(5)
    for _ in range(10):
        M = rank_deficient(5, 5, 3, F, rng)
        f = lup(M)
        rows = M.tolist()
        for i in range(5):
            if i in f.row_select:
                continue
            above = [rows[s] for s in f.row_select if s < i]
            c = dependency_coefficients(f, M, i)
            # selected rows are independent, so the combination is unique
            assert brute_force_combination(rows[i], above, 5) == [c]


def test_determinant_inverse_solve(rng):
    F = PrimeField(101)
    M = DenseMatrix.random(6, 6, F, rng)
    while determinant(M) == 0:
        M = DenseMatrix.random(6, 6, F, rng)
    assert inverse(M).tolist() == inverse_py(M.tolist(), 101)
    rhs = DenseMatrix.random(6, 2, F, rng)
    assert M @ solve(M, rhs) == rhs
    P = Permutation.swap(3, 0, 2)
    assert determinant(P.matrix(F)) == 100
    assert determinant(DenseMatrix([[1, 2], [2, 4]], F)) == 0


def test_incremental_matches_lup(rng):
    F = PrimeField(7)
    M = rank_deficient(9, 6, 4, F, rng)
    inc = IncrementalLup(6, F)
    flags = [inc.add_row(row) for row in M.array]
    a, b = inc.factorization(), lup(M)
    assert [i for i, f in enumerate(flags) if f] == list(b.row_select)
    assert a == b
