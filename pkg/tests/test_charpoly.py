import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from krylovkalman import (
    DenseMatrix,
    Permutation,
    Polynomial,
    PrimeField,
    apply_permutation,
    charpoly_kg,
    charpoly_of_hessenberg,
    compressed_krylov_kg,
    oracle_charpoly,
    poly_mul,
    recover_hessenberg,
)
from krylovkalman.charpoly import HessenbergPolycyclic
from krylovkalman.errors import FieldTooSmall, InconsistentInput
from families import pair_family
from oracles import inverse_py, matmul_py


def poly(coeffs, p):
    return Polynomial(tuple(coeffs), PrimeField(p))


def companion(coeffs, F):
    """Companion of x^d + c_{d-1} x^{d-1} + ... + c_0 (coeffs ascending, monic dropped)."""
    d = len(coeffs)
    a = np.zeros((d, d), dtype=np.int64)
    a[np.arange(1, d), np.arange(d - 1)] = 1
    a[:, -1] = [-c for c in coeffs]
    return DenseMatrix(a, F)


def test_polynomial_basics(gf5):
    f = poly([1, 2, 3], 5)
    assert poly_mul(f, poly([1], 5)) == f
    assert poly_mul(poly([1, 1], 5), poly([-1, 1], 5)).coeffs == (4, 0, 1)
    assert (Polynomial.monomial(2, gf5) * Polynomial.monomial(3, gf5)) == Polynomial.monomial(5, gf5)
    assert poly([0, 0, 0], 5).coeffs == () and poly([3, 0, 0], 5).degree == 0
    assert f(2) == (1 + 4 + 12) % 5


def test_one_by_one(gf7):
    A = DenseMatrix([[2]], gf7)
    H = recover_hessenberg(compressed_krylov_kg(A, DenseMatrix([[1]], gf7)), A)
    assert H.expand() == A


def test_swap(gf7):
    A = DenseMatrix([[0, 1], [1, 0]], gf7)
    ck = compressed_krylov_kg(A, DenseMatrix([[1], [0]], gf7))
    H = recover_hessenberg(ck, A)
    assert H.expand() == A and H.tail_columns == ((1, 0),)
    assert charpoly_of_hessenberg(H).coeffs == (6, 0, 1)


def test_two_block_instance(gf7):
    # A = diag(J2, 3) with J2 the 2x2 shift, B = [e1 | e3]
    A = DenseMatrix([[0, 0, 0], [1, 0, 0], [0, 0, 3]], gf7)
    B = DenseMatrix([[1, 0], [0, 0], [0, 1]], gf7)
    ck = compressed_krylov_kg(A, B)
    H = recover_hessenberg(ck, A)
    assert H.block_degrees == (2, 1)
    V = ck.V.tolist()
    brute = matmul_py(inverse_py(V, 7), matmul_py(A.tolist(), V, 7), 7)
    assert H.expand().tolist() == brute == [[0, 0, 0], [1, 0, 0], [0, 0, 3]]
    f = charpoly_of_hessenberg(H)
    assert f.coeffs == (0, 0, 4, 1)  # x^2 (x - 3)
    assert f == oracle_charpoly(A)


def test_coupled_blocks_match_brute_force(rng):
    F = PrimeField(101)
    for A, B in pair_family(11, 40, [101], 8, 3):
        ck = compressed_krylov_kg(A, B)
        if ck.r != ck.n:
            continue
        V = ck.V.tolist()
        brute = matmul_py(inverse_py(V, 101), matmul_py(A.tolist(), V, 101), 101)
        assert recover_hessenberg(ck, A).expand().tolist() == brute


def test_charpoly_of_hessenberg_examples():
    F = PrimeField(7)
    assert charpoly_of_hessenberg(HessenbergPolycyclic((2,), ((1, 0),), F)).coeffs == (6, 0, 1)
    two = HessenbergPolycyclic((1, 1), ((3,), (5, 4)), F)
    assert charpoly_of_hessenberg(two) == poly([-3, 1], 7) * poly([-4, 1], 7)


def test_charpoly_companion_and_diagonal():
    F = PrimeField(101)
    f = [5, 0, 17, 3]
    assert charpoly_kg(companion(f, F)).coeffs == tuple(f) + (1,)
    lam = [2, 7, 11, 50]
    D = DenseMatrix(np.diag(lam), F)
    expect = Polynomial((1,), F)
    for x in lam:
        expect = expect * poly([-x, 1], 101)
    assert charpoly_kg(D) == expect


def test_oracle_examples(gf7):
    assert oracle_charpoly(DenseMatrix.zeros(4, 4, PrimeField(7))) == Polynomial.monomial(4, gf7)
    assert oracle_charpoly(DenseMatrix.identity(3, gf7)).coeffs == (6, 3, 4, 1)
    with pytest.raises(FieldTooSmall):
        oracle_charpoly(DenseMatrix.zeros(8, 8, gf7))


def test_random_8x8(rng):
    F = PrimeField(101)
    for _ in range(50):
        A = DenseMatrix.random(8, 8, F, rng)
        assert charpoly_kg(A) == oracle_charpoly(A)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([101, 65521]), st.integers(0, 16), st.integers(0, 2**32 - 1))
def test_charpoly_properties(p, n, seed):
    F = PrimeField(p)
    r = np.random.default_rng(seed)
    A = DenseMatrix.random(n, n, F, r)
    if seed % 2:
        A = DenseMatrix(np.diag(r.integers(0, 3, n)), F, shape=(n, n))
    f = charpoly_kg(A)
    assert f == oracle_charpoly(A)
    assert f.degree == n and f.is_monic
    P = Permutation(tuple(r.permutation(n)))
    conj = apply_permutation(apply_permutation(A, P, "rows"), P, "cols")
    assert charpoly_kg(conj) == f


def test_similarity_identity_on_families():
    for A, B in pair_family(5, 80, [5, 7, 101], 10, 3):
        ck = compressed_krylov_kg(A, B)
        H = recover_hessenberg(ck, A)
        assert A @ ck.V == ck.V @ H.expand()
        assert charpoly_of_hessenberg(H).degree == sum(H.block_degrees) == ck.r


def test_inconsistent_input(gf7):
    A = DenseMatrix([[0, 0], [1, 0]], gf7)
    ck = compressed_krylov_kg(DenseMatrix.zeros(2, 2, gf7), DenseMatrix([[1], [0]], gf7))
    with pytest.raises(InconsistentInput):
        recover_hessenberg(ck, A)
