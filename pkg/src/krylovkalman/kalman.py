"""Kalman controllability decomposition of a pair (A, B) over GF(p).

Every routine returns a :class:`KalmanForm` ``(r, T, H, X, Y, B1)`` with

    T^-1 A T = [[H, X], [0, Y]],    T^-1 B = [[B1], [0]],

``r`` being the dimension of the controllable subspace.

* :func:`kalman_kg` completes the Keller-Gehrig Krylov basis with unit
  vectors and reads X, Y, B1 off triangular solves with the factorization
  already computed for the basis.
* :func:`kalman_luk` grows one Krylov block at a time with matrix-vector
  products and recurses on the Schur complement of the part not yet reached.
* :func:`naive_kalman` conjugates by an explicitly inverted T; test oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .densemat import DenseMatrix, Permutation, apply_permutation, block, mul, mul_mod
from .errors import DimensionMismatch
from .factor import (
    IncrementalLup,
    LupFactorization,
    col_reduced_form,
    dependency_coefficients,
    inverse,
    rank,
    solve,
    solve_triangular,
)
from .charpoly import HessenbergPolycyclic, recover_hessenberg
from .krylov import CompressedKrylov, compressed_krylov_kg, naive_compressed_krylov, ORACLE_SIZE_CAP


@dataclass(frozen=True)
class KalmanForm:
    r: int
    T: DenseMatrix
    H: DenseMatrix
    X: DenseMatrix
    Y: DenseMatrix
    B1: DenseMatrix
    degrees: tuple[int, ...] = ()
    algorithm: str = "kg"

    @property
    def blocks(self) -> tuple[int, ...]:
        """Sizes of the companion blocks on the diagonal of ``H``."""
        return tuple(d for d in self.degrees if d)

    @property
    def is_trivial(self) -> bool:
        """Fully controllable form returned as ``(n, I, A, -, -, B)``."""
        return self.r == self.T.rows and self.T.is_identity()


def _check_pair(A: DenseMatrix, B: DenseMatrix):
    if A.rows != A.cols:
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    if B.rows != A.rows:
        raise DimensionMismatch(f"B has {B.rows} rows, expected {A.rows}")
    if A.field != B.field:
        raise DimensionMismatch(f"A over {A.field!r}, B over {B.field!r}")


def _trivial(A: DenseMatrix, B: DenseMatrix, degrees, algorithm: str) -> KalmanForm:
    n, F = A.rows, A.field
    return KalmanForm(
        n,
        DenseMatrix.identity(n, F),
        A,
        DenseMatrix.zeros(n, 0, F),
        DenseMatrix.zeros(0, 0, F),
        B,
        tuple(degrees),
        algorithm,
    )


def _completion(perm: Permutation, r: int, field) -> DenseMatrix:
    """``P.T [0; I_{n-r}]``: unit vectors on the non-pivot coordinates."""
    n = perm.size
    E = np.zeros((n, n - r), dtype=np.int64)
    E[list(perm.images[r:]), np.arange(n - r)] = 1
    return DenseMatrix._wrap(E, field)


def complete_basis(ck: CompressedKrylov) -> tuple[DenseMatrix, Permutation]:
    """Extend the Krylov basis ``V`` to a nonsingular ``T = [V | P.T [0; I]]``."""
    P = ck.vt_fact.P
    if ck.r == ck.n:
        return ck.V, P
    return block([[ck.V, _completion(P, ck.r, ck.V.field)]]), P


def _schur_parts(A: DenseMatrix, fact: LupFactorization):
    """For ``K.T = L [U1 | U2] P`` return ``(L^-T U1^-T A'12, A'22 - U2^T U1^-T A'12)``
    where ``A' = P A P.T``."""
    r = fact.rank
    Ap = apply_permutation(apply_permutation(A, fact.P, "rows"), fact.P, "cols")
    Z = solve_triangular(fact.U1, Ap[:r, r:], "upper", transposed=True)
    X = solve_triangular(fact.L, Z, "unitLower", transposed=True)
    Y = Ap[r:, r:] - mul(fact.U2.T, Z)
    return X, Y


def _transform_b(B: DenseMatrix, fact: LupFactorization) -> tuple[DenseMatrix, DenseMatrix]:
    """Top and bottom parts of ``T^-1 B`` for ``T = [K | P.T [0; I]]``."""
    r = fact.rank
    PB = apply_permutation(B, fact.P, "rows")
    top = solve_triangular(fact.U1, PB[:r], "upper", transposed=True)
    bottom = PB[r:] - mul(fact.U2.T, top)
    return solve_triangular(fact.L, top, "unitLower", transposed=True), bottom


def kalman_kg(A: DenseMatrix, B: DenseMatrix, normalize: bool = False) -> KalmanForm:
    """Kalman form from the Keller-Gehrig compressed Krylov matrix.

    When the pair is controllable the input is returned unchanged as
    ``(n, I, A, -, -, B)`` unless ``normalize`` asks for the polycyclic ``H``.
    """
    _check_pair(A, B)
    ck = compressed_krylov_kg(A, B)
    if ck.r == ck.n and not normalize:
        return _trivial(A, B, ck.degrees, "kg")
    return kalman_from_krylov(A, B, ck, "kg")


def kalman_from_krylov(A: DenseMatrix, B: DenseMatrix, ck: CompressedKrylov, algorithm: str = "kg") -> KalmanForm:
    fact = ck.vt_fact
    T, _ = complete_basis(ck)
    X, Y = _schur_parts(A, fact)
    B1, bottom = _transform_b(B, fact)
    if not bottom.is_zero():
        raise AssertionError("columns of B escape the Krylov basis")
    H = recover_hessenberg(ck, A).expand()
    return KalmanForm(ck.r, T, H, X, Y, B1, ck.degrees, algorithm)


def _companion(coeffs: Sequence[int], field) -> DenseMatrix:
    d = len(coeffs)
    return HessenbergPolycyclic((d,), (tuple(coeffs),), field).expand()


def _krylov_block(A: DenseMatrix, v: np.ndarray) -> tuple[np.ndarray, LupFactorization, list[int]]:
    """Iterates ``v, Av, ...`` up to the first dependent one.

    Returns the independent iterates as columns, the factorization of their
    transpose and the coefficients of the dependent iterate in them.
    """
    n, p = A.rows, A.p
    ech = IncrementalLup(n, A.field)
    rows = []
    u = v
    while True:
        rows.append(u)
        if not ech.add_row(u):
            break
        u = mul_mod(A.array, u[:, None], p)[:, 0]
    fact = ech.factorization()
    Kt = DenseMatrix._wrap(np.array(rows, dtype=np.int64), A.field)
    coeffs = dependency_coefficients(fact, Kt, len(rows) - 1)
    K = np.array(rows[:-1], dtype=np.int64).T.reshape(n, len(rows) - 1)
    return K, fact.selected(), coeffs


def _luk(A: DenseMatrix, B: DenseMatrix, allow_trivial: bool) -> KalmanForm:
    n, m = B.shape
    F = A.field
    nonzero = [j for j in range(m) if B.array[:, j].any()]
    if not nonzero:
        return KalmanForm(
            0, DenseMatrix.identity(n, F), DenseMatrix.zeros(0, 0, F), DenseMatrix.zeros(0, n, F), A,
            DenseMatrix.zeros(0, m, F), (), "luk",
        )
    K, fact, coeffs = _krylov_block(A, B.array[:, nonzero[0]].copy())
    r1 = fact.rank
    if r1 == n and allow_trivial:
        return _trivial(A, B, (n,), "luk")
    Cf = _companion(coeffs, F)
    X1, AR = _schur_parts(A, fact)
    Btop, Bbot = _transform_b(B, fact)
    Km = DenseMatrix._wrap(K, F)
    # stable partition: columns still reaching the residual system form Z
    zcols = [j for j in range(m) if Bbot.array[:, j].any()]
    if not zcols:
        T = block([[Km, _completion(fact.P, r1, F)]]) if r1 < n else Km
        return KalmanForm(r1, T, Cf, X1, AR, Btop, (r1,), "luk")

    sub = _luk(AR, Bbot[:, zcols], allow_trivial=False)
    r2 = sub.r
    lifted = np.zeros((n, n - r1), dtype=np.int64)
    lifted[list(fact.P.images[r1:]), :] = sub.T.array
    T = block([[Km, DenseMatrix._wrap(lifted, F)]])
    J = mul(X1, sub.T)
    H = block([[Cf, J[:, :r2]], [0, sub.H]])
    X = block([[J[:, r2:]], [sub.X]])
    B1_low = np.zeros((r2, m), dtype=np.int64)
    B1_low[:, zcols] = sub.B1.array
    B1 = block([[Btop], [DenseMatrix._wrap(B1_low, F)]])
    return KalmanForm(r1 + r2, T, H, X, sub.Y, B1, (r1,) + sub.degrees, "luk")


def kalman_luk(A: DenseMatrix, B: DenseMatrix, normalize: bool = False) -> KalmanForm:
    """Kalman form by the recursive LU-Krylov scheme.

    Only the top-level call may take the controllable shortcut
    ``(n, I, A, -, -, B)``; recursive calls always build the companion block,
    so ``H`` stays block upper triangular with companion diagonal blocks.
    """
    _check_pair(A, B)
    return _luk(A, B, allow_trivial=not normalize)


def naive_kalman(A: DenseMatrix, B: DenseMatrix, cap: int = ORACLE_SIZE_CAP) -> KalmanForm:
    """Reference decomposition: naive Krylov basis, greedy completion, dense inverse."""
    _check_pair(A, B)
    n, F = A.rows, A.field
    ck = naive_compressed_krylov(A, B, cap)
    r = ck.r
    T, _ = col_reduced_form(block([[ck.V, DenseMatrix.identity(n, F)]]))
    Ti = inverse(T)
    M = Ti @ A @ T
    TB = Ti @ B
    return KalmanForm(r, T, M[:r, :r], M[:r, r:], M[r:, r:], TB[:r], ck.degrees, "naive")


# ---------------------------------------------------------------------------
# verification


@dataclass
class VerificationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def __bool__(self):
        return self.ok


def check_h_structure(H: DenseMatrix, blocks: Sequence[int], polycyclic: bool) -> bool:
    """Companion diagonal blocks, zeros below them; with ``polycyclic`` the
    blocks above the diagonal may only be nonzero in their last column."""
    if sum(blocks) != H.rows or H.rows != H.cols:
        return False
    h = H.array
    r = H.rows
    allowed = np.zeros((r, r), dtype=bool)
    ones = np.zeros((r, r), dtype=bool)
    off = 0
    for d in blocks:
        for i in range(1, d):
            ones[off + i, off + i - 1] = True
        last = off + d - 1
        allowed[: off + d, last] = True
        if not polycyclic:
            allowed[:off, off : off + d] = True
        off += d
    if not np.all(h[ones] == 1):
        return False
    return not np.any(h[~(allowed | ones)])


def verify_kalman_form(A: DenseMatrix, B: DenseMatrix, kf: KalmanForm) -> VerificationReport:
    """Check the defining equations of a Kalman form exactly."""
    rep = VerificationReport()
    n, m = B.shape
    r = kf.r
    shapes = (
        A.shape == (n, n)
        and kf.T.shape == (n, n)
        and kf.H.shape == (r, r)
        and kf.X.shape == (r, n - r)
        and kf.Y.shape == (n - r, n - r)
        and kf.B1.shape == (r, m)
    )
    rep.checks["shapes"] = shapes
    if not shapes:
        rep.notes.append("shape mismatch; remaining checks skipped")
        return rep
    F = A.field
    nonsingular = rank(kf.T) == n
    rep.checks["t_nonsingular"] = nonsingular
    if not nonsingular:
        return rep
    M = solve(kf.T, A @ kf.T)
    rep.checks["zero_block"] = M[r:, :r].is_zero()
    rep.checks["block_equation"] = M[:r, :r] == kf.H and M[:r, r:] == kf.X and M[r:, r:] == kf.Y
    rep.checks["b_equation"] = kf.T @ block([[kf.B1], [DenseMatrix.zeros(n - r, m, F)]]) == B
    if kf.is_trivial and kf.H == A:
        rep.checks["h_structure"] = True
        rep.notes.append("controllable pair returned unreduced; H structure not checked")
    else:
        rep.checks["h_structure"] = check_h_structure(kf.H, kf.blocks, polycyclic=kf.algorithm != "luk")
    return rep
