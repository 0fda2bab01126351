"""Order-preserving rank-revealing LU factorization and triangular solves.

``lup(M)`` scans the rows of ``M`` top to bottom and never reorders them: a
row becomes a pivot row exactly when it is independent of the rows above it.
That greedy property is what makes :func:`col_reduced_form` (applied to a
transpose) select the leftmost independent columns, which the Krylov code
relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
import numpy as np

from .densemat import DenseMatrix, Permutation, apply_permutation
from .errors import DimensionMismatch, NotADependentRow, SingularDiagonal
from .ffield import inverse_mod


@dataclass(frozen=True)
class LupFactorization:
    """``M = L @ U`` for an ``a x b`` matrix ``M`` of rank ``r``.

    Attributes:
        rank: r.
        row_select: indices of the pivot rows, strictly increasing.
        L: ``a x r``; ``L[row_select]`` is unit lower triangular and the
            remaining rows hold the dependency coefficients of non-pivot rows.
        U: ``r x b`` echelon factor.
        P: column permutation with ``U @ P.T == [U1 | U2]``, ``U1`` upper
            triangular with nonzero diagonal.
    """

    rank: int
    row_select: tuple[int, ...]
    L: DenseMatrix
    U: DenseMatrix
    P: Permutation

    @property
    def U_permuted(self) -> DenseMatrix:
        return apply_permutation(self.U, self.P, "cols")

    @property
    def U1(self) -> DenseMatrix:
        return self.U_permuted[:, : self.rank]

    @property
    def U2(self) -> DenseMatrix:
        return self.U_permuted[:, self.rank :]

    @property
    def pivot_columns(self) -> tuple[int, ...]:
        return self.P.images[: self.rank]

    def selected(self) -> "LupFactorization":
        """The factorization of ``M[row_select]`` (a full-row-rank matrix)."""
        r = self.rank
        return LupFactorization(r, tuple(range(r)), self.L[list(self.row_select)], self.U, self.P)


def lup(M: DenseMatrix) -> LupFactorization:
    """Rank-revealing factorization processing rows strictly in order.

    The pivot of a row is its leftmost nonzero entry after elimination by the
    earlier pivot rows; a row that eliminates to zero is dependent and only
    contributes its multipliers to ``L``.
    """
    a, b = M.shape
    p = M.p
    W = M.array.copy()
    L = np.zeros((a, min(a, b)), dtype=np.int64)
    select: list[int] = []
    pivots: list[int] = []
    for i in range(a):
        row = W[i]
        nz = np.flatnonzero(row)
        if nz.size == 0:
            continue
        c = int(nz[0])
        k = len(select)
        select.append(i)
        pivots.append(c)
        L[i, k] = 1
        if i + 1 < a:
            col = W[i + 1 :, c]
            if col.any():
                f = col * inverse_mod(int(row[c]), p) % p
                L[i + 1 :, k] = f
                W[i + 1 :] = (W[i + 1 :] - np.outer(f, row)) % p
    r = len(select)
    U = W[select] if r else np.zeros((0, b), dtype=np.int64)
    chosen = set(pivots)
    perm = Permutation(tuple(pivots) + tuple(j for j in range(b) if j not in chosen))
    return LupFactorization(
        r,
        tuple(select),
        DenseMatrix._wrap(L[:, :r].copy(), M.field),
        DenseMatrix._wrap(U, M.field),
        perm,
    )


def rank(M: DenseMatrix) -> int:
    return lup(M).rank


def col_reduced_form(M: DenseMatrix) -> tuple[DenseMatrix, list[int]]:
    """Leftmost ``rank(M)`` independent columns of ``M`` and their indices."""
    fact = lup(M.T)
    idx = list(fact.row_select)
    return M[:, idx], idx


# ---------------------------------------------------------------------------
# triangular systems


def _lower(T: np.ndarray, R: np.ndarray, p: int, unit: bool) -> np.ndarray:
    X = R.copy()
    n = T.shape[0]
    for i in range(n):
        if not unit:
            X[i] = X[i] * inverse_mod(int(T[i, i]), p) % p
        if i + 1 < n:
            X[i + 1 :] = (X[i + 1 :] - np.outer(T[i + 1 :, i], X[i])) % p
    return X


def _upper(T: np.ndarray, R: np.ndarray, p: int, unit: bool) -> np.ndarray:
    X = R.copy()
    for i in range(T.shape[0] - 1, -1, -1):
        if not unit:
            X[i] = X[i] * inverse_mod(int(T[i, i]), p) % p
        if i:
            X[:i] = (X[:i] - np.outer(T[:i, i], X[i])) % p
    return X


def solve_triangular(
    T: DenseMatrix,
    rhs: DenseMatrix,
    shape: str = "upper",
    side: str = "left",
    transposed: bool = False,
) -> DenseMatrix:
    """Solve ``op(T) Z = rhs`` (left) or ``Z op(T) = rhs`` (right).

    ``shape`` is ``"unitLower"`` (the stored diagonal is ignored and taken as
    ones) or ``"upper"``; ``op(T)`` is ``T.T`` when ``transposed`` is set.
    """
    if shape not in ("unitLower", "upper"):
        raise ValueError(f"unknown triangular shape {shape!r}")
    if side not in ("left", "right"):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    n = T.rows
    if T.cols != n:
        raise DimensionMismatch(f"triangular matrix must be square, got {T.shape}")
    if T.field != rhs.field:
        raise DimensionMismatch("field mismatch between T and rhs")
    R = rhs.array if side == "left" else rhs.array.T
    if R.shape[0] != n:
        raise DimensionMismatch(f"rhs of shape {rhs.shape} does not conform to {T.shape} on the {side}")
    unit = shape == "unitLower"
    if not unit and n and not np.all(np.diagonal(T.array)):
        raise SingularDiagonal("upper triangular factor has a zero on its diagonal")
    # right-side solves are left solves with the transpose
    effective_t = transposed != (side == "right")
    Tarr = T.array.T if effective_t else T.array
    lower = unit != effective_t
    X = (_lower if lower else _upper)(Tarr, np.array(R, dtype=np.int64), T.p, unit)
    if side == "right":
        X = X.T.copy()
    return DenseMatrix._wrap(X, T.field)


def dependency_coefficients(fact: LupFactorization, M: DenseMatrix, row_index: int) -> list[int]:
    """Coefficients ``c`` with ``M[row_index] = c @ M[pivot rows above it]``.

    Read from the multipliers stored in ``L`` with one unit-lower solve; ``M``
    is only used to check that ``fact`` belongs to it.
    """
    if M.rows != fact.L.rows or M.cols != fact.U.cols:
        raise DimensionMismatch("factorization does not match the matrix")
    if row_index in fact.row_select:
        raise NotADependentRow(f"row {row_index} is a pivot row")
    if not 0 <= row_index < M.rows:
        raise IndexError(f"row {row_index} out of range")
    above = [i for i in fact.row_select if i < row_index]
    k = len(above)
    if k == 0:
        return []
    L_above = fact.L[above, list(range(k))]
    l_row = fact.L[[row_index], list(range(k))]
    c = solve_triangular(L_above, l_row, "unitLower", side="right")
    return c.array[0].tolist()


# ---------------------------------------------------------------------------
# dense helpers built on lup, used by oracles and verification


def determinant(M: DenseMatrix) -> int:
    if M.rows != M.cols:
        raise DimensionMismatch(f"determinant of non-square {M.shape}")
    fact = lup(M)
    if fact.rank < M.rows:
        return 0
    d = fact.P.sign() % M.p
    for x in np.diagonal(fact.U1.array):
        d = d * int(x) % M.p
    return d


def solve(M: DenseMatrix, rhs: DenseMatrix) -> DenseMatrix:
    """Solve ``M Z = rhs`` for square nonsingular ``M``."""
    n = M.rows
    if M.cols != n or rhs.rows != n:
        raise DimensionMismatch(f"cannot solve {M.shape} against {rhs.shape}")
    fact = lup(M)
    if fact.rank < n:
        raise SingularDiagonal(f"matrix is singular (rank {fact.rank} < {n})")
    y = solve_triangular(fact.L, rhs, "unitLower")
    w = solve_triangular(fact.U1, y, "upper")
    return apply_permutation(w, fact.P, "rows", inverse=True)


def inverse(M: DenseMatrix) -> DenseMatrix:
    return solve(M, DenseMatrix.identity(M.rows, M.field))


class IncrementalLup:
    """Row-by-row version of :func:`lup` for rows produced on the fly.

    After ``add_row`` has been fed rows ``M[0], M[1], ...`` the result of
    :meth:`factorization` equals ``lup(M)`` for the rows seen so far.
    """

    def __init__(self, ncols: int, field):
        self.ncols = ncols
        self.field = field
        self._U: list[np.ndarray] = []
        self._pivots: list[int] = []
        self._pivinv: list[int] = []
        self._L: list[np.ndarray] = []
        self._select: list[int] = []
        self._nrows = 0

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add_row(self, row: np.ndarray) -> bool:
        """Append a row; returns whether it was independent of the earlier ones."""
        p = self.field.p
        w = np.array(row, dtype=np.int64) % p
        coef = np.zeros(len(self._pivots) + 1, dtype=np.int64)
        for k, (c, u) in enumerate(zip(self._pivots, self._U)):
            if w[c]:
                f = int(w[c]) * self._pivinv[k] % p
                coef[k] = f
                w = (w - f * u) % p
        nz = np.flatnonzero(w)
        independent = nz.size > 0
        if independent:
            c = int(nz[0])
            coef[-1] = 1
            self._pivots.append(c)
            self._pivinv.append(inverse_mod(int(w[c]), p))
            self._U.append(w)
            self._select.append(self._nrows)
        self._L.append(coef)
        self._nrows += 1
        return independent

    def factorization(self) -> LupFactorization:
        r = self.rank
        L = np.zeros((self._nrows, r), dtype=np.int64)
        for i, coef in enumerate(self._L):
            k = min(len(coef), r)
            L[i, :k] = coef[:k]
        U = np.array(self._U, dtype=np.int64).reshape(r, self.ncols)
        chosen = set(self._pivots)
        perm = Permutation(tuple(self._pivots) + tuple(j for j in range(self.ncols) if j not in chosen))
        return LupFactorization(
            r, tuple(self._select), DenseMatrix._wrap(L, self.field), DenseMatrix._wrap(U, self.field), perm
        )
