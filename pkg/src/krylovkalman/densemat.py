"""Dense matrices over a prime field.

Entries live in a read-only numpy ``int64`` array holding canonical residues.
Products use delayed reduction: a whole dot product is accumulated before
the single ``% p``, as long as the accumulator provably cannot overflow. For
``p < 2**16`` that means the float64 BLAS path (exact below ``2**53``); larger
moduli fall back to int64 accumulation, chunked or limb-split when needed.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DimensionMismatch, FieldMismatch, RangeOutOfBounds
from .ffield import PrimeField

DEFAULT_STRASSEN_CUTOFF = 64
_FLOAT_EXACT = 2**53
_INT_EXACT = 2**63 - 1


def _env_cutoff() -> int:
    raw = os.environ.get("KALMAN_STRASSEN_CUTOFF")
    if raw is None:
        return DEFAULT_STRASSEN_CUTOFF
    value = int(raw)
    if value < 2:
        raise ValueError(f"KALMAN_STRASSEN_CUTOFF must be >= 2, got {value}")
    return value


_strassen_cutoff = _env_cutoff()


def strassen_cutoff() -> int:
    return _strassen_cutoff


def set_strassen_cutoff(cutoff: int | None) -> None:
    """Set the dimension at or below which :func:`mul` stays classical.

    ``None`` restores the value from ``KALMAN_STRASSEN_CUTOFF`` (or 64).
    """
    global _strassen_cutoff
    if cutoff is None:
        _strassen_cutoff = _env_cutoff()
        return
    if cutoff < 2:
        raise ValueError(f"Strassen cutoff must be >= 2, got {cutoff}")
    _strassen_cutoff = int(cutoff)


# ---------------------------------------------------------------------------
# raw array kernels


def mul_mod(a: np.ndarray, b: np.ndarray, p: int, bmax: int | None = None) -> np.ndarray:
    """Exact ``a @ b mod p`` for canonical int64 arrays.

    ``bmax`` bounds the entries of ``b`` (defaults to ``p - 1``); it lets the
    limb-split path reuse this function on 16-bit pieces.
    """
    m, k = a.shape
    n = b.shape[1]
    if k == 0 or m == 0 or n == 0:
        return np.zeros((m, n), dtype=np.int64)
    if bmax is None:
        bmax = p - 1
    term = (p - 1) * bmax
    if term * k < _FLOAT_EXACT:
        prod = a.astype(np.float64) @ b.astype(np.float64)
        return prod.astype(np.int64) % p
    if term * k <= _INT_EXACT:
        return (a @ b) % p
    chunk = _INT_EXACT // term
    if chunk >= 16:
        out = np.zeros((m, n), dtype=np.int64)
        for s in range(0, k, chunk):
            out += (a[:, s : s + chunk] @ b[s : s + chunk]) % p
            out %= p
        return out
    lo = b & 0xFFFF
    hi = b >> 16
    low = mul_mod(a, lo, p, 0xFFFF)
    high = mul_mod(a, hi, p, int(hi.max()) if hi.size else 0)
    return (low + (high << 16) % p) % p


def strassen_mod(a: np.ndarray, b: np.ndarray, p: int, cutoff: int) -> np.ndarray:
    """Strassen's 7-product recursion with dynamic peeling of odd edges."""
    m, k = a.shape
    n = b.shape[1]
    if min(m, k, n) <= cutoff:
        return mul_mod(a, b, p)
    m2, k2, n2 = m & ~1, k & ~1, n & ~1
    if (m2, k2, n2) != (m, k, n):
        c = np.empty((m, n), dtype=np.int64)
        core = strassen_mod(a[:m2, :k2], b[:k2, :n2], p, cutoff)
        if k2 != k:
            core = (core + np.outer(a[:m2, k2], b[k2, :n2])) % p
        c[:m2, :n2] = core
        if n2 != n:
            c[:m2, n2:] = mul_mod(a[:m2], b[:, n2:], p)
        if m2 != m:
            c[m2:, :] = mul_mod(a[m2:], b, p)
        return c
    h, w, q = m // 2, k // 2, n // 2
    a11, a12, a21, a22 = a[:h, :w], a[:h, w:], a[h:, :w], a[h:, w:]
    b11, b12, b21, b22 = b[:w, :q], b[:w, q:], b[w:, :q], b[w:, q:]

    def rec(x, y):
        return strassen_mod(x, y, p, cutoff)

    m1 = rec((a11 + a22) % p, (b11 + b22) % p)
    m2_ = rec((a21 + a22) % p, b11)
    m3 = rec(a11, (b12 - b22) % p)
    m4 = rec(a22, (b21 - b11) % p)
    m5 = rec((a11 + a12) % p, b22)
    m6 = rec((a21 - a11) % p, (b11 + b12) % p)
    m7 = rec((a12 - a22) % p, (b21 + b22) % p)
    c = np.empty((m, n), dtype=np.int64)
    c[:h, :q] = (m1 + m4 - m5 + m7) % p
    c[:h, q:] = (m3 + m5) % p
    c[h:, :q] = (m2_ + m4) % p
    c[h:, q:] = (m1 - m2_ + m3 + m6) % p
    return c


# ---------------------------------------------------------------------------


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.flags.writeable = False
    return arr


class DenseMatrix:
    """Immutable dense matrix over :class:`PrimeField`.

    Construct from nested sequences or an integer array; entries are reduced
    modulo ``p``. ``M.array`` exposes the read-only residues.
    """

    __slots__ = ("_a", "field")

    def __init__(self, data, field: PrimeField, shape: tuple[int, int] | None = None):
        arr = np.array(data, dtype=object if _needs_object(data) else np.int64)
        if shape is not None:
            arr = arr.reshape(shape)
        if arr.ndim == 1 and shape is None:
            if arr.size == 0:
                arr = arr.reshape(0, 0)
            else:
                raise DimensionMismatch("matrix data must be two-dimensional")
        if arr.ndim != 2:
            raise DimensionMismatch(f"matrix data must be two-dimensional, got {arr.ndim} dims")
        arr = np.asarray(arr % field.p, dtype=np.int64)
        self._a = _frozen(np.ascontiguousarray(arr))
        self.field = field

    @classmethod
    def _wrap(cls, arr: np.ndarray, field: PrimeField) -> "DenseMatrix":
        # caller guarantees canonical int64 residues and gives up ownership
        obj = cls.__new__(cls)
        obj._a = _frozen(np.ascontiguousarray(arr, dtype=np.int64))
        obj.field = field
        return obj

    # constructors -----------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int, field: PrimeField) -> "DenseMatrix":
        return cls._wrap(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field: PrimeField) -> "DenseMatrix":
        return cls._wrap(np.eye(n, dtype=np.int64), field)

    @classmethod
    def random(cls, rows: int, cols: int, field: PrimeField, rng: np.random.Generator) -> "DenseMatrix":
        return cls._wrap(rng.integers(0, field.p, size=(rows, cols), dtype=np.int64), field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], field: PrimeField, rows: int | None = None):
        if not columns:
            return cls.zeros(rows or 0, 0, field)
        return cls(np.array(columns, dtype=np.int64).T, field)

    # basic properties ---------------------------------------------------------

    @property
    def array(self) -> np.ndarray:
        return self._a

    @property
    def p(self) -> int:
        return self.field.p

    @property
    def shape(self) -> tuple[int, int]:
        return self._a.shape  # type: ignore[return-value]

    @property
    def rows(self) -> int:
        return self._a.shape[0]

    @property
    def cols(self) -> int:
        return self._a.shape[1]

    @property
    def T(self) -> "DenseMatrix":
        return DenseMatrix._wrap(self._a.T.copy(), self.field)

    def tolist(self) -> list[list[int]]:
        return self._a.tolist()

    def is_zero(self) -> bool:
        return not self._a.any()

    def is_identity(self) -> bool:
        return self.rows == self.cols and np.array_equal(self._a, np.eye(self.rows, dtype=np.int64))

    def __repr__(self):
        return f"DenseMatrix({self.rows}x{self.cols} over {self.field!r}, {self.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.field == other.field and self.shape == other.shape and np.array_equal(self._a, other._a)

    __hash__ = None  # type: ignore[assignment]

    def __getitem__(self, key) -> "DenseMatrix":
        """numpy-style indexing that always yields a 2-D matrix."""
        if not isinstance(key, tuple):
            key = (key, slice(None))
        rk, ck = (_keep_2d(k, n) for k, n in zip(key, self.shape))
        if isinstance(rk, slice) or isinstance(ck, slice):
            sub = self._a[rk, :][:, ck]
        else:
            sub = self._a[np.ix_(np.asarray(rk, dtype=np.intp), np.asarray(ck, dtype=np.intp))]
        return DenseMatrix._wrap(np.array(sub, dtype=np.int64), self.field)

    # arithmetic ---------------------------------------------------------------

    def _check(self, other: "DenseMatrix"):
        if not isinstance(other, DenseMatrix):
            raise TypeError(f"expected DenseMatrix, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"{self.field!r} vs {other.field!r}")

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot add {self.shape} and {other.shape}")
        return DenseMatrix._wrap((self._a + other._a) % self.p, self.field)

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        self._check(other)
        if self.shape != other.shape:
            raise DimensionMismatch(f"cannot subtract {self.shape} and {other.shape}")
        return DenseMatrix._wrap((self._a - other._a) % self.p, self.field)

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix._wrap((-self._a) % self.p, self.field)

    def scale(self, c: int) -> "DenseMatrix":
        return DenseMatrix._wrap(self._a * (c % self.p) % self.p, self.field)

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return mul(self, other)


def _keep_2d(key, n: int):
    if isinstance(key, (int, np.integer)):
        if not -n <= key < n:
            raise RangeOutOfBounds(f"index {key} out of range for dimension {n}")
        key = int(key) % n
        return slice(key, key + 1)
    return key


def _needs_object(data) -> bool:
    # Python ints beyond int64 would overflow numpy's conversion
    if isinstance(data, np.ndarray):
        return data.dtype == object
    try:
        flat = [x for row in data for x in row]
    except TypeError:
        return False
    return any(isinstance(x, int) and not -(2**62) < x < 2**62 for x in flat)


# ---------------------------------------------------------------------------
# products


def _check_product(A: DenseMatrix, B: DenseMatrix):
    if A.field != B.field:
        raise FieldMismatch(f"{A.field!r} vs {B.field!r}")
    if A.cols != B.rows:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")


def matmul(A: DenseMatrix, B: DenseMatrix) -> DenseMatrix:
    """Classical product with delayed modular reduction."""
    _check_product(A, B)
    return DenseMatrix._wrap(mul_mod(A.array, B.array, A.p), A.field)


def strassen_mul(A: DenseMatrix, B: DenseMatrix, cutoff: int = DEFAULT_STRASSEN_CUTOFF) -> DenseMatrix:
    """Strassen product; bit-identical to :func:`matmul`."""
    if cutoff < 2:
        raise ValueError(f"cutoff must be >= 2, got {cutoff}")
    _check_product(A, B)
    return DenseMatrix._wrap(strassen_mod(A.array, B.array, A.p, cutoff), A.field)


def mul(A: DenseMatrix, B: DenseMatrix) -> DenseMatrix:
    """Product used by the algorithms: Strassen above the configured cutoff."""
    return strassen_mul(A, B, _strassen_cutoff)


# ---------------------------------------------------------------------------
# permutations


@dataclass(frozen=True)
class Permutation:
    """Bijection on ``range(size)``.

    ``images[i]`` is the source index moved to position ``i``. As a matrix,
    ``P[i, images[i]] = 1``, so ``P @ M == M[images]`` and ``M @ P.T`` has
    columns ``M[:, images]``.
    """

    images: tuple[int, ...]

    def __post_init__(self):
        imgs = tuple(int(i) for i in self.images)
        object.__setattr__(self, "images", imgs)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation: {imgs}")

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def swap(cls, n: int, i: int, j: int) -> "Permutation":
        imgs = list(range(n))
        imgs[i], imgs[j] = imgs[j], imgs[i]
        return cls(tuple(imgs))

    @property
    def size(self) -> int:
        return len(self.images)

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, src in enumerate(self.images):
            inv[src] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == s for i, s in enumerate(self.images))

    def sign(self) -> int:
        seen = [False] * self.size
        parity = 0
        for start in range(self.size):
            length = 0
            i = start
            while not seen[i]:
                seen[i] = True
                i = self.images[i]
                length += 1
            if length:
                parity ^= (length - 1) & 1
        return -1 if parity else 1

    def matrix(self, field: PrimeField) -> DenseMatrix:
        arr = np.zeros((self.size, self.size), dtype=np.int64)
        arr[np.arange(self.size), list(self.images)] = 1
        return DenseMatrix._wrap(arr, field)


def apply_permutation(M: DenseMatrix, perm: Permutation, side: str = "rows", inverse: bool = False) -> DenseMatrix:
    """Return ``P M`` (rows) or ``M Pᵀ`` (cols); with ``inverse`` use ``P⁻¹ = Pᵀ``."""
    if side not in ("rows", "cols"):
        raise ValueError(f"side must be 'rows' or 'cols', got {side!r}")
    dim = M.rows if side == "rows" else M.cols
    if perm.size != dim:
        raise DimensionMismatch(f"permutation of size {perm.size} applied to dimension {dim}")
    idx = np.asarray(perm.inverse().images if inverse else perm.images, dtype=np.intp)
    arr = M.array[idx, :] if side == "rows" else M.array[:, idx]
    return DenseMatrix._wrap(arr.copy(), M.field)


# ---------------------------------------------------------------------------
# block assembly


def block(grid: Sequence[Sequence[DenseMatrix | int]]) -> DenseMatrix:
    """Assemble a block matrix. The literal ``0`` stands for a zero block
    whose shape is inferred from its block row and column."""
    if not grid or not grid[0]:
        raise DimensionMismatch("empty block grid")
    ncols = len(grid[0])
    if any(len(row) != ncols for row in grid):
        raise DimensionMismatch("ragged block grid")
    field = None
    heights: list[int | None] = [None] * len(grid)
    widths: list[int | None] = [None] * ncols
    for i, row in enumerate(grid):
        for j, blk in enumerate(row):
            if isinstance(blk, DenseMatrix):
                if field is None:
                    field = blk.field
                elif blk.field != field:
                    raise FieldMismatch(f"{blk.field!r} vs {field!r}")
                for dims, idx, val in ((heights, i, blk.rows), (widths, j, blk.cols)):
                    if dims[idx] is None:
                        dims[idx] = val
                    elif dims[idx] != val:
                        raise DimensionMismatch(f"block ({i},{j}) has shape {blk.shape}")
            elif blk != 0:
                raise TypeError(f"block ({i},{j}) must be a DenseMatrix or 0")
    if field is None or None in heights or None in widths:
        raise DimensionMismatch("cannot infer the shape of a zero block")
    out = np.zeros((sum(heights), sum(widths)), dtype=np.int64)  # type: ignore[arg-type]
    r0 = 0
    for i, row in enumerate(grid):
        c0 = 0
        for j, blk in enumerate(row):
            if isinstance(blk, DenseMatrix):
                out[r0 : r0 + blk.rows, c0 : c0 + blk.cols] = blk.array
            c0 += widths[j]  # type: ignore[operator]
        r0 += heights[i]  # type: ignore[operator]
    return DenseMatrix._wrap(out, field)


def hstack(mats: Iterable[DenseMatrix]) -> DenseMatrix:
    return block([list(mats)])


def vstack(mats: Iterable[DenseMatrix]) -> DenseMatrix:
    return block([[m] for m in mats])


def _as_bounds(rng, limit: int, what: str) -> tuple[int, int]:
    if isinstance(rng, range):
        if rng.step != 1:
            raise ValueError("only unit-step ranges are supported")
        lo, hi = rng.start, rng.stop
    else:
        lo, hi = rng
    if not 0 <= lo <= hi <= limit:
        raise RangeOutOfBounds(f"{what} range [{lo}, {hi}) outside [0, {limit})")
    return lo, hi


def submatrix(M: DenseMatrix, row_range, col_range) -> DenseMatrix:
    """Copy of ``M[r0:r1, c0:c1]``; ranges are ``range`` objects or pairs."""
    r0, r1 = _as_bounds(row_range, M.rows, "row")
    c0, c1 = _as_bounds(col_range, M.cols, "column")
    return DenseMatrix._wrap(M.array[r0:r1, c0:c1].copy(), M.field)
