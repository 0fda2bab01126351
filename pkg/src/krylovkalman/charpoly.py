"""Hessenberg polycyclic form and characteristic polynomials.

Given a compressed Krylov basis ``V`` of ``(A, B)``, ``A V = V H`` where ``H``
is block upper triangular with companion blocks on the diagonal and nonzero
off-diagonal entries only in the last column of each block. Only those last
columns are unknown: column ``j`` holds the coordinates of ``A^(d_j) b_j`` in
the basis, found by triangular solves against the cached factorization of
``V.T`` rather than by forming ``V^-1 A V``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .densemat import DenseMatrix, apply_permutation, mul_mod
from .errors import FieldTooSmall, InconsistentInput, SizeCapExceeded
from .factor import determinant, solve_triangular
from .ffield import PrimeField, inverse_mod
from .krylov import CompressedKrylov, compressed_krylov_kg

ORACLE_SIZE_CAP = 64


@dataclass(frozen=True)
class Polynomial:
    """Polynomial over GF(p) with ascending coefficients, trailing zeros stripped."""

    coeffs: tuple[int, ...]
    field: PrimeField

    def __post_init__(self):
        c = [int(x) % self.field.p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def monomial(cls, degree: int, field: PrimeField) -> "Polynomial":
        return cls((0,) * degree + (1,), field)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        return poly_mul(self, other)

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.field.p
        return acc

    def __str__(self):
        return " ".join(str(c) for c in self.coeffs) if self.coeffs else "0"


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.field != g.field:
        raise ValueError(f"{f.field!r} vs {g.field!r}")
    if not f.coeffs or not g.coeffs:
        return Polynomial((), f.field)
    p = f.field.p
    out = [0] * (len(f.coeffs) + len(g.coeffs) - 1)
    for i, a in enumerate(f.coeffs):
        if a:
            for j, b in enumerate(g.coeffs):
                out[i + j] = (out[i + j] + a * b) % p
    return Polynomial(tuple(out), f.field)


@dataclass(frozen=True)
class HessenbergPolycyclic:
    """Compressed storage of a Hessenberg polycyclic matrix.

    ``tail_columns[j]`` is the last column of block ``j`` restricted to rows
    ``0 .. d_1 + ... + d_j - 1``; everything else is implied (ones on the
    in-block subdiagonal, zeros elsewhere).
    """

    block_degrees: tuple[int, ...]
    tail_columns: tuple[tuple[int, ...], ...]
    field: PrimeField

    @property
    def size(self) -> int:
        return sum(self.block_degrees)

    def diagonal_tail(self, j: int) -> tuple[int, ...]:
        off = sum(self.block_degrees[:j])
        return self.tail_columns[j][off : off + self.block_degrees[j]]

    def expand(self) -> DenseMatrix:
        r = self.size
        H = np.zeros((r, r), dtype=np.int64)
        off = 0
        for d, tail in zip(self.block_degrees, self.tail_columns):
            for i in range(1, d):
                H[off + i, off + i - 1] = 1
            H[: len(tail), off + d - 1] = tail
            off += d
        return DenseMatrix._wrap(H, self.field)


def recover_hessenberg(ck: CompressedKrylov, A: DenseMatrix) -> HessenbergPolycyclic:
    """Last columns of ``H`` with ``A V = V H``, one solve per block.

    The right-hand sides ``A v`` (``v`` the last vector of each block) are
    solved together against ``V = P.T [U1 | U2].T L.T``: a lower solve with
    ``U1.T``, a consistency check against ``U2.T``, then a unit-upper solve
    with ``L.T``.
    """
    F = A.field
    blocks = [(j, d) for j, d in enumerate(ck.degrees) if d]
    if not blocks:
        return HessenbergPolycyclic((), (), F)
    offsets = ck.block_offsets()
    last = [offsets[j] + d - 1 for j, d in blocks]
    rhs = mul_mod(A.array, ck.V.array[:, last], F.p)
    fact = ck.vt_fact
    r = ck.r
    pw = apply_permutation(DenseMatrix._wrap(rhs, F), fact.P, "rows")
    y = solve_triangular(fact.U1, pw[:r], "upper", transposed=True)
    check = mul_mod(fact.U2.array.T, y.array, F.p)
    if not np.array_equal(check, pw.array[r:]):
        raise InconsistentInput("A V is not contained in the span of V")
    x = solve_triangular(fact.L, y, "unitLower", transposed=True).array

    tails = []
    end = 0
    for col, (j, d) in enumerate(blocks):
        end += d
        if x[end:, col].any():
            raise InconsistentInput(f"block {j} depends on later blocks")
        tails.append(tuple(int(v) for v in x[:end, col]))
    return HessenbergPolycyclic(tuple(d for _, d in blocks), tuple(tails), F)


def companion_polynomial(tail: Sequence[int], field: PrimeField) -> Polynomial:
    """``x^d - sum(tail[i] x^i)``: the polynomial of a companion block."""
    return Polynomial(tuple(-t for t in tail) + (1,), field)


def charpoly_of_hessenberg(H: HessenbergPolycyclic) -> Polynomial:
    out = Polynomial((1,), H.field)
    for j in range(len(H.block_degrees)):
        out = out * companion_polynomial(H.diagonal_tail(j), H.field)
    return out


def charpoly_kg(A: DenseMatrix) -> Polynomial:
    """Characteristic polynomial via the Krylov basis of the identity."""
    ck = compressed_krylov_kg(A, DenseMatrix.identity(A.rows, A.field))
    return charpoly_of_hessenberg(recover_hessenberg(ck, A))


def _interpolate(xs: Sequence[int], ys: Sequence[int], field: PrimeField) -> Polynomial:
    p = field.p
    total = [0] * len(xs)
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if not yi:
            continue
        basis = [1]
        denom = 1
        for k, xk in enumerate(xs):
            if k == i:
                continue
            # basis *= (x - xk), coefficients ascending
            basis = [(lo - xk * hi) % p for lo, hi in zip([0] + basis, basis + [0])]
            denom = denom * (xi - xk) % p
        scale = yi * inverse_mod(denom, p) % p
        for d, c in enumerate(basis):
            total[d] = (total[d] + scale * c) % p
    return Polynomial(tuple(total), field)


def oracle_charpoly(A: DenseMatrix, cap: int = ORACLE_SIZE_CAP) -> Polynomial:
    """det(xI - A) by evaluating at x = 0..n and Lagrange interpolation."""
    n = A.rows
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds oracle cap {cap}")
    F = A.field
    if F.p < n + 1:
        raise FieldTooSmall(f"need {n + 1} distinct points, GF({F.p}) is too small")
    xs = list(range(n + 1))
    ys = []
    for x in xs:
        M = DenseMatrix._wrap((x * np.eye(n, dtype=np.int64) - A.array) % F.p, F)
        ys.append(determinant(M))
    return _interpolate(xs, ys, F)
