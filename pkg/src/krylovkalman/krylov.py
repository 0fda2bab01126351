"""Compressed Krylov matrices.

For ``A`` (n x n) and ``B`` (n x m) the compressed Krylov matrix is the
leftmost maximal independent set of columns of

    [b_1, A b_1, ..., A^(n-1) b_1, b_2, ..., A^(n-1) b_m]

which always has the shape ``[b_1 .. A^(d_1-1) b_1 | ... | b_m .. A^(d_m-1) b_m]``.
:func:`compressed_krylov_kg` gets there with O(log n) matrix squarings and one
elimination per doubling round; :func:`naive_compressed_krylov` builds the
whole matrix and is kept as a test oracle.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .densemat import DenseMatrix, mul, mul_mod
from .errors import DimensionMismatch, SizeCapExceeded
from .factor import LupFactorization, lup

log = logging.getLogger(__name__)

ORACLE_SIZE_CAP = 64


@dataclass(frozen=True)
class CompressedKrylov:
    """Krylov basis ``V`` with its bookkeeping.

    ``source_of[c] = (j, k)`` says column ``c`` of ``V`` is ``A^k b_j``.
    ``vt_fact`` is the factorization of ``V.T`` (its rows are all pivots).
    """

    V: DenseMatrix
    degrees: tuple[int, ...]
    source_of: tuple[tuple[int, int], ...]
    vt_fact: LupFactorization

    @property
    def r(self) -> int:
        return self.V.cols

    @property
    def n(self) -> int:
        return self.V.rows

    def block_offsets(self) -> list[int]:
        """Starting column of each source block in ``V``."""
        out, acc = [], 0
        for d in self.degrees:
            out.append(acc)
            acc += d
        return out


def _check_shapes(A: DenseMatrix, B: DenseMatrix):
    if A.rows != A.cols:
        raise DimensionMismatch(f"A must be square, got {A.shape}")
    if B.rows != A.rows:
        raise DimensionMismatch(f"B has {B.rows} rows, A is {A.rows}x{A.cols}")
    if A.field != B.field:
        raise DimensionMismatch(f"A over {A.field!r}, B over {B.field!r}")


def _degrees(tags, m: int) -> tuple[int, ...]:
    deg = [0] * m
    for j, _ in tags:
        deg[j] += 1
    return tuple(deg)


def _is_prefix_closed(tags) -> bool:
    expected: dict[int, int] = {}
    for j, k in tags:
        if k != expected.get(j, 0):
            return False
        expected[j] = k + 1
    return True


def _truncate_to_prefixes(tags) -> list[int]:
    """Positions to keep so that each block holds only powers 0, 1, ..., d-1."""
    keep, nxt, broken = [], {}, set()
    for pos, (j, k) in enumerate(tags):
        if j in broken:
            continue
        if k == nxt.get(j, 0):
            keep.append(pos)
            nxt[j] = k + 1
        else:
            broken.add(j)
    return keep


def compressed_krylov_kg(A: DenseMatrix, B: DenseMatrix) -> CompressedKrylov:
    """Keller-Gehrig doubling.

    Round ``i`` appends ``A^(2^i) V_j`` to every block ``V_j`` that still has
    ``2^i`` columns, then keeps the leftmost independent columns of the
    whole matrix. Narrower blocks are frozen: they are carried along for the
    elimination but never extended again.

    A block can temporarily keep a power ``A^k b_j`` whose predecessor was
    eliminated, when the vectors that make it dependent come from a longer
    block on its left not yet grown far enough. Such a column is dependent in
    the full Krylov matrix, so it is dropped on the spot, which also freezes
    the block.
    """
    _check_shapes(A, B)
    n, m = B.shape
    F = A.field
    p = F.p

    nonzero = [j for j in range(m) if B.array[:, j].any()]
    V = B.array[:, nonzero].copy()
    tags: list[tuple[int, int]] = [(j, 0) for j in nonzero]
    fact: LupFactorization | None = None
    C = A
    width = 1
    rounds = 0
    while True:
        counts = _degrees(tags, m)
        full = [pos for pos, (j, _) in enumerate(tags) if counts[j] == width]
        if not full:
            break
        if rounds:
            C = mul(C, C)
        ext = mul_mod(C.array, V[:, full], p)
        ext_tags = [(tags[pos][0], tags[pos][1] + width) for pos in full]
        # interleave so each block stays contiguous with ascending powers
        cols, new_tags = [], []
        ext_by_block: dict[int, list[int]] = {}
        for e, (j, _) in enumerate(ext_tags):
            ext_by_block.setdefault(j, []).append(e)
        for j in range(m):
            for pos, t in enumerate(tags):
                if t[0] == j:
                    cols.append(V[:, pos])
                    new_tags.append(t)
            for e in ext_by_block.get(j, []):
                cols.append(ext[:, e])
                new_tags.append(ext_tags[e])
        W = np.stack(cols, axis=1)
        fact = lup(DenseMatrix._wrap(W.T.copy(), F))
        sel = list(fact.row_select)
        V = W[:, sel]
        tags = [new_tags[s] for s in sel]
        if not _is_prefix_closed(tags):
            keep = _truncate_to_prefixes(tags)
            log.debug("round %d: dropped %d non-prefix columns", rounds, len(tags) - len(keep))
            V = V[:, keep]
            tags = [tags[k] for k in keep]
            fact = None
        else:
            fact = fact.selected()
        width *= 2
        rounds += 1

    Vm = DenseMatrix._wrap(np.ascontiguousarray(V), F)
    if fact is None or fact.rank != len(tags):
        fact = lup(Vm.T)
    if not _is_prefix_closed(tags):
        raise AssertionError("Krylov blocks are not prefix closed")
    return CompressedKrylov(Vm, _degrees(tags, m), tuple(tags), fact)


def naive_compressed_krylov(A: DenseMatrix, B: DenseMatrix, cap: int = ORACLE_SIZE_CAP) -> CompressedKrylov:
    """Build the full n x (mn) Krylov matrix and keep its leftmost independent columns."""
    _check_shapes(A, B)
    n, m = B.shape
    if n > cap:
        raise SizeCapExceeded(f"n = {n} exceeds oracle cap {cap}")
    F = A.field
    p = F.p
    cols, tags = [], []
    Aa = A.array
    for j in range(m):
        v = B.array[:, j].copy()
        for k in range(n):
            cols.append(v)
            tags.append((j, k))
            v = mul_mod(Aa, v[:, None], p)[:, 0]
    if not cols:
        K = np.zeros((n, 0), dtype=np.int64)
    else:
        K = np.stack(cols, axis=1)
    fact = lup(DenseMatrix._wrap(K.T.copy(), F))
    sel = list(fact.row_select)
    kept = [tags[s] for s in sel]
    V = DenseMatrix._wrap(K[:, sel].copy() if sel else np.zeros((n, 0), dtype=np.int64), F)
    return CompressedKrylov(V, _degrees(kept, m), tuple(kept), fact.selected())
