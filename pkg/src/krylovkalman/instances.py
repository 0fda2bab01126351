"""Reproducible random systems with a prescribed controllable dimension.

Randomness comes from numpy's PCG64 bit generator (128-bit state, seeded
through ``SeedSequence(seed)``), so a seed fixes the instance exactly.
"""

from __future__ import annotations

import numpy as np

from .densemat import DenseMatrix, block
from .factor import inverse, rank
from .ffield import PrimeField


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_invertible(n: int, field: PrimeField, rng: np.random.Generator) -> DenseMatrix:
    while True:
        T = DenseMatrix.random(n, n, field, rng)
        if rank(T) == n:
            return T


def generate_system(n: int, m: int, prime: int, rank_: int, seed: int) -> tuple[DenseMatrix, DenseMatrix]:
    """``(A, B)`` whose controllable subspace has dimension exactly ``rank_``.

    Built as ``A = S [[H, X], [0, Y]] S^-1`` and ``B = S [B1; 0]`` with ``H`` a
    random companion matrix and ``e_1`` as the first column of ``B1``, which
    makes ``(H, B1)`` controllable; ``S`` is a random invertible matrix.
    """
    if not 0 <= rank_ <= n:
        raise ValueError(f"rank must lie in [0, {n}], got {rank_}")
    if m < 0:
        raise ValueError("m must be non-negative")
    if rank_ > 0 and m == 0:
        raise ValueError("a positive controllable dimension needs at least one input column")
    F = PrimeField(prime)
    rng = make_rng(seed)
    R = rank_
    H = np.zeros((R, R), dtype=np.int64)
    if R:
        H[np.arange(1, R), np.arange(R - 1)] = 1
        H[:, -1] = rng.integers(0, prime, R)
    B1 = rng.integers(0, prime, (R, m))
    if R:
        B1[:, 0] = 0
        B1[0, 0] = 1
    X = DenseMatrix.random(R, n - R, F, rng)
    Y = DenseMatrix.random(n - R, n - R, F, rng)
    Hm = DenseMatrix(H, F)
    inner = block([[Hm, X], [DenseMatrix.zeros(n - R, R, F), Y]]) if n else DenseMatrix.zeros(0, 0, F)
    Binner = block([[DenseMatrix(B1, F, shape=(R, m))], [DenseMatrix.zeros(n - R, m, F)]]) if n else DenseMatrix.zeros(0, m, F)
    S = random_invertible(n, F, rng)
    return S @ inner @ inverse(S), S @ Binner
