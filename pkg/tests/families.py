"""Seeded families of (A, B) pairs covering structured and degenerate cases."""

import numpy as np

from krylovkalman import DenseMatrix, PrimeField, matmul
from krylovkalman.instances import generate_system


def shift_matrix(n, field, rng=None, keep=1.0):
    a = np.zeros((n, n), dtype=np.int64)
    for i in range(n - 1):
        if rng is None or rng.random() < keep:
            a[i + 1, i] = 1
    return DenseMatrix(a, field)


def random_pair(rng, p, n, m, kind):
    F = PrimeField(p)
    A = DenseMatrix.random(n, n, F, rng)
    B = DenseMatrix.random(n, m, F, rng)
    if kind == "lowrank_a":
        k = int(rng.integers(0, n + 1))
        A = matmul(DenseMatrix.random(n, k, F, rng), DenseMatrix.random(k, n, F, rng)) if k else DenseMatrix.zeros(n, n, F)
    elif kind == "powers" and m:
        # later columns are iterates of the first: stresses block freezing
        cols = [B.array[:, 0]]
        for _ in range(1, m):
            v = cols[0].copy()
            for _ in range(int(rng.integers(0, n + 1))):
                v = A.array @ v % p
            cols.append(v)
        B = DenseMatrix(np.stack(cols, 1), F)
    elif kind == "shift":
        A = shift_matrix(n, F, rng, keep=0.8)
        mask = rng.random((n, m)) < 0.3
        B = DenseMatrix(mask * rng.integers(0, p, (n, m)), F)
    elif kind == "diag":
        A = DenseMatrix(np.diag(rng.integers(0, 3, n)), F, shape=(n, n))
    elif kind == "dependent_b" and m >= 2:
        b = B.array.copy()
        b[:, -1] = (b[:, 0] * int(rng.integers(0, p))) % p
        if m >= 3:
            b[:, 1] = 0
        B = DenseMatrix(b, F)
    elif kind == "controlled" and m:
        A, B = generate_system(n, m, p, int(rng.integers(0, n + 1)), int(rng.integers(0, 2**31)))
    return A, B


KINDS = ("random", "lowrank_a", "powers", "shift", "diag", "dependent_b", "controlled")


def pair_family(seed, count, primes, nmax, mmax, nmin=1):
    rng = np.random.default_rng(seed)
    for t in range(count):
        p = primes[t % len(primes)]
        n = int(rng.integers(nmin, nmax + 1))
        m = int(rng.integers(0, mmax + 1))
        kind = KINDS[t % len(KINDS)]
        A, B = random_pair(rng, p, n, m, kind)
        yield A, B


def kalman_family(seed, count, primes, nmax, mmax=3):
    """Pairs with every controllable dimension 0..n, plus B = 0 and B = I."""
    rng = np.random.default_rng(seed)
    t = 0
    while t < count:
        p = primes[t % len(primes)]
        n = int(rng.integers(1, min(nmax, p - 1) + 1))
        F = PrimeField(p)
        if t % 10 == 0:
            yield DenseMatrix.random(n, n, F, rng), DenseMatrix.zeros(n, int(rng.integers(0, mmax + 1)), F)
        elif t % 10 == 1:
            yield DenseMatrix.random(n, n, F, rng), DenseMatrix.identity(n, F)
        else:
            m = int(rng.integers(1, mmax + 1))
            R = t % (n + 1)
            yield generate_system(n, m, p, R, int(rng.integers(0, 2**31)))
        t += 1
