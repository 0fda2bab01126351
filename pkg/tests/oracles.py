"""Independent reference computations on plain Python lists.

Nothing here touches the package's factorization code, so agreement with
it is meaningful.
"""

from itertools import product


def reduce_rows(rows, p):
    """Greedy scan: indices of rows that raise the rank, in order."""
    basis = {}
    picked = []
    for idx, row in enumerate(rows):
        v = [int(x) % p for x in row]
        for c, brow in basis.items():
            if v[c]:
                f = v[c]
                v = [(x - f * y) % p for x, y in zip(v, brow)]
        nz = next((c for c, x in enumerate(v) if x), None)
        if nz is None:
            continue
        inv = pow(v[nz], p - 2, p)
        v = [x * inv % p for x in v]
        for c in list(basis):
            f = basis[c][nz]
            if f:
                basis[c] = [(x - f * y) % p for x, y in zip(basis[c], v)]
        basis[nz] = v
        picked.append(idx)
    return picked


def rank_py(rows, p):
    return len(reduce_rows(rows, p))


def columns(M):
    return [list(c) for c in zip(*M)] if M else []


def greedy_columns(M, p):
    return reduce_rows(columns(M), p)


def matmul_py(A, B, p):
    n = len(B[0]) if B else 0
    return [[sum(a * B[k][j] for k, a in enumerate(row)) % p for j in range(n)] for row in A]


def inverse_py(M, p):
    """Gauss-Jordan with partial search for a nonzero pivot."""
    n = len(M)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(M)]
    for c in range(n):
        piv = next(r for r in range(c, n) if aug[r][c] % p)
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = pow(aug[c][c], p - 2, p)
        aug[c] = [x * inv % p for x in aug[c]]
        for r in range(n):
            if r != c and aug[r][c]:
                f = aug[r][c]
                aug[r] = [(x - f * y) % p for x, y in zip(aug[r], aug[c])]
    return [row[n:] for row in aug]


def brute_force_combination(target, rows, p):
    """All coefficient vectors c with sum(c_i * rows[i]) == target, by enumeration."""
    hits = []
    for c in product(range(p), repeat=len(rows)):
        comb = [sum(ci * r[j] for ci, r in zip(c, rows)) % p for j in range(len(target))]
        if comb == [t % p for t in target]:
            hits.append(list(c))
    return hits
