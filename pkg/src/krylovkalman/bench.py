"""Timing harness: Keller-Gehrig vs LU-Krylov Kalman forms, plus charpoly."""

from __future__ import annotations

import statistics
import time
from dataclasses import dataclass
from typing import Callable, Sequence

from .charpoly import charpoly_kg
from .densemat import DenseMatrix
from .factor import determinant
from .instances import generate_system, make_rng
from .kalman import kalman_kg, kalman_luk, verify_kalman_form


@dataclass
class BenchRow:
    n: int
    algorithm: str
    r: int
    verified: bool
    median_s: float
    reps: int


def _charpoly_ok(A: DenseMatrix, f, seed: int) -> bool:
    # one random evaluation of det(xI - A) against f
    rng = make_rng(seed)
    x = int(rng.integers(0, A.p))
    n = A.rows
    M = DenseMatrix.identity(n, A.field).scale(x) - A
    return f.degree == n and f.is_monic and f(x) == determinant(M)


def _median_time(fn: Callable[[], object], reps: int) -> float:
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return statistics.median(times)


def run_bench(sizes: Sequence[int], reps: int = 3, m: int = 4, prime: int = 65521, seed: int = 0) -> list[BenchRow]:
    """Time each algorithm on one seeded instance per size with ``r = n // 2``.

    Results are checked before timing; an unverified algorithm is reported
    with ``median_s = nan``.
    """
    rows = []
    for n in sizes:
        A, B = generate_system(n, m, prime, n // 2, seed + n)
        for name, algo in (("kalman-kg", kalman_kg), ("kalman-luk", kalman_luk)):
            kf = algo(A, B)
            ok = verify_kalman_form(A, B, kf).ok and kf.r == n // 2
            t = _median_time(lambda: algo(A, B), reps) if ok else float("nan")
            rows.append(BenchRow(n, name, kf.r, ok, t, reps))
        f = charpoly_kg(A)
        ok = _charpoly_ok(A, f, seed + n)
        t = _median_time(lambda: charpoly_kg(A), reps) if ok else float("nan")
        rows.append(BenchRow(n, "charpoly-kg", n, ok, t, reps))
    return rows


def winners(rows: Sequence[BenchRow]) -> dict[int, str]:
    """Faster verified Kalman algorithm per size."""
    out = {}
    for n in sorted({r.n for r in rows}):
        cands = [r for r in rows if r.n == n and r.algorithm.startswith("kalman") and r.verified]
        if cands:
            out[n] = min(cands, key=lambda r: r.median_s).algorithm
    return out


def format_table(rows: Sequence[BenchRow], csv: bool = False) -> str:
    header = ("n", "algorithm", "r", "verified", "median_s", "reps")
    body = [(str(r.n), r.algorithm, str(r.r), "yes" if r.verified else "no", f"{r.median_s:.4f}", str(r.reps)) for r in rows]
    if csv:
        return "\n".join(",".join(line) for line in [header, *body])
    widths = [max(len(line[i]) for line in [header, *body]) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(line, widths)).rstrip() for line in [header, *body]]
    lines.append("")
    lines.extend(f"n={n}: faster Kalman algorithm is {w}" for n, w in winners(rows).items())
    return "\n".join(lines)
