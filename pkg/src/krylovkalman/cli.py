"""Kalman forms, Krylov bases and characteristic polynomials over GF(p).

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time

from . import densemat
from .bench import format_table, run_bench
from .charpoly import charpoly_kg, oracle_charpoly
from .errors import KrylovKalmanError
from .fileio import (
    dump_document,
    format_matrix,
    kalman_form_from_document,
    load_document,
    read_matrix,
    result_document,
    write_matrix,
)
from .instances import generate_system
from .kalman import kalman_kg, kalman_luk, verify_kalman_form
from .krylov import compressed_krylov_kg

log = logging.getLogger("krylovkalman")


class UsageError(Exception):
    pass


def _degrees(ds) -> str:
    return "(" + ",".join(str(d) for d in ds) + ")"


def _load_pair(a_path: str, b_path: str):
    A = read_matrix(a_path)
    B = read_matrix(b_path)
    if A.field != B.field:
        raise UsageError(f"A is over GF({A.p}) but B is over GF({B.p})")
    if A.rows != A.cols or B.rows != A.rows:
        raise UsageError(f"incompatible shapes A {A.rows}x{A.cols}, B {B.rows}x{B.cols}")
    return A, B


def cmd_charpoly(args) -> int:
    A = read_matrix(args.matrix, args.prime)
    if A.rows != A.cols:
        raise UsageError(f"matrix must be square, got {A.rows}x{A.cols}")
    f = charpoly_kg(A)
    print(f)
    if args.oracle:
        g = oracle_charpoly(A)
        if g != f:
            print(f"oracle mismatch: oracle gives {g}", file=sys.stderr)
            return 1
        print("oracle: agree", file=sys.stderr)
    return 0


def cmd_kalman(args) -> int:
    A, B = _load_pair(args.A, args.B)
    algo = {"kg": kalman_kg, "luk": kalman_luk}[args.algorithm]
    t0 = time.perf_counter()
    kf = algo(A, B, normalize=args.normalize)
    elapsed = time.perf_counter() - t0
    print(f"r={kf.r} degrees={_degrees(kf.degrees)}")
    if args.emit:
        rep = verify_kalman_form(A, B, kf)
        doc = result_document(kf, A.rows, B.cols, rep.checks, {"kalman_s": elapsed}, not args.no_matrices)
        dump_document(doc, args.emit)
        if not rep.ok:
            print("verification failed: " + ", ".join(k for k, v in rep.checks.items() if not v), file=sys.stderr)
            return 1
    return 0


def cmd_krylov(args) -> int:
    A, B = _load_pair(args.A, args.B)
    ck = compressed_krylov_kg(A, B)
    print(f"r={ck.r} degrees={_degrees(ck.degrees)}")
    return 0


def cmd_verify(args) -> int:
    A, B = _load_pair(args.A, args.B)
    doc = load_document(args.result)
    try:
        kf = kalman_form_from_document(doc)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    if kf.T.p != A.p:
        raise UsageError(f"result is over GF({kf.T.p}), matrices over GF({A.p})")
    rep = verify_kalman_form(A, B, kf)
    for name, ok in rep.checks.items():
        print(f"{name}: {'PASS' if ok else 'FAIL'}")
    return 0 if rep.ok else 1


def cmd_gen(args) -> int:
    try:
        A, B = generate_system(args.n, args.m, args.prime, args.rank, args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.out_a == "-":
        sys.stdout.write(format_matrix(A) + format_matrix(B))
        return 0
    write_matrix(A, args.out_a)
    write_matrix(B, args.out_b)
    print(f"wrote {args.out_a} {args.out_b}")
    return 0


def cmd_bench(args) -> int:
    try:
        sizes = [int(s) for s in args.sizes.split(",") if s]
    except ValueError:
        raise UsageError(f"bad --sizes {args.sizes!r}") from None
    rows = run_bench(sizes, args.reps, args.m, args.prime, args.seed)
    print(format_table(rows, csv=args.csv))
    return 0 if all(r.verified for r in rows) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="krylovkalman", description=__doc__.splitlines()[0])
    ap.add_argument("--strassen-cutoff", type=int, default=None, help="classical product at or below this size")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("charpoly", help="characteristic polynomial, coefficients ascending")
    p.add_argument("matrix")
    p.add_argument("--prime", type=int, default=None, help="reduce entries modulo this prime instead")
    p.add_argument("--oracle", action="store_true", help="cross-check by evaluation/interpolation")
    p.set_defaults(func=cmd_charpoly)

    p = sub.add_parser("kalman", help="Kalman controllability form")
    p.add_argument("A")
    p.add_argument("B")
    p.add_argument("--algorithm", choices=("kg", "luk"), default="kg")
    p.add_argument("--normalize", action="store_true", help="polycyclic H even for controllable pairs")
    p.add_argument("--emit", metavar="RESULT_JSON")
    p.add_argument("--no-matrices", action="store_true", help="omit T, H, X, Y, B1 from the emitted document")
    p.set_defaults(func=cmd_kalman)

    p = sub.add_parser("krylov", help="rank and degree sequence of the compressed Krylov matrix")
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_krylov)

    p = sub.add_parser("verify", help="check a stored Kalman form against A and B")
    p.add_argument("result")
    p.add_argument("A")
    p.add_argument("B")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="random (A, B) with a given controllable dimension")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--prime", type=int, default=65521)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-a", default="A.mat", help="'-' writes both matrices to stdout")
    p.add_argument("--out-b", default="B.mat")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="time kalman-kg vs kalman-luk and charpoly-kg")
    p.add_argument("--sizes", default="64,128,256")
    p.add_argument("--reps", type=int, default=3)
    p.add_argument("--m", type=int, default=4)
    p.add_argument("--prime", type=int, default=65521)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--csv", action="store_true")
    p.set_defaults(func=cmd_bench)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    previous = densemat.strassen_cutoff()
    try:
        if args.strassen_cutoff is not None:
            densemat.set_strassen_cutoff(args.strassen_cutoff)
        return args.func(args)
    except (UsageError, KrylovKalmanError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    finally:
        densemat.set_strassen_cutoff(previous)


if __name__ == "__main__":
    sys.exit(main())
