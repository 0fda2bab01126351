"""Matrix files and result documents.

Matrix file format, bit-exact::

    rows cols p
    a11 a12 ... a1c
    ...

one line per row, entries in base 10 separated by single spaces, every line
newline-terminated. Entries are reduced modulo ``p`` on load.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from .densemat import DenseMatrix
from .errors import BadModulus, HeaderMismatch, ParseError
from .ffield import PrimeField
from .kalman import KalmanForm

RESULT_FIELDS = ("algorithm", "prime", "n", "m", "r", "degrees", "T", "H", "X", "Y", "B1", "checks", "timings")


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", line, col) from None


def parse_matrix(text: str, prime: int | None = None) -> DenseMatrix:
    """Parse the matrix file format; ``prime`` overrides the header modulus."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("empty input", 1)
    header = lines[0].split()
    if len(header) != 3:
        raise ParseError(f"header must be 'rows cols p', got {lines[0]!r}", 1)
    rows, cols, p = (_int(t, 1, i + 1) for i, t in enumerate(header))
    if rows < 0 or cols < 0:
        raise ParseError("negative dimension in header", 1)
    try:
        field = PrimeField(prime if prime is not None else p)
    except BadModulus as exc:
        raise BadModulus(f"line 1: {exc}") from None
    body = lines[1:]
    if len(body) != rows:
        raise ParseError(f"expected {rows} rows, found {len(body)}", len(lines) + 1)
    data = np.zeros((rows, cols), dtype=np.int64)
    for i, line in enumerate(body):
        toks = line.split()
        if len(toks) != cols:
            raise HeaderMismatch(f"expected {cols} entries, found {len(toks)}", i + 2)
        for j, tok in enumerate(toks):
            data[i, j] = _int(tok, i + 2, j + 1) % field.p
    return DenseMatrix._wrap(data, field)


def format_matrix(M: DenseMatrix) -> str:
    out = [f"{M.rows} {M.cols} {M.p}"]
    out.extend(" ".join(str(x) for x in row) for row in M.tolist())
    return "\n".join(out) + "\n"


def read_matrix(path: str | Path, prime: int | None = None) -> DenseMatrix:
    return parse_matrix(Path(path).read_text(), prime)


def write_matrix(M: DenseMatrix, path: str | Path) -> None:
    Path(path).write_text(format_matrix(M))


# ---------------------------------------------------------------------------


def _matrix_json(M: DenseMatrix) -> dict[str, Any]:
    return {"rows": M.rows, "cols": M.cols, "data": M.tolist()}


def _matrix_from_json(obj: dict[str, Any], field: PrimeField) -> DenseMatrix:
    rows, cols = obj["rows"], obj["cols"]
    return DenseMatrix(np.array(obj["data"], dtype=np.int64).reshape(rows, cols), field)


def result_document(
    kf: KalmanForm,
    n: int,
    m: int,
    checks: dict[str, bool],
    timings: dict[str, float] | None = None,
    include_matrices: bool = True,
) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "algorithm": kf.algorithm,
        "prime": kf.T.p,
        "n": n,
        "m": m,
        "r": kf.r,
        "degrees": list(kf.degrees),
    }
    if include_matrices:
        for name in ("T", "H", "X", "Y", "B1"):
            doc[name] = _matrix_json(getattr(kf, name))
    doc["checks"] = dict(checks)
    doc["timings"] = dict(timings or {})
    return doc


def dump_document(doc: dict[str, Any], path: str | Path) -> None:
    Path(path).write_text(json.dumps(doc, indent=1) + "\n")


def load_document(path: str | Path) -> dict[str, Any]:
    return json.loads(Path(path).read_text())


def kalman_form_from_document(doc: dict[str, Any]) -> KalmanForm:
    missing = [k for k in ("T", "H", "X", "Y", "B1") if k not in doc]
    if missing:
        raise KeyError(f"result document has no matrices: missing {', '.join(missing)}")
    field = PrimeField(int(doc["prime"]))
    mats = {k: _matrix_from_json(doc[k], field) for k in ("T", "H", "X", "Y", "B1")}
    return KalmanForm(int(doc["r"]), degrees=tuple(doc.get("degrees", ())), algorithm=doc["algorithm"], **mats)
