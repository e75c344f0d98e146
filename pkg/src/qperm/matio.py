"""Matrix file formats.

.blog  - Butson logarithmic text: first line "n l", then n rows of n
         integers in {0, ..., l-1}.  Round-trips bit exactly.
.cmat  - complex JSON: {"n": ..., "tol": ..., "entries": [[[re, im], ...]]}.
         Floats are written with repr precision (17 significant digits).
"""

from __future__ import annotations

import json
import os

import numpy as np

from .errors import MatrixParseError
from .hadamard import ButsonMatrix, ComplexHadamard, HadamardMatrix

__all__ = ["read_matrix", "write_matrix", "loads_blog", "dumps_blog"]


def dumps_blog(m: ButsonMatrix) -> str:
    lines = [f"{m.n} {m.level}"]
    for row in m.exps:
        lines.append(" ".join(str(int(e)) for e in row))
    return "\n".join(lines) + "\n"


def loads_blog(text: str) -> ButsonMatrix:
    lines = text.splitlines()
    if not lines:
        raise MatrixParseError("empty file", line=1, column=1)
    head = lines[0].split()
    if len(head) != 2:
        raise MatrixParseError("header must be 'n l'", line=1, column=1)
    try:
        n, lvl = int(head[0]), int(head[1])
    except ValueError:
        raise MatrixParseError("header must hold two integers", line=1, column=1)
    if n < 1 or lvl < 1:
        raise MatrixParseError("n and l must be positive", line=1, column=1)
    rows = []
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != n:
        raise MatrixParseError(f"expected {n} rows, found {len(body)}", line=len(lines), column=1)
    for ridx, ln in enumerate(body, start=2):
        parts = ln.split()
        if len(parts) != n:
            raise MatrixParseError(
                f"row has {len(parts)} entries, expected {n}", line=ridx, column=1
            )
        row = []
        col = 1
        for part in parts:
            try:
                val = int(part)
            except ValueError:
                raise MatrixParseError(f"bad integer {part!r}", line=ridx, column=col)
            if not 0 <= val < lvl:
                raise MatrixParseError(
                    f"exponent {val} outside 0..{lvl - 1}", line=ridx, column=col
                )
            row.append(val)
            col += len(part) + 1
        rows.append(row)
    return ButsonMatrix(lvl, rows)


def dumps_cmat(m: ComplexHadamard) -> str:
    entries = [[[z.real, z.imag] for z in row] for row in m.entries]
    return json.dumps({"n": m.n, "tol": m.tol, "entries": entries})


def loads_cmat(text: str) -> ComplexHadamard:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixParseError(f"invalid JSON: {exc.msg}", line=exc.lineno, column=exc.colno)
    try:
        n = int(data["n"])
        tol = float(data["tol"])
        raw = data["entries"]
        ent = np.array([[complex(re, im) for re, im in row] for row in raw])
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixParseError(f"malformed .cmat payload: {exc}", line=1, column=1)
    if ent.shape != (n, n):
        raise MatrixParseError(f"entries shape {ent.shape} does not match n={n}", line=1, column=1)
    return ComplexHadamard(ent, tol)


def read_matrix(path: str) -> HadamardMatrix:
    ext = os.path.splitext(path)[1]
    with open(path, "r") as fh:
        text = fh.read()
    if ext == ".blog":
        return loads_blog(text)
    if ext == ".cmat":
        return loads_cmat(text)
    raise MatrixParseError(f"unknown matrix extension {ext!r} (want .blog or .cmat)", line=1, column=1)


def write_matrix(path: str, m: HadamardMatrix) -> None:
    ext = os.path.splitext(path)[1]
    if ext == ".blog":
        if not isinstance(m, ButsonMatrix):
            raise MatrixParseError(".blog holds Butson matrices only", line=1, column=1)
        payload = dumps_blog(m)
    elif ext == ".cmat":
        if isinstance(m, ButsonMatrix):
            m = ComplexHadamard(m.to_complex())
        payload = dumps_cmat(m)
    else:
        raise MatrixParseError(f"unknown matrix extension {ext!r} (want .blog or .cmat)", line=1, column=1)
    with open(path, "w") as fh:
        fh.write(payload)
