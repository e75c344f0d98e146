"""Command-line interface.

Exit codes: 0 success (or a positive decision), 1 a definite domain "no"
(not Hadamard, not equivalent, class empty, not regular), 2 usage or parse
errors, 3 budget or resource exhaustion and undecided outcomes.
"""

from __future__ import annotations

import argparse
import cmath
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import __version__
from .classify6 import classify_regular6, enumerate_butson
from .errors import (
    ClassificationError,
    MatrixParseError,
    NotMixedRegularError,
    QpermError,
    ResourceCapExceeded,
    SearchBudgetExceeded,
    UnstableRankError,
)
from .groups import latin_group
from .hadamard import (
    ButsonMatrix,
    EquivalenceWitness,
    equivalent,
    is_hadamard,
    is_regular,
    level,
)
from .magic import (
    detect_latin,
    fourier_tensor_decompose,
    gram_graph,
    magic_from_hadamard,
)
from .homdim import hom_dim
from .matio import dumps_blog, read_matrix, write_matrix
from .named import MissingParameterError, UnknownMatrixError, named
from .obstructions import OBSTRUCTION_SYMBOLS, decide, render_table, table

EXIT_OK = 0
EXIT_NO = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _parse_param(text: str) -> complex:
    """Parameter values: complex literals, i, -i, or root:k/l for zeta_l^k."""
    text = text.strip()
    if text.startswith("root:"):
        frac = Fraction(text[5:])
        return cmath.exp(2j * cmath.pi * frac.numerator / frac.denominator)
    lowered = text.replace("i", "j")
    return complex(lowered)


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(text)


def _witness_payload(w: EquivalenceWitness) -> dict:
    out = {
        "row_perm": list(w.row_perm),
        "col_perm": list(w.col_perm),
        "row_scalars": [[z.real, z.imag] for z in w.row_scalars],
        "col_scalars": [[z.real, z.imag] for z in w.col_scalars],
    }
    if w.is_exact:
        out["exact_level"] = w.exact_level
        out["row_exponents"] = [int(e) for e in w.row_exps]
        out["col_exponents"] = [int(e) for e in w.col_exps]
    return out


def _profile_summary(report) -> str:
    counts: dict = {}
    for prof in report.profiles.values():
        key = "none" if prof is None else "[" + ",".join(map(str, prof)) + "]"
        counts[key] = counts.get(key, 0) + 1
    return ", ".join(f"{v}x {k}" for k, v in sorted(counts.items()))


def cmd_check(args) -> int:
    m = read_matrix(args.matrix)
    ok = is_hadamard(m)
    lvl = level(m) if isinstance(m, ButsonMatrix) else None
    reg = is_regular(m) if ok else None
    payload = {
        "hadamard": bool(ok),
        "level": lvl,
        "diagnostic": None if ok else {"reason": ok.reason, "pair": list(ok.pair)},
        "regular": None if reg is None else reg.regular,
        "profiles": None if reg is None else _profile_summary(reg),
    }
    if ok:
        text = f"hadamard: true, level: {lvl if lvl is not None else 'none (complex)'}, " \
               f"regular: {str(reg.regular).lower()} ({_profile_summary(reg)})"
    else:
        text = f"hadamard: false ({ok.reason} at rows {ok.pair})"
    _emit(args, payload, text)
    return EXIT_OK if ok else EXIT_NO


def cmd_construct(args) -> int:
    params = {}
    for item in args.param or []:
        if "=" not in item:
            raise MatrixParseError(f"--param needs name=value, got {item!r}")
        key, val = item.split("=", 1)
        params[key] = _parse_param(val)
    m = named(args.name, **params)
    if args.out:
        write_matrix(args.out, m)
        _emit(args, {"written": args.out, "n": m.n}, f"wrote {args.out}")
    else:
        if isinstance(m, ButsonMatrix):
            sys.stdout.write(dumps_blog(m))
        else:
            from .matio import dumps_cmat

            print(dumps_cmat(m))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a = read_matrix(args.a)
    b = read_matrix(args.b)
    try:
        w = equivalent(a, b, node_budget=args.budget)
    except SearchBudgetExceeded:
        _emit(args, {"equivalent": None, "undecided": True},
              "undecided: search budget exhausted")
        return EXIT_BUDGET
    if w is None:
        _emit(args, {"equivalent": False, "witness": None}, "not equivalent")
        return EXIT_NO
    _emit(args, {"equivalent": True, "witness": _witness_payload(w)},
          f"equivalent; witness rows {w.row_perm} cols {w.col_perm}")
    return EXIT_OK


def cmd_regular(args) -> int:
    m = read_matrix(args.matrix)
    rep = is_regular(m)
    payload = {
        "regular": rep.regular,
        "profiles": {f"{i},{j}": (list(p) if p else None) for (i, j), p in rep.profiles.items()},
    }
    _emit(args, payload, f"regular: {str(rep.regular).lower()} ({_profile_summary(rep)})")
    return EXIT_OK if rep.regular else EXIT_NO


def cmd_invariants(args) -> int:
    m = read_matrix(args.matrix)
    xi = magic_from_hadamard(m)
    comps = gram_graph(xi).components()
    hom_dims = {}
    used_sketch = False
    for k in range(args.max_weight + 1):
        for l in range(args.max_weight + 1 - k):
            try:
                hom_dims[f"{k},{l}"] = hom_dim(xi, k, l, seed=args.seed)
            except (ResourceCapExceeded, UnstableRankError) as exc:
                hom_dims[f"{k},{l}"] = None
            if m.n ** (k + l + 4) > 10**6:
                used_sketch = True
    sq = detect_latin(xi)
    latin = None
    ft = None
    if sq is not None:
        grp = latin_group(sq)
        latin = {"square": sq.cells.tolist(), "group_order": grp.order,
                 "abelian": grp.abelian}
        ft = fourier_tensor_decompose(m)
    payload = {
        "endu_dim": hom_dims.get("1,1"),
        "gram_components": comps,
        "hom_dims": hom_dims,
        "latin": latin,
        "fourier_tensor": ft,
        "seed": args.seed,
    }
    text = (f"End(u) dim: {payload['endu_dim']}, Gram components: {comps}, "
            f"latin: {'yes' if latin else 'no'}, fourier tensor: {ft}, seed: {args.seed}")
    _emit(args, payload, text)
    return EXIT_OK


def cmd_obstruct(args) -> int:
    v = decide(args.n, args.l)
    names = {"LamLeung": "Lam-Leung", "Sylvester2": "Sylvester",
             "SylvesterExtA": "Sylvester (extended)",
             "SylvesterExtB": "Sylvester (extended)",
             "DeLauney": "de Launey", "Haagerup5": "Haagerup"}
    payload = {"n": v.n, "l": v.l, "status": v.status,
               "obstruction": v.obstruction, "witness": v.witness,
               "symbol": v.symbol}
    if v.status == "exists":
        _emit(args, payload, f"Exists ({v.witness})")
        return EXIT_OK
    if v.status == "empty":
        _emit(args, payload, f"Empty ({names[v.obstruction]})")
        return EXIT_NO
    _emit(args, payload, "Inconclusive")
    return EXIT_BUDGET


def cmd_table(args) -> int:
    grid = table(args.nmax, args.lmax)
    if args.json:
        payload = {
            "nmax": args.nmax,
            "lmax": args.lmax,
            "cells": [
                {"n": n, "l": l, "status": v.status, "obstruction": v.obstruction,
                 "witness": v.witness, "symbol": v.symbol}
                for (n, l), v in sorted(grid.items())
            ],
        }
        print(json.dumps(payload))
    else:
        print(render_table(grid))
    return EXIT_OK


def cmd_classify6(args) -> int:
    m = read_matrix(args.matrix)
    ok = is_hadamard(m)
    if not ok:
        _emit(args, {"error": "not hadamard"}, f"not a Hadamard matrix ({ok.reason})")
        return EXIT_NO
    rep = is_regular(m)
    if not rep.regular:
        _emit(args, {"error": "not regular"}, "not regular: classification does not apply")
        return EXIT_NO
    try:
        tag = classify_regular6(m)
    except (ClassificationError, NotMixedRegularError) as exc:
        _emit(args, {"error": str(exc)}, f"classification failure: {exc}")
        return EXIT_NO
    payload = {
        "family": tag.family,
        "parameters": {k: [v.real, v.imag] for k, v in tag.params.items()},
        "witness": _witness_payload(tag.witness),
    }
    ptxt = ", ".join(f"{k}={v:.6f}" for k, v in tag.params.items())
    _emit(args, payload, f"family: {tag.family}" + (f" ({ptxt})" if ptxt else ""))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    res = enumerate_butson(args.n, args.l, budget=args.budget, threads=args.threads)
    payloads = [dumps_blog(m) for m in res.matrices]
    if args.json:
        print(json.dumps({
            "n": args.n, "l": args.l, "complete": res.complete,
            "count": len(res.matrices), "matrices": payloads,
        }))
    else:
        print(f"{len(res.matrices)} matrices up to equivalence; "
              f"complete: {str(res.complete).lower()}")
        for p in payloads:
            sys.stdout.write(p)
    if args.outdir:
        os.makedirs(args.outdir, exist_ok=True)
        for idx, m in enumerate(res.matrices):
            write_matrix(os.path.join(args.outdir, f"H{args.n}_{args.l}_{idx}.blog"), m)
    return EXIT_OK if res.complete else EXIT_BUDGET


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="qperm",
        description="Complex Hadamard matrices, Butson classes, and their invariants",
    )
    p.add_argument("--version", action="version", version=f"qperm {__version__}")
    sub = p.add_subparsers(dest="verb", required=True)

    def add(name, fn, **kwargs):
        q = sub.add_parser(name, **kwargs)
        q.set_defaults(fn=fn)
        q.add_argument("--json", action="store_true", help="emit JSON instead of text")
        q.add_argument(
            "--threads",
            type=int,
            default=int(os.environ.get("QPERM_THREADS", "1")),
            help="cap on internal parallelism (default: QPERM_THREADS or 1)",
        )
        return q

    q = add("check", cmd_check, help="Hadamard test, level, regularity")
    q.add_argument("matrix")

    q = add("construct", cmd_construct, help="build a catalog matrix")
    q.add_argument("name")
    q.add_argument("--param", action="append", metavar="NAME=VALUE")
    q.add_argument("-o", "--out")

    q = add("equiv", cmd_equiv, help="search for an equivalence witness")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--budget", type=int, default=10**7)

    q = add("regular", cmd_regular, help="cycle profiles of all row pairs")
    q.add_argument("matrix")

    q = add("invariants", cmd_invariants, help="Gram graph, hom dimensions, Latin data")
    q.add_argument("matrix")
    q.add_argument("--max-weight", type=int, default=2,
                   help="compute hom dims for k+l up to this weight")
    q.add_argument("--seed", type=int, default=0)

    q = add("obstruct", cmd_obstruct, help="decide emptiness of one Butson class")
    q.add_argument("n", type=int)
    q.add_argument("l", type=int)

    q = add("table", cmd_table, help="decision table over a grid")
    q.add_argument("--nmax", type=int, default=10)
    q.add_argument("--lmax", type=int, default=14)

    q = add("classify6", cmd_classify6, help="classify a regular 6x6 matrix")
    q.add_argument("matrix")

    q = add("enumerate", cmd_enumerate, help="enumerate a Butson class up to equivalence")
    q.add_argument("n", type=int)
    q.add_argument("l", type=int)
    q.add_argument("--budget", type=int, default=10**7)
    q.add_argument("--outdir")

    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except MatrixParseError as exc:
        where = f" (line {exc.line}, column {exc.column})" if exc.line else ""
        print(f"error: {exc}{where}", file=sys.stderr)
        return EXIT_USAGE
    except (UnknownMatrixError, MissingParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SearchBudgetExceeded, ResourceCapExceeded, UnstableRankError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (QpermError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
