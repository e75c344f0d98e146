"""The regular 6x6 classification and small Butson enumeration.

Every regular 6x6 Hadamard matrix has all 15 row scalar products splitting
as three opposite pairs (binary) or two rotated third-root triples
(ternary).  The classifier reads the binary/ternary pattern off the row
graph and matches the input, through dephased normal forms, against the
four parameterized family templates, returning the family, the recovered
parameters, and a witness carrying the input onto the template.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product
from typing import Optional

import numpy as np

from .cyclotomic import cycle_decompose_approx, reduction_matrix
from .errors import (
    ClassificationError,
    NotMixedRegularError,
    NotVanishingSumError,
    SearchBudgetExceeded,
    ShapeError,
)
from .hadamard import (
    ButsonMatrix,
    ComplexHadamard,
    EquivalenceWitness,
    HadamardMatrix,
    dephase,
    equivalent,
    is_hadamard,
    is_regular,
    matrices_equal,
    to_complex,
)
from .named import named

__all__ = [
    "ProductType",
    "RowGraph",
    "FamilyTag",
    "product_type",
    "row_graph",
    "check_mixed_constraints",
    "classify_regular6",
    "template_matrix",
    "enumerate_butson",
    "EnumerationResult",
]

PRODUCT_TOL = 1e-6
ENTRY_TOL = 1e-8


@dataclass(frozen=True)
class ProductType:
    """Shape of one row scalar product: Binary, Ternary, or Other."""

    tag: str
    rotations: tuple = ()


def product_type(row_i, row_j, tol: float = PRODUCT_TOL) -> ProductType:
    """Classify the entrywise product of two unit rows of length 6."""
    u = np.asarray(row_i, dtype=complex)
    v = np.asarray(row_j, dtype=complex)
    prods = (u * np.conj(v)).tolist()
    try:
        dec = cycle_decompose_approx(prods, tol=tol, primes=(2,))
    except NotVanishingSumError:
        return ProductType("Other")
    if dec is not None:
        return ProductType("Binary", tuple(b.rotation for b in dec.blocks))
    dec = cycle_decompose_approx(prods, tol=tol, primes=(3,))
    if dec is not None:
        return ProductType("Ternary", tuple(b.rotation for b in dec.blocks))
    return ProductType("Other")


@dataclass(frozen=True)
class RowGraph:
    """Complete graph on the 6 rows, edges colored 2 (binary) or 3 (ternary)."""

    colors: dict

    def edges_of_color(self, c: int) -> list[tuple[int, int]]:
        return [e for e, col in self.colors.items() if col == c]

    def color(self, i: int, j: int) -> int:
        return self.colors[(min(i, j), max(i, j))]


def row_graph(h: HadamardMatrix, tol: float = PRODUCT_TOL) -> RowGraph:
    """Color every row pair by its product type; Other edges are an error."""
    if h.n != 6:
        raise ShapeError("row graph is defined for 6x6 matrices")
    hm = to_complex(h)
    colors = {}
    for i in range(6):
        for j in range(i + 1, 6):
            pt = product_type(hm[i], hm[j], tol)
            if pt.tag == "Other":
                raise NotMixedRegularError(
                    f"rows {i}, {j} have a scalar product that is neither binary nor ternary",
                    pair=(i, j),
                )
            colors[(i, j)] = 2 if pt.tag == "Binary" else 3
    return RowGraph(colors)


@dataclass(frozen=True)
class MixedConstraintReport:
    ok: bool
    violations: tuple[str, ...]


def check_mixed_constraints(g: RowGraph) -> MixedConstraintReport:
    """No binary triangle, no ternary 4-clique, at least one ternary triangle."""
    violations = []
    ternary_triangle = False
    for a in range(6):
        for b in range(a + 1, 6):
            for c in range(b + 1, 6):
                cols = {g.color(a, b), g.color(a, c), g.color(b, c)}
                if cols == {2}:
                    violations.append(f"binary triangle on rows {a},{b},{c}")
                if cols == {3}:
                    ternary_triangle = True
    for quad in _combinations4():
        if all(g.color(x, y) == 3 for x, y in _pairs(quad)):
            violations.append(f"ternary square on rows {quad}")
    if not ternary_triangle:
        violations.append("no ternary triangle")
    return MixedConstraintReport(not violations, tuple(violations))


def _combinations4():
    from itertools import combinations

    return combinations(range(6), 4)


def _pairs(idx):
    from itertools import combinations

    return combinations(idx, 2)


# ---------------------------------------------------------------------------
# family templates
# ---------------------------------------------------------------------------

_J = np.exp(2j * np.pi / 3)

# token (const, symbol, conjugate): entry = const * param or const * conj(param)
_TPL_TAO = [[(np.exp(2j * np.pi * e / 3), None, False) for e in row] for row in [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 2, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 1, 2],
    [0, 2, 2, 1, 0, 1],
    [0, 2, 1, 2, 1, 0],
]]

_TPL_HAAGERUP = [
    [(1j**c, "q" if p else None, p < 0) for (c, p) in row]
    for row in [
        [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
        [(0, 0), (2, 0), (1, 0), (1, 0), (3, 0), (3, 0)],
        [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (2, 1)],
        [(0, 0), (1, 0), (3, 0), (2, 0), (2, 1), (0, 1)],
        [(0, 0), (3, 0), (0, -1), (2, -1), (1, 0), (2, 0)],
        [(0, 0), (3, 0), (2, -1), (0, -1), (2, 0), (1, 0)],
    ]
]

_TPL_F23 = [
    [(1, None, False)] * 6,
    [(1, None, False), (_J, None, False), (_J**2, None, False),
     (1, "r", False), (_J, "r", False), (_J**2, "r", False)],
    [(1, None, False), (_J**2, None, False), (_J, None, False),
     (1, "s", False), (_J**2, "s", False), (_J, "s", False)],
    [(1, None, False), (1, None, False), (1, None, False),
     (-1, None, False), (-1, None, False), (-1, None, False)],
    [(1, None, False), (_J, None, False), (_J**2, None, False),
     (-1, "r", False), (-_J, "r", False), (-_J**2, "r", False)],
    [(1, None, False), (_J**2, None, False), (_J, None, False),
     (-1, "s", False), (-_J**2, "s", False), (-_J, "s", False)],
]

_TPL_F32 = [
    [(1, None, False)] * 6,
    [(1, None, False), (-1, None, False), (1, "r", False),
     (-1, "r", False), (1, "s", False), (-1, "s", False)],
    [(1, None, False), (1, None, False), (_J, None, False),
     (_J, None, False), (_J**2, None, False), (_J**2, None, False)],
    [(1, None, False), (-1, None, False), (_J, "r", False),
     (-_J, "r", False), (_J**2, "s", False), (-_J**2, "s", False)],
    [(1, None, False), (1, None, False), (_J**2, None, False),
     (_J**2, None, False), (_J, None, False), (_J, None, False)],
    [(1, None, False), (-1, None, False), (_J**2, "r", False),
     (-_J**2, "r", False), (_J, "s", False), (-_J, "s", False)],
]

_FAMILY_TEMPLATES = {
    "Tao": (_TPL_TAO, ()),
    "Haagerup": (_TPL_HAAGERUP, ("q",)),
    "Dita23": (_TPL_F23, ("r", "s")),
    "Dita32": (_TPL_F32, ("r", "s")),
}

_FAMILY_NAMED = {
    "Tao": ("T", ()),
    "Haagerup": ("H^q", ("q",)),
    "Dita23": ("F_23^rs", ("r", "s")),
    "Dita32": ("F_32^rs", ("r", "s")),
}


def template_matrix(family: str, params: dict) -> ComplexHadamard:
    tokens, syms = _FAMILY_TEMPLATES[family]
    ent = np.empty((6, 6), dtype=complex)
    for i in range(6):
        for j in range(6):
            c, sym, conj = tokens[i][j]
            val = c
            if sym is not None:
                val = c * (np.conj(params[sym]) if conj else params[sym])
            ent[i, j] = val
    return ComplexHadamard(ent)


@dataclass(frozen=True)
class FamilyTag:
    """Classification outcome: family, recovered parameters, and witness."""

    family: str
    params: dict
    witness: EquivalenceWitness

    def template(self) -> ComplexHadamard:
        return template_matrix(self.family, self.params)

    def named_form(self) -> HadamardMatrix:
        name, syms = _FAMILY_NAMED[self.family]
        return named(name, **{s: self.params[s] for s in syms})


def _match_row_tokens(values, tokens, bindings, tol):
    """Yield binding extensions matching the multiset of values to tokens.

    values: list of 6 complex numbers; tokens as in the templates.  Fixed
    tokens are consumed first, then symbol tokens, trying each remaining
    value for unbound symbols.
    """
    fixed = [t for t in tokens if t[1] is None]
    symbolic = [t for t in tokens if t[1] is not None]

    def consume(vals, target):
        for idx, v in enumerate(vals):
            if abs(v - target) <= tol:
                return vals[:idx] + vals[idx + 1:]
        return None

    vals = list(values)
    for c, _, _ in fixed:
        vals = consume(vals, c)
        if vals is None:
            return
    order = sorted(symbolic, key=lambda t: t[1])

    def rec(vals, binds, t_idx):
        if t_idx == len(order):
            yield binds
            return
        c, sym, conj = order[t_idx]
        if sym in binds:
            target = c * (np.conj(binds[sym]) if conj else binds[sym])
            rest = consume(vals, target)
            if rest is not None:
                yield from rec(rest, binds, t_idx + 1)
            return
        tried = []
        for idx, v in enumerate(vals):
            if any(abs(v - w) <= tol for w in tried):
                continue
            tried.append(v)
            raw = v / c
            val = np.conj(raw) if conj else raw
            nb = dict(binds)
            nb[sym] = val
            yield from rec(vals[:idx] + vals[idx + 1:], nb, t_idx + 1)

    yield from rec(vals, dict(bindings), 0)


def _column_bijection_complex(A, B, tol):
    """tau with A[:, j] == B[:, tau[j]] entrywise within tol."""
    nA = A.shape[1]
    used = [False] * nA
    tau = []
    for j in range(nA):
        found = None
        for c in range(nA):
            if not used[c] and np.all(np.abs(A[:, j] - B[:, c]) <= tol):
                found = c
                break
        if found is None:
            return None
        used[found] = True
        tau.append(found)
    return tau


def _match_template(h: HadamardMatrix, family: str, tol: float = ENTRY_TOL) -> Optional[FamilyTag]:
    """Search row alignment, column alignment, and parameters at once.

    Every equivalence onto the template factors through a double-dephased
    normal form indexed by the image (a, c0) of the template's first row
    and column, so scanning those and backtracking over rows is complete.
    """
    tokens, syms = _FAMILY_TEMPLATES[family]
    hm = h if isinstance(h, ComplexHadamard) else ComplexHadamard(to_complex(h))
    b0, wh = dephase(hm)
    HB = b0.entries
    row_tol = 10 * max(tol, 1e-10)
    for a in range(6):
        for c0 in range(6):
            N = HB * HB[a, c0] / (HB[:, [c0]] * HB[a][None, :])

            def backtrack(t, used, binds):
                if t == 6:
                    yield list(used), binds
                    return
                for b in range(6):
                    if b in used:
                        continue
                    for nb in _match_row_tokens(N[b].tolist(), tokens[t], binds, row_tol):
                        yield from backtrack(t + 1, used + [b], nb)

            for rho, binds in backtrack(1, [a], {}):
                if any(s not in binds for s in syms):
                    continue
                params = {s: binds[s] / abs(binds[s]) for s in syms}
                tmpl = template_matrix(family, params)
                stacked = N[rho]
                tau = _column_bijection_complex(tmpl.entries, stacked, row_tol)
                if tau is None:
                    continue
                lam = HB[a, c0] / HB[rho, c0]
                mu = 1 / HB[a, tau]
                w0 = EquivalenceWitness(tuple(rho), tuple(tau), lam, mu)
                w = w0.compose(wh)
                if matrices_equal(w.apply(hm), tmpl, tol=10 * tol):
                    return FamilyTag(family, params, w)
    return None


def classify_regular6(h: HadamardMatrix, tol: float = PRODUCT_TOL) -> FamilyTag:
    """Classify a regular 6x6 Hadamard matrix into its family.

    All-ternary row products force the Tao matrix, all-binary the Haagerup
    family, and the mixed case one of the two parameter-deformed Fourier
    products, told apart by the row graph.  The returned witness maps the
    input onto the family template at the recovered parameters; failure to
    match any family raises ClassificationError.
    """
    if h.n != 6:
        raise ShapeError("classification applies to 6x6 matrices")
    check = is_hadamard(h)
    if not check:
        raise ValueError(f"input is not Hadamard: {check.reason} at {check.pair}")
    graph = row_graph(h, tol)
    colors = set(graph.colors.values())
    if colors == {3}:
        order = ["Tao"]
    elif colors == {2}:
        order = ["Haagerup"]
    else:
        binary = graph.edges_of_color(2)
        touched = {v for e in binary for v in e}
        if len(binary) == 3 and len(touched) == 6:
            order = ["Dita23", "Dita32"]
        else:
            order = ["Dita32", "Dita23"]
    for family in order:
        tag = _match_template(h, family)
        if tag is not None:
            return tag
    raise ClassificationError(
        "regular 6x6 matrix matched no family template; "
        "this contradicts the classification and should be reported"
    )


# ---------------------------------------------------------------------------
# Butson enumeration
# ---------------------------------------------------------------------------


@dataclass
class EnumerationResult:
    matrices: list
    complete: bool
    nodes: int
    raw_count: int = 0


def _vanishing_rows(n: int, lvl: int) -> np.ndarray:
    """All rows (first entry 0) whose root sum vanishes, lex order."""
    red = reduction_matrix(lvl)
    rows = np.array(list(product(range(lvl), repeat=n - 1)), dtype=np.int64)
    rows = np.concatenate([np.zeros((len(rows), 1), dtype=np.int64), rows], axis=1)
    hist = (rows[:, :, None] == np.arange(lvl)).sum(axis=1)
    ok = ~np.any(hist @ red, axis=1)
    return rows[ok]


def enumerate_butson(
    n: int,
    lvl: int,
    budget: int = 10**7,
    threads: int = 1,
) -> EnumerationResult:
    """All n x n Butson matrices at level lvl, up to equivalence.

    Depth-first over dephased matrices with lexicographically increasing
    rows (the second row additionally non-decreasing), pruning by exact
    orthogonality against every chosen row.  Results are deduplicated with
    the equivalence search.  `budget` caps search nodes; exhaustion is
    reported through the completeness flag, never silently.
    """
    if n < 1 or lvl < 1:
        raise ValueError("need n >= 1 and level >= 1")
    red = reduction_matrix(lvl)
    cand = _vanishing_rows(n, lvl)
    c = len(cand)
    orth_cache: dict[int, np.ndarray] = {}

    def orth_vec(idx: int) -> np.ndarray:
        got = orth_cache.get(idx)
        if got is None:
            diffs = (cand - cand[idx]) % lvl
            hist = (diffs[:, :, None] == np.arange(lvl)).sum(axis=1)
            got = ~np.any(hist @ red, axis=1)
            orth_cache[idx] = got
        return got

    nondecreasing = np.all(np.diff(cand, axis=1) >= 0, axis=1)
    found: list[np.ndarray] = []
    nodes = 0
    complete = True

    def dfs(chosen: list[int], allowed: np.ndarray, start: int):
        nonlocal nodes, complete
        if len(chosen) == n - 1:
            found.append(cand[chosen])
            return
        for idx in range(start, c):
            if not allowed[idx]:
                continue
            nodes += 1
            if nodes > budget:
                complete = False
                return
            dfs(chosen + [idx], allowed & orth_vec(idx), idx + 1)
            if not complete:
                return

    if n == 1:
        mats = [ButsonMatrix(lvl, [[0]])]
        return EnumerationResult(mats, True, 0, 1)

    first_allowed = np.ones(c, dtype=bool)
    seconds = [i for i in range(c) if nondecreasing[i]]
    if threads <= 1 or len(seconds) <= 1:
        for idx in seconds:
            nodes += 1
            if nodes > budget:
                complete = False
                break
            dfs([idx], orth_vec(idx), idx + 1)
            if not complete:
                break
    else:
        from concurrent.futures import ThreadPoolExecutor

        parts: list[list[int]] = [[] for _ in range(threads)]
        for pos, idx in enumerate(seconds):
            parts[pos % threads].append(idx)

        results: list[list[np.ndarray]] = [[] for _ in range(threads)]
        flags = [True] * threads
        counts = [0] * threads

        def run(part_id: int):
            sub_found: list[np.ndarray] = []
            sub_nodes = 0
            ok = True

            def sub_dfs(chosen, allowed, start):
                nonlocal sub_nodes, ok
                if len(chosen) == n - 1:
                    sub_found.append(cand[chosen])
                    return
                for idx in range(start, c):
                    if not allowed[idx]:
                        continue
                    sub_nodes += 1
                    if sub_nodes > budget // threads:
                        ok = False
                        return
                    sub_dfs(chosen + [idx], allowed & orth_vec(idx), idx + 1)
                    if not ok:
                        return

            for idx in parts[part_id]:
                sub_nodes += 1
                if sub_nodes > budget // threads:
                    ok = False
                    break
                sub_dfs([idx], orth_vec(idx), idx + 1)
                if not ok:
                    break
            results[part_id] = sub_found
            flags[part_id] = ok
            counts[part_id] = sub_nodes

        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(run, range(threads)))
        nodes = sum(counts)
        complete = all(flags)
        merged = [m for part in results for m in part]
        merged.sort(key=lambda arr: arr.tolist())
        found = merged

    raw = []
    for rows in found:
        full = np.concatenate([np.zeros((1, n), dtype=np.int64), rows], axis=0)
        raw.append(ButsonMatrix(lvl, full))
    reps: list[ButsonMatrix] = []
    for m in raw:
        dup = False
        for r in reps:
            try:
                if equivalent(m, r) is not None:
                    dup = True
                    break
            except SearchBudgetExceeded:
                complete = False
        if not dup:
            reps.append(m)
    return EnumerationResult(reps, complete, nodes, len(raw))
