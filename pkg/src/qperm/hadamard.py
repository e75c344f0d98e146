"""Complex Hadamard matrices: representation, construction, equivalence.

Two backends share one API.  ButsonMatrix stores exponents of roots of unity
(entry k means e^{2*pi*i*k/l}) and every question about it is decided with
exact integer arithmetic; ComplexHadamard stores unit-modulus complex entries
with a tolerance.  Butson matrices promote to complex when mixed with
complex ones, never the reverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .cyclotomic import (
    DEFAULT_TOL,
    ExponentMultiset,
    cycle_decompose,
    cycle_decompose_approx,
    reduction_matrix,
)
from .errors import NotVanishingSumError, SearchBudgetExceeded, ShapeError

__all__ = [
    "ButsonMatrix",
    "ComplexHadamard",
    "HadamardMatrix",
    "HadamardCheck",
    "EquivalenceWitness",
    "RegularityReport",
    "is_hadamard",
    "fourier",
    "tensor",
    "dita_product",
    "dita_deform",
    "dephase",
    "equivalent",
    "is_regular",
    "level",
    "to_complex",
    "matrices_equal",
    "random_witness",
    "as_root_of_unity",
]

DEFAULT_NODE_BUDGET = 10_000_000


class ButsonMatrix:
    """An n x n matrix of l-th roots of unity in logarithmic notation."""

    __slots__ = ("n", "level", "exps")

    def __init__(self, level: int, exps):
        exps = np.asarray(exps, dtype=np.int64)
        if exps.ndim != 2 or exps.shape[0] != exps.shape[1]:
            raise ShapeError(f"expected a square exponent matrix, got {exps.shape}")
        if level < 1:
            raise ValueError(f"level bound must be positive, got {level}")
        if exps.size and (exps.min() < 0 or exps.max() >= level):
            raise ValueError("exponents must lie in {0, ..., level-1}")
        exps = exps.copy()
        exps.setflags(write=False)
        self.n = exps.shape[0]
        self.level = level
        self.exps = exps

    def to_complex(self) -> np.ndarray:
        return np.exp(2j * np.pi * self.exps / self.level)

    def promote(self, target: int) -> "ButsonMatrix":
        if target % self.level != 0:
            raise ValueError(f"{target} is not a multiple of level {self.level}")
        return ButsonMatrix(target, self.exps * (target // self.level))

    def __repr__(self):
        return f"ButsonMatrix(n={self.n}, level={self.level})"

    def __eq__(self, other):
        if not isinstance(other, ButsonMatrix):
            return NotImplemented
        L = math.lcm(self.level, other.level)
        return self.n == other.n and np.array_equal(
            self.exps * (L // self.level), other.exps * (L // other.level)
        )

    def __hash__(self):
        g = math.gcd(int(np.gcd.reduce(self.exps, axis=None)), self.level)
        return hash((self.n, self.level // g, (self.exps // g).tobytes() if g > 1 else self.exps.tobytes()))


class ComplexHadamard:
    """An n x n unit-modulus complex matrix with a comparison tolerance."""

    __slots__ = ("n", "entries", "tol")

    def __init__(self, entries, tol: float = DEFAULT_TOL):
        entries = np.asarray(entries, dtype=np.complex128)
        if entries.ndim != 2 or entries.shape[0] != entries.shape[1]:
            raise ShapeError(f"expected a square matrix, got {entries.shape}")
        entries = entries.copy()
        entries.setflags(write=False)
        self.n = entries.shape[0]
        self.entries = entries
        self.tol = tol

    def to_complex(self) -> np.ndarray:
        return self.entries

    def __repr__(self):
        return f"ComplexHadamard(n={self.n}, tol={self.tol})"


HadamardMatrix = Union[ButsonMatrix, ComplexHadamard]


def to_complex(m: HadamardMatrix) -> np.ndarray:
    return m.to_complex()


def _tol_of(m: HadamardMatrix) -> float:
    return m.tol if isinstance(m, ComplexHadamard) else DEFAULT_TOL


def matrices_equal(a: HadamardMatrix, b: HadamardMatrix, tol: Optional[float] = None) -> bool:
    """Entrywise equality: exact when both sides are Butson, else within tol."""
    if isinstance(a, ButsonMatrix) and isinstance(b, ButsonMatrix):
        return a == b
    if tol is None:
        tol = max(_tol_of(a), _tol_of(b))
    if a.n != b.n:
        return False
    return bool(np.max(np.abs(to_complex(a) - to_complex(b))) <= tol)


@dataclass(frozen=True)
class HadamardCheck:
    """Outcome of the Hadamard test, with the first failing row pair."""

    ok: bool
    reason: Optional[str] = None
    pair: Optional[tuple[int, int]] = None

    def __bool__(self):
        return self.ok


def _butson_pair_hists(m: ButsonMatrix) -> np.ndarray:
    """Histogram over exponents of the row-pair products, shape (n, n, l)."""
    diffs = (m.exps[:, None, :] - m.exps[None, :, :]) % m.level
    onehot = diffs[..., None] == np.arange(m.level)
    return onehot.sum(axis=2).astype(np.int64)


def is_hadamard(m: HadamardMatrix) -> HadamardCheck:
    """Unit modulus plus pairwise row orthogonality, exact or within tol."""
    if isinstance(m, ButsonMatrix):
        red = reduction_matrix(m.level)
        canon = _butson_pair_hists(m) @ red
        for i in range(m.n):
            for j in range(i + 1, m.n):
                if np.any(canon[i, j]):
                    return HadamardCheck(False, "rows not orthogonal", (i, j))
        return HadamardCheck(True)
    h = m.entries
    bad = np.abs(np.abs(h) - 1) > m.tol
    if bad.any():
        i, j = np.argwhere(bad)[0]
        return HadamardCheck(False, "entry not unit modulus", (int(i), int(j)))
    gram = h @ h.conj().T
    limit = m.n * m.tol
    for i in range(m.n):
        for j in range(i + 1, m.n):
            if abs(gram[i, j]) > limit:
                return HadamardCheck(False, "rows not orthogonal", (i, j))
    return HadamardCheck(True)


def fourier(n: int) -> ButsonMatrix:
    """The n x n Fourier matrix, exponent (i*j) mod n in 0-based indexing."""
    if n < 1:
        raise ValueError("n must be positive")
    idx = np.arange(n)
    return ButsonMatrix(n, np.outer(idx, idx) % n if n > 1 else [[0]])


def level(m: ButsonMatrix) -> int:
    """Smallest l' such that every entry is an l'-th root of unity."""
    if not isinstance(m, ButsonMatrix):
        raise TypeError("level is defined for Butson matrices")
    g = int(np.gcd.reduce(m.exps, axis=None))
    return m.level // math.gcd(g, m.level)


def tensor(h: HadamardMatrix, k: HadamardMatrix) -> HadamardMatrix:
    """Kronecker product with (i,a) lexicographic index order."""
    if isinstance(h, ButsonMatrix) and isinstance(k, ButsonMatrix):
        L = math.lcm(h.level, k.level)
        eh = h.exps * (L // h.level)
        ek = k.exps * (L // k.level)
        exps = (eh[:, None, :, None] + ek[None, :, None, :]) % L
        return ButsonMatrix(L, exps.reshape(h.n * k.n, h.n * k.n))
    ent = np.kron(to_complex(h), to_complex(k))
    return ComplexHadamard(ent, max(_tol_of(h), _tol_of(k)))


def dita_product(h: HadamardMatrix, ks: Sequence[HadamardMatrix]) -> HadamardMatrix:
    """Block construction (h_ij * k^j_ab): factor j scales block column j."""
    if len(ks) != h.n:
        raise ShapeError(f"need {h.n} inner factors, got {len(ks)}")
    m = ks[0].n
    if any(k.n != m for k in ks):
        raise ShapeError("inner factors must share one size")
    if isinstance(h, ButsonMatrix) and all(isinstance(k, ButsonMatrix) for k in ks):
        L = math.lcm(h.level, *[k.level for k in ks])
        eh = h.exps * (L // h.level)
        out = np.zeros((h.n * m, h.n * m), dtype=np.int64)
        for j, k in enumerate(ks):
            ek = k.exps * (L // k.level)
            for i in range(h.n):
                out[i * m:(i + 1) * m, j * m:(j + 1) * m] = (eh[i, j] + ek) % L
        return ButsonMatrix(L, out)
    hc = to_complex(h)
    out = np.zeros((h.n * m, h.n * m), dtype=np.complex128)
    for j, k in enumerate(ks):
        kc = to_complex(k)
        for i in range(h.n):
            out[i * m:(i + 1) * m, j * m:(j + 1) * m] = hc[i, j] * kc
    return ComplexHadamard(out, max(_tol_of(h), *[_tol_of(k) for k in ks]))


def as_root_of_unity(z: complex, max_order: int = 240, tol: float = 1e-12) -> Optional[tuple[int, int]]:
    """Recognize z as e^{2*pi*i*k/d}; returns (k, d) with the least d, or None."""
    if abs(abs(z) - 1) > tol:
        return None
    angle = np.angle(z) / (2 * np.pi)
    for d in range(1, max_order + 1):
        k = round(angle * d) % d
        if abs(z - np.exp(2j * np.pi * k / d)) <= tol:
            return (k, d)
    return None


def dita_deform(h: HadamardMatrix, k: HadamardMatrix, params) -> HadamardMatrix:
    """Parameter-twisted tensor product (h_ij * l_aj * k_ab).

    `params` is an m x n unit-modulus matrix; with all ones this is exactly
    tensor(h, k).  When h, k are Butson and every parameter is a recognized
    root of unity, the result stays exact.
    """
    params = np.asarray(params, dtype=np.complex128)
    if params.shape != (k.n, h.n):
        raise ShapeError(f"parameter matrix must be {k.n} x {h.n}, got {params.shape}")
    if np.any(np.abs(np.abs(params) - 1) > 1e-9):
        raise ValueError("parameters must have unit modulus")
    if isinstance(h, ButsonMatrix) and isinstance(k, ButsonMatrix):
        roots = [as_root_of_unity(z) for z in params.ravel()]
        if all(r is not None for r in roots):
            L = math.lcm(h.level, k.level, *[d for (_, d) in roots])
            pexp = np.array([e * (L // d) for (e, d) in roots], dtype=np.int64).reshape(params.shape)
            eh = h.exps * (L // h.level)
            ek = k.exps * (L // k.level)
            exps = (eh[:, None, :, None] + pexp[None, :, :, None] + ek[None, :, None, :]) % L
            return ButsonMatrix(L, exps.reshape(h.n * k.n, h.n * k.n))
    hc, kc = to_complex(h), to_complex(k)
    ent = hc[:, None, :, None] * params[None, :, :, None] * kc[None, :, None, :]
    return ComplexHadamard(ent.reshape(h.n * k.n, h.n * k.n), max(_tol_of(h), _tol_of(k)))


@dataclass
class EquivalenceWitness:
    """Row/column permutations and unit scalars carrying one matrix to another.

    Application convention: apply(M)[i, j] =
    row_scalars[i] * col_scalars[j] * M[row_perm[i], col_perm[j]].
    When the witness was found by an exact search, the scalars are also kept
    as root-of-unity exponents so Butson inputs stay Butson.
    """

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_scalars: np.ndarray
    col_scalars: np.ndarray
    exact_level: Optional[int] = None
    row_exps: Optional[np.ndarray] = None
    col_exps: Optional[np.ndarray] = None

    @classmethod
    def identity(cls, n: int) -> "EquivalenceWitness":
        return cls.exact(1, tuple(range(n)), tuple(range(n)), np.zeros(n, dtype=np.int64), np.zeros(n, dtype=np.int64))

    @classmethod
    def exact(cls, lvl, row_perm, col_perm, row_exps, col_exps) -> "EquivalenceWitness":
        row_exps = np.asarray(row_exps, dtype=np.int64) % lvl
        col_exps = np.asarray(col_exps, dtype=np.int64) % lvl
        return cls(
            tuple(row_perm),
            tuple(col_perm),
            np.exp(2j * np.pi * row_exps / lvl),
            np.exp(2j * np.pi * col_exps / lvl),
            exact_level=lvl,
            row_exps=row_exps,
            col_exps=col_exps,
        )

    @property
    def n(self) -> int:
        return len(self.row_perm)

    @property
    def is_exact(self) -> bool:
        return self.exact_level is not None

    def apply(self, m: HadamardMatrix) -> HadamardMatrix:
        rp = np.array(self.row_perm)
        cp = np.array(self.col_perm)
        if isinstance(m, ButsonMatrix) and self.is_exact:
            L = math.lcm(m.level, self.exact_level)
            e = m.exps[np.ix_(rp, cp)] * (L // m.level)
            re = self.row_exps * (L // self.exact_level)
            ce = self.col_exps * (L // self.exact_level)
            return ButsonMatrix(L, (e + re[:, None] + ce[None, :]) % L)
        ent = to_complex(m)[np.ix_(rp, cp)] * self.row_scalars[:, None] * self.col_scalars[None, :]
        return ComplexHadamard(ent, _tol_of(m))

    def compose(self, other: "EquivalenceWitness") -> "EquivalenceWitness":
        """Witness performing `other` first, then `self`."""
        rp = tuple(other.row_perm[i] for i in self.row_perm)
        cp = tuple(other.col_perm[j] for j in self.col_perm)
        if self.is_exact and other.is_exact:
            L = math.lcm(self.exact_level, other.exact_level)
            re = (self.row_exps * (L // self.exact_level)
                  + other.row_exps[list(self.row_perm)] * (L // other.exact_level)) % L
            ce = (self.col_exps * (L // self.exact_level)
                  + other.col_exps[list(self.col_perm)] * (L // other.exact_level)) % L
            return EquivalenceWitness.exact(L, rp, cp, re, ce)
        rs = self.row_scalars * other.row_scalars[list(self.row_perm)]
        cs = self.col_scalars * other.col_scalars[list(self.col_perm)]
        return EquivalenceWitness(rp, cp, rs, cs)

    def inverse(self) -> "EquivalenceWitness":
        n = self.n
        rinv = [0] * n
        cinv = [0] * n
        for i, p in enumerate(self.row_perm):
            rinv[p] = i
        for j, p in enumerate(self.col_perm):
            cinv[p] = j
        if self.is_exact:
            L = self.exact_level
            re = (-self.row_exps[rinv]) % L
            ce = (-self.col_exps[cinv]) % L
            return EquivalenceWitness.exact(L, tuple(rinv), tuple(cinv), re, ce)
        rs = 1 / self.row_scalars[rinv]
        cs = 1 / self.col_scalars[cinv]
        return EquivalenceWitness(tuple(rinv), tuple(cinv), rs, cs)


def random_witness(n: int, rng: np.random.Generator, exact_level: Optional[int] = None) -> EquivalenceWitness:
    """A uniformly random equivalence move, exact when a level is given."""
    rp = tuple(rng.permutation(n).tolist())
    cp = tuple(rng.permutation(n).tolist())
    if exact_level is not None:
        return EquivalenceWitness.exact(
            exact_level, rp, cp,
            rng.integers(0, exact_level, n), rng.integers(0, exact_level, n),
        )
    rs = np.exp(2j * np.pi * rng.random(n))
    cs = np.exp(2j * np.pi * rng.random(n))
    return EquivalenceWitness(rp, cp, rs, cs)


def dephase(m: HadamardMatrix) -> tuple[HadamardMatrix, EquivalenceWitness]:
    """Normalize the first row and column to ones; returns (matrix, witness).

    The witness applied to the input reproduces the returned matrix;
    idempotent on dephased input.
    """
    n = m.n
    ident = tuple(range(n))
    if isinstance(m, ButsonMatrix):
        L = m.level
        re = (m.exps[0, 0] - m.exps[:, 0]) % L
        ce = (-m.exps[0, :]) % L
        w = EquivalenceWitness.exact(L, ident, ident, re, ce)
    else:
        h = m.entries
        rs = h[0, 0] / h[:, 0]
        cs = 1 / h[0, :]
        w = EquivalenceWitness(ident, ident, rs, cs)
    return w.apply(m), w


@dataclass(frozen=True)
class RegularityReport:
    """Per-pair cycle profiles of the row scalar products."""

    n: int
    profiles: dict
    regular: bool

    def profile_counts(self) -> dict:
        out: dict = {}
        for prof in self.profiles.values():
            key = prof if prof is not None else None
            out[key] = out.get(key, 0) + 1
        return out


def is_regular(m: HadamardMatrix, tol: float = DEFAULT_TOL) -> RegularityReport:
    """Decompose every row-pair product into prime cycles, if possible.

    Exact on Butson input, tolerance-based on complex input.  A pair whose
    product multiset does not decompose gets profile None and makes the
    matrix non-regular.
    """
    n = m.n
    profiles = {}
    ok = True
    if isinstance(m, ButsonMatrix):
        for i in range(n):
            for j in range(i + 1, n):
                diffs = (m.exps[i] - m.exps[j]) % m.level
                dec = cycle_decompose(ExponentMultiset.of(diffs.tolist(), m.level))
                profiles[(i, j)] = dec.profile if dec is not None else None
                ok = ok and dec is not None
    else:
        h = m.entries
        for i in range(n):
            for j in range(i + 1, n):
                prods = h[i] * np.conj(h[j])
                dec = cycle_decompose_approx(prods.tolist(), tol=max(tol, 1e3 * np.finfo(float).eps))
                profiles[(i, j)] = dec.profile if dec is not None else None
                ok = ok and dec is not None
    return RegularityReport(n, profiles, ok)


# ---------------------------------------------------------------------------
# Equivalence search
# ---------------------------------------------------------------------------


def _canonical_shift(mult: Sequence[int], L: int) -> tuple[int, ...]:
    """Lexicographically least sorted form of a multiset under global shift."""
    best = None
    for e in set(mult):
        cand = tuple(sorted((x - e) % L for x in mult))
        if best is None or cand < best:
            best = cand
    return best if best is not None else tuple()


def _edge_fp_exact(E: np.ndarray, L: int) -> dict:
    n = E.shape[0]
    fp = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                fp[(i, j)] = _canonical_shift(((E[i] - E[j]) % L).tolist(), L)
    return fp


def _edge_fp_complex(h: np.ndarray) -> dict:
    n = h.shape[0]
    fp = {}
    for i in range(n):
        for j in range(n):
            if i != j:
                prods = h[i] * np.conj(h[j])
                ps = tuple(round(abs(np.sum(prods ** m)), 6) for m in range(1, n + 1))
                fp[(i, j)] = ps
    return fp


class _Budget:
    __slots__ = ("left",)

    def __init__(self, n):
        self.left = n

    def spend(self, k=1):
        self.left -= k
        if self.left < 0:
            raise SearchBudgetExceeded("equivalence search budget exhausted")


def _row_match_search(n, fp_a, fp_b, try_complete, budget: _Budget):
    """Backtrack over row bijections consistent with the pair fingerprints.

    Calls try_complete(rho) on every full assignment; the first non-None
    result is returned.
    """
    vfp_a = {i: tuple(sorted(fp_a[(i, j)] for j in range(n) if j != i)) for i in range(n)}
    vfp_b = {i: tuple(sorted(fp_b[(i, j)] for j in range(n) if j != i)) for i in range(n)}
    if sorted(vfp_a.values()) != sorted(vfp_b.values()):
        return None
    cand = {i: [b for b in range(n) if vfp_b[b] == vfp_a[i]] for i in range(n)}
    order = sorted(range(n), key=lambda i: len(cand[i]))
    rho = [-1] * n
    used = [False] * n

    def place(t):
        if t == n:
            return try_complete(tuple(rho))
        i = order[t]
        for b in cand[i]:
            if used[b]:
                continue
            budget.spend()
            if any(
                fp_a[(i, order[s])] != fp_b[(b, rho[order[s]])]
                or fp_a[(order[s], i)] != fp_b[(rho[order[s]], b)]
                for s in range(t)
            ):
                continue
            rho[i] = b
            used[b] = True
            res = place(t + 1)
            used[b] = False
            rho[i] = -1
            if res is not None:
                return res
        return None

    return place(0)


def _column_bijection(keys_a: list, keys_b: list) -> Optional[list[int]]:
    """Match equal keys bijectively; returns tau with keys_a[j] == keys_b[tau[j]]."""
    pool: dict = {}
    for idx, key in enumerate(keys_b):
        pool.setdefault(key, []).append(idx)
    tau = []
    for key in keys_a:
        bucket = pool.get(key)
        if not bucket:
            return None
        tau.append(bucket.pop())
    return tau


def _equivalent_exact(a: ButsonMatrix, b: ButsonMatrix, budget: _Budget) -> Optional[EquivalenceWitness]:
    n = a.n
    L = math.lcm(a.level, b.level)
    a0, wa = dephase(a)
    b0, wb = dephase(b)
    EA = a0.exps * (L // a0.level)
    EB = b0.exps * (L // b0.level)
    fp_a = _edge_fp_exact(EA, L)
    fp_b = _edge_fp_exact(EB, L)

    col_keys_a = [tuple(EA[:, j]) for j in range(n)]

    def try_complete(rho):
        for c0 in range(n):
            budget.spend()
            base = EB[list(rho)]  # rows of B0 in A-row order
            N = (base - EB[rho[0]][None, :] - base[:, [c0]] + EB[rho[0], c0]) % L
            keys_b = [tuple(N[:, j]) for j in range(n)]
            tau = _column_bijection(col_keys_a, keys_b)
            if tau is None:
                continue
            sigma = [0] * n
            for i, r in enumerate(rho):
                sigma[r] = i
            kappa = [0] * n
            for j, c in enumerate(tau):
                kappa[c] = j
            le = EB[:, c0] % L
            ce = (EB[rho[0], :] - EB[rho[0], c0]) % L
            w0 = EquivalenceWitness.exact(L, tuple(sigma), tuple(kappa), le, ce)
            if not matrices_equal(w0.apply(a0), b0):
                continue
            w = wb.inverse().compose(w0).compose(wa)
            assert matrices_equal(w.apply(a), b)
            return w
        return None

    return _row_match_search(n, fp_a, fp_b, try_complete, budget)


def _ckey(z: complex, digits: int = 8):
    re = round(z.real, digits) + 0.0
    im = round(z.imag, digits) + 0.0
    return (re, im)


def _equivalent_complex(a: HadamardMatrix, b: HadamardMatrix, budget: _Budget) -> Optional[EquivalenceWitness]:
    n = a.n
    tol = max(_tol_of(a), _tol_of(b), 1e-8)
    a0, wa = dephase(a)
    b0, wb = dephase(b)
    HA = to_complex(a0)
    HB = to_complex(b0)
    fp_a = _edge_fp_complex(HA)
    fp_b = _edge_fp_complex(HB)

    col_keys_a = [tuple(_ckey(z) for z in HA[:, j]) for j in range(n)]

    def try_complete(rho):
        for c0 in range(n):
            budget.spend()
            base = HB[list(rho)]
            N = base * HB[rho[0], c0] / (base[:, [c0]] * HB[rho[0]][None, :])
            keys_b = [tuple(_ckey(z) for z in N[:, j]) for j in range(n)]
            tau = _column_bijection(col_keys_a, keys_b)
            if tau is None:
                continue
            sigma = [0] * n
            for i, r in enumerate(rho):
                sigma[r] = i
            kappa = [0] * n
            for j, c in enumerate(tau):
                kappa[c] = j
            rs = HB[:, c0]
            cs = HB[rho[0], :] / HB[rho[0], c0]
            w0 = EquivalenceWitness(tuple(sigma), tuple(kappa), rs, cs)
            if not matrices_equal(w0.apply(a0), b0, tol=n * tol):
                continue
            w = wb.inverse().compose(w0).compose(wa)
            if matrices_equal(w.apply(a), b, tol=n * tol):
                return w
        return None

    return _row_match_search(n, fp_a, fp_b, try_complete, budget)


def equivalent(
    a: HadamardMatrix, b: HadamardMatrix, node_budget: int = DEFAULT_NODE_BUDGET
) -> Optional[EquivalenceWitness]:
    """Search for an equivalence witness carrying a to b.

    Returns a verified witness, or None when the pruned search exhausts all
    candidates.  Raises SearchBudgetExceeded when the node budget runs out
    first (an honestly undecided outcome, distinct from None).  Transposition
    is not among the allowed moves.
    """
    if a.n != b.n:
        raise ShapeError(f"size mismatch: {a.n} vs {b.n}")
    budget = _Budget(node_budget)
    if isinstance(a, ButsonMatrix) and isinstance(b, ButsonMatrix):
        return _equivalent_exact(a, b, budget)
    return _equivalent_complex(a, b, budget)
