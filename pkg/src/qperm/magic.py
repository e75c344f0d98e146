"""Magic bases, Gram tensors, the Gram graph, and Latin-square detection.

A magic basis is an n x n array of vectors whose rows and columns are
orthogonal bases of C^n.  Hadamard matrices induce them via entrywise row
ratios, Latin squares via repeated standard basis vectors.  The Gram data
of a basis drives every invariant computed here; bases sourced from Butson
matrices carry exact root-of-unity exponents so their Gram tensors are
exact cyclotomic integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cyclotomic import DEFAULT_TOL, reduction_matrix
from .errors import ResourceCapExceeded, ShapeError
from .groups import LatinSquare, abelian_invariant_factors, latin_group
from .hadamard import ButsonMatrix, HadamardMatrix, to_complex

__all__ = [
    "MagicBasis",
    "MagicCheck",
    "BaseGram",
    "GramTensor",
    "GramGraph",
    "magic_from_hadamard",
    "latin_basis",
    "tensor_basis",
    "verify_magic",
    "gram",
    "higher_gram",
    "gram_graph",
    "components",
    "detect_latin",
    "fourier_tensor_decompose",
]

HIGHER_GRAM_ENTRY_CAP = 1 << 22


class MagicBasis:
    """n x n array of vectors in C^n; vectors[i, j] is the (i, j) cell."""

    __slots__ = ("n", "vectors", "level", "exps", "tol", "_gram")

    def __init__(self, vectors, level: Optional[int] = None, exps=None, tol: float = DEFAULT_TOL):
        vectors = np.asarray(vectors, dtype=np.complex128)
        if vectors.ndim != 3 or len({*vectors.shape}) != 1:
            raise ShapeError(f"expected an (n, n, n) array, got {vectors.shape}")
        vectors = vectors.copy()
        vectors.setflags(write=False)
        self.n = vectors.shape[0]
        self.vectors = vectors
        self.level = level
        self.exps = None
        if exps is not None:
            exps = np.asarray(exps, dtype=np.int64) % level
            exps.setflags(write=False)
            self.exps = exps
        self.tol = tol
        self._gram = None

    @property
    def is_exact(self) -> bool:
        return self.exps is not None

    def gram(self) -> "BaseGram":
        if self._gram is None:
            self._gram = _compute_gram(self)
        return self._gram


def magic_from_hadamard(h: HadamardMatrix) -> MagicBasis:
    """The basis of entrywise row ratios, cell (i, j) holding row_i / row_j."""
    if isinstance(h, ButsonMatrix):
        e = (h.exps[:, None, :] - h.exps[None, :, :]) % h.level
        vec = np.exp(2j * np.pi * e / h.level)
        return MagicBasis(vec, level=h.level, exps=e)
    hm = h.entries
    vec = hm[:, None, :] / hm[None, :, :]
    return MagicBasis(vec, tol=h.tol)


def latin_basis(sq: LatinSquare) -> MagicBasis:
    """Cell (i, j) holds the standard basis vector numbered by the square."""
    n = sq.n
    vec = np.zeros((n, n, n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            vec[i, j, sq.cells[i, j] - 1] = 1.0
    return MagicBasis(vec)


def tensor_basis(x: MagicBasis, y: MagicBasis) -> MagicBasis:
    """Cellwise vector tensor product, (i,a),(j,b) -> xi_ij (x) rho_ab."""
    n, m = x.n, y.n
    vec = np.einsum("ijk,abc->iajbkc", x.vectors, y.vectors).reshape(n * m, n * m, n * m)
    if x.is_exact and y.is_exact:
        L = math.lcm(x.level, y.level)
        ex = x.exps * (L // x.level)
        ey = y.exps * (L // y.level)
        e = (
            ex[:, None, :, None, :, None] + ey[None, :, None, :, None, :]
        ).reshape(n * m, n * m, n * m) % L
        return MagicBasis(vec, level=L, exps=e)
    return MagicBasis(vec, tol=max(x.tol, y.tol))


@dataclass(frozen=True)
class MagicCheck:
    ok: bool
    reason: Optional[str] = None
    where: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def verify_magic(xi: MagicBasis, tol: Optional[float] = None) -> MagicCheck:
    """Every row and column of the cell array must be an orthogonal basis."""
    n = xi.n
    tol = xi.tol if tol is None else tol
    g = xi.gram()
    if xi.is_exact:
        def inner_zero(i, j, a, b):
            return not np.any(g.coeffs[i, j, a, b])
        def norm_zero(i, j):
            return not np.any(g.coeffs[i, j, i, j])
    else:
        limit = n * tol
        def inner_zero(i, j, a, b):
            return abs(g.values[i, j, a, b]) <= limit
        def norm_zero(i, j):
            return abs(g.values[i, j, i, j]) <= limit
    for i in range(n):
        for j in range(n):
            if norm_zero(i, j):
                return MagicCheck(False, "zero vector in the array", (i, j))
    for i in range(n):
        for j in range(n):
            for b in range(j + 1, n):
                if not inner_zero(i, j, i, b):
                    return MagicCheck(False, "row not orthogonal", (i, j, i, b))
    for j in range(n):
        for i in range(n):
            for a in range(i + 1, n):
                if not inner_zero(i, j, a, j):
                    return MagicCheck(False, "column not orthogonal", (i, j, a, j))
    return MagicCheck(True)


@dataclass
class BaseGram:
    """All pairwise inner products: values[i, j, a, b] = <xi_ij, xi_ab>.

    Read as a transfer tensor this is exactly the order-2 building block of
    the higher Gram chain.  For exact sources, coeffs[..., t] holds the
    integer coefficient of zeta_level^t.
    """

    n: int
    values: np.ndarray
    level: Optional[int] = None
    coeffs: Optional[np.ndarray] = None

    @property
    def is_exact(self) -> bool:
        return self.coeffs is not None

    def as_order2(self) -> "GramTensor":
        """The same data as the order-2 higher Gram tensor G^2_{ai,bj}."""
        n = self.n
        vals = self.values.transpose(2, 0, 3, 1).reshape(n * n, n * n)
        if self.is_exact:
            co = self.coeffs.transpose(2, 0, 3, 1, 4).reshape(n * n, n * n, -1)
            return GramTensor(n, 2, vals, self.level, co)
        return GramTensor(n, 2, vals)


def _compute_gram(xi: MagicBasis) -> BaseGram:
    v = xi.vectors
    values = np.einsum("ijk,abk->ijab", v, np.conj(v))
    if not xi.is_exact:
        return BaseGram(xi.n, values)
    L = xi.level
    d = (xi.exps[:, :, None, None, :] - xi.exps[None, None, :, :, :]) % L
    hist = (d[..., None] == np.arange(L)).sum(axis=4).astype(np.int64)
    coeffs = hist @ reduction_matrix(L)
    return BaseGram(xi.n, values, L, coeffs)


def gram(xi: MagicBasis) -> BaseGram:
    """All pairwise inner products of the basis cells (cached on the basis)."""
    return xi.gram()


@dataclass
class GramTensor:
    """Order-k Gram tensor as an n^k x n^k matrix over flattened index tuples."""

    n: int
    order: int
    values: np.ndarray
    level: Optional[int] = None
    coeffs: Optional[np.ndarray] = None

    @property
    def is_exact(self) -> bool:
        return self.coeffs is not None


def _fold_tensor(L: int) -> np.ndarray:
    """F[u, v, w] = 1 when zeta^u * zeta^v contributes to power w (mod L)."""
    F = np.zeros((L, L, L), dtype=np.int64)
    for u in range(L):
        for v in range(L):
            F[u, v, (u + v) % L] = 1
    return F


def _cyclo_mul(a: np.ndarray, b: np.ndarray, fold: np.ndarray, red: np.ndarray) -> np.ndarray:
    """Entrywise product of coefficient arrays along their last axis."""
    prod = np.einsum("...u,...v,uvw->...w", a, b, fold)
    return prod @ red


def higher_gram(xi: MagicBasis, k: int, entry_cap: int = HIGHER_GRAM_ENTRY_CAP) -> GramTensor:
    """Chained product of base Gram factors over index tuples of length k.

    Exact (integer cyclotomic coefficients) whenever the basis is exact.
    Raises ResourceCapExceeded when the n^{2k} entries would exceed
    entry_cap.
    """
    if k < 1:
        raise ValueError("order must be at least 1")
    n = xi.n
    if n ** (2 * k) > entry_cap:
        raise ResourceCapExceeded(
            f"higher Gram tensor needs {n ** (2 * k)} entries, over the cap {entry_cap}",
            cap_name="higher_gram_entry_cap",
            cap_value=entry_cap,
        )
    g = xi.gram()
    vals = _chain_expand(g.values, n, k)
    if not xi.is_exact:
        return GramTensor(n, k, vals)
    L = g.level
    co = _chain_expand_exact(g.coeffs, n, k, L)
    return GramTensor(n, k, vals, L, co)


def _chain_expand(Bt: np.ndarray, n: int, k: int) -> np.ndarray:
    """G^k as an n^k x n^k array, built one chain factor at a time.

    Index tuples flatten big-endian: (i_1, ..., i_t) -> I*n + i_t.
    """
    arr = np.ones((n, n), dtype=np.complex128)
    if k == 1:
        return arr
    size = n
    Btr = Bt.transpose(2, 3, 0, 1)  # [i_prev, j_prev, i_t, j_t]
    for _ in range(2, k + 1):
        ip = np.arange(size) % n
        C = Btr[ip][:, ip]  # [I, J, i_t, j_t]
        arr = (arr[:, :, None, None] * C).transpose(0, 2, 1, 3)
        arr = arr.reshape(size * n, size * n)
        size *= n
    return arr


def _chain_expand_exact(Bco: np.ndarray, n: int, k: int, L: int) -> np.ndarray:
    red = reduction_matrix(L)
    fold = _fold_tensor(L)
    one = np.zeros(L, dtype=np.int64)
    one[0] = 1
    arr = np.tile(one, (n, n, 1))
    if k == 1:
        return arr
    size = n
    Btr = Bco.transpose(2, 3, 0, 1, 4)  # [i_prev, j_prev, i_t, j_t, L]
    for _ in range(2, k + 1):
        ip = np.arange(size) % n
        C = Btr[ip][:, ip]  # [I, J, i_t, j_t, L]
        out = np.empty((size, n, size, n, L), dtype=np.int64)
        chunk = max(1, (1 << 24) // (size * n * n * L * L + 1))
        for start in range(0, size, chunk):
            sl = slice(start, min(start + chunk, size))
            right = C[sl].transpose(0, 2, 1, 3, 4)  # (I, i_t, J, j_t, L)
            left = np.broadcast_to(arr[sl][:, None, :, None, :], right.shape)
            out[sl] = _cyclo_mul(left, right, fold, red)
        arr = out.reshape(size * n, size * n, L)
        size *= n
    return arr


class GramGraph:
    """Graph on the n^2 index pairs; edges where cross inner products survive."""

    __slots__ = ("n", "adjacency")

    def __init__(self, n: int, adjacency: np.ndarray):
        self.n = n
        self.adjacency = adjacency

    def components(self) -> int:
        m = self.n * self.n
        seen = [False] * m
        count = 0
        for start in range(m):
            if seen[start]:
                continue
            count += 1
            stack = [start]
            seen[start] = True
            while stack:
                u = stack.pop()
                for w in np.flatnonzero(self.adjacency[u]):
                    if not seen[w]:
                        seen[w] = True
                        stack.append(int(w))
        return count


def gram_graph(xi: MagicBasis, tol: Optional[float] = None) -> GramGraph:
    """Vertices (i, l); an edge (i, l) - (r, j) when <xi_lj, xi_ir> is nonzero."""
    n = xi.n
    g = xi.gram()
    if xi.is_exact:
        nz = np.any(g.coeffs, axis=4)
    else:
        tol = xi.tol if tol is None else tol
        nz = np.abs(g.values) > n * tol
    # entry constraint links (i, l) with (r, j) via <xi_lj, xi_ir> = values[l, j, i, r]
    adj = np.zeros((n * n, n * n), dtype=bool)
    for i in range(n):
        for l in range(n):
            u = i * n + l
            for r in range(n):
                for j in range(n):
                    if nz[l, j, i, r]:
                        v = r * n + j
                        if u != v:
                            adj[u, v] = True
                            adj[v, u] = True
    return GramGraph(n, adj)


def components(graph: GramGraph) -> int:
    return graph.components()


def detect_latin(xi: MagicBasis, tol: Optional[float] = None) -> Optional[LatinSquare]:
    """Recover a Latin square when the cells fall into n ray classes.

    Requires every pair of cells to be proportional or orthogonal, exactly n
    proportionality classes, and the class labels to form a Latin square.
    Labels follow first appearance in row-major order, so the Fourier basis
    comes out as the circulant square.
    """
    n = xi.n
    g = xi.gram()
    if xi.is_exact:
        coeffs = g.coeffs

        def relation(i, j, a, b):
            z = coeffs[i, j, a, b]
            if not np.any(z):
                return "orthogonal"
            # |z|^2 == norm_ij * norm_ab, all exact integers in Z[zeta]
            zsq = _cyclo_abs2(z, g.level)
            norms = _cyclo_mul_single(
                coeffs[i, j, i, j], coeffs[a, b, a, b], g.level
            )
            return "proportional" if np.array_equal(zsq, norms) else "neither"
    else:
        tol_ = xi.tol if tol is None else tol

        def relation(i, j, a, b):
            z = g.values[i, j, a, b]
            if abs(z) <= n * tol_:
                return "orthogonal"
            na = g.values[i, j, i, j].real
            nb = g.values[a, b, a, b].real
            if abs(abs(z) ** 2 - na * nb) <= 10 * n * n * max(tol_, 1e-12) * na:
                return "proportional"
            return "neither"

    labels = -np.ones((n, n), dtype=np.int64)
    reps: list[tuple[int, int]] = []
    for i in range(n):
        for j in range(n):
            assigned = None
            for cls, (a, b) in enumerate(reps):
                rel = relation(i, j, a, b)
                if rel == "proportional":
                    assigned = cls
                elif rel == "neither":
                    return None
                if assigned is not None:
                    break
            if assigned is None:
                reps.append((i, j))
                assigned = len(reps) - 1
            labels[i, j] = assigned
    if len(reps) != n:
        return None
    try:
        return LatinSquare(labels + 1)
    except ValueError:
        return None


def _cyclo_abs2(z: np.ndarray, L: int) -> np.ndarray:
    conj = np.zeros_like(z)
    for t in range(L):
        conj[(-t) % L] += z[t]
    conj = conj @ reduction_matrix(L)
    return _cyclo_mul_single(z, conj, L)


def _cyclo_mul_single(a: np.ndarray, b: np.ndarray, L: int) -> np.ndarray:
    out = np.zeros(L, dtype=np.int64)
    for u in range(L):
        if a[u]:
            for v in range(L):
                if b[v]:
                    out[(u + v) % L] += a[u] * b[v]
    return out @ reduction_matrix(L)


def fourier_tensor_decompose(h: HadamardMatrix) -> Optional[list[int]]:
    """Cyclic factor sizes when h is a Fourier tensor in disguise.

    Detects a Latin structure on the induced basis, takes its symmetry
    group, and returns the abelian invariant factors; None when the basis
    is not Latin or the group is not abelian.
    """
    xi = magic_from_hadamard(h)
    sq = detect_latin(xi)
    if sq is None:
        return None
    grp = latin_group(sq)
    if not grp.abelian:
        return None
    return abelian_invariant_factors(grp)
