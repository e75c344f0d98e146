"""Intertwiner-space dimensions from higher Gram tensors.

The space Hom(u^k, u^l) attached to a magic basis is the solution set of
(1 (x) T (x) 1) G^{k+2} = G^{l+2} (1 (x) T (x) 1) in the n^l x n^k unknown
T.  Grouping the equations by their four boundary indices (r, p, s, q)
turns the system into a family of n^4 Sylvester-type constraints
T X[rpsq] = Y[rpsq] T with X, Y slices of the higher Gram tensors, which is
what all three solvers below consume.

Solvers:

* exact_dense - fraction-free elimination over Z[zeta_l] on the deduplicated
  equation rows; used for Butson sources with at most 100 unknowns.
* dense       - the stacked complex constraint matrix, rank by SVD.
* sketch      - random functionals u* ((1xTx1) G^{k+2} - G^{l+2} (1xTx1)) v
  evaluated by chained tensor contractions, never materializing the system;
  rank by pivoted QR at relative threshold 1e-8, two seeds must agree.
"""

from __future__ import annotations

from math import gcd
from typing import Optional

import numpy as np
import scipy.linalg

from .cyclotomic import _power_table
from .errors import ResourceCapExceeded, UnstableRankError
from .magic import MagicBasis, _chain_expand_exact

__all__ = ["hom_dim", "HOM_ROWS_CAP", "HOM_DENSE_ENTRY_CAP"]

HOM_ROWS_CAP = 10**6
HOM_DENSE_ENTRY_CAP = 10**7
EXACT_UNKNOWNS_CAP = 100
EXACT_ROW_GUARD = 200_000
SKETCH_RELTOL = 1e-8


def hom_dim(
    xi: MagicBasis,
    k: int,
    l: int,
    method: str = "auto",
    seed: int = 0,
    rows_cap: int = HOM_ROWS_CAP,
    dense_entry_cap: int = HOM_DENSE_ENTRY_CAP,
) -> int:
    """Dimension of Hom(u^{(x)k}, u^{(x)l}) for the basis xi.

    method "exact_dense" builds the constraint system (exactly over
    cyclotomic integers when the basis is exact and has at most 100
    unknowns, otherwise in floats) and eliminates; it raises
    ResourceCapExceeded beyond rows_cap equations or dense_entry_cap matrix
    entries.  Method "sketch" draws n^{k+l} + 64 random functionals of the
    constraint residual for seed and seed+1 and insists the ranks agree.
    "auto" picks the strongest method the caps allow.
    """
    if k < 0 or l < 0:
        raise ValueError("tensor powers must be nonnegative")
    n = xi.n
    unknowns = n ** (k + l)
    rows = n ** (k + l + 4)
    if method == "auto":
        if xi.is_exact and unknowns <= EXACT_UNKNOWNS_CAP and rows <= rows_cap:
            try:
                return _exact_dense(xi, k, l)
            except ResourceCapExceeded:
                pass
        if rows <= rows_cap and rows * unknowns <= dense_entry_cap:
            return _dense(xi, k, l)
        return _sketch(xi, k, l, seed)
    if method == "exact_dense":
        if rows > rows_cap:
            raise ResourceCapExceeded(
                f"system has {rows} equations, over rows_cap={rows_cap}",
                cap_name="rows_cap",
                cap_value=rows_cap,
            )
        if xi.is_exact and unknowns <= EXACT_UNKNOWNS_CAP:
            return _exact_dense(xi, k, l)
        if rows * unknowns > dense_entry_cap:
            raise ResourceCapExceeded(
                f"dense system needs {rows * unknowns} entries, over dense_entry_cap={dense_entry_cap}",
                cap_name="dense_entry_cap",
                cap_value=dense_entry_cap,
            )
        return _dense(xi, k, l)
    if method == "sketch":
        return _sketch(xi, k, l, seed)
    raise ValueError(f"unknown method {method!r}")


def _transfer(xi: MagicBasis) -> np.ndarray:
    """Gram tensor of the unit-normalized cells, [x, y, x', y'].

    The projection calculus behind the intertwiner criterion assumes unit
    vectors; with raw cells of norm sqrt(n) the two sides of the equation
    would scale as n^k against n^l.
    """
    g = xi.gram().values
    n = xi.n
    norms = np.sqrt(np.abs(np.einsum("ijij->ij", g).real))
    return g / (norms[:, :, None, None] * norms[None, None, :, :])


def _boundary_slices(Bt: np.ndarray, k: int, r: int, s: int) -> np.ndarray:
    """X[A, J, p, q] = G^{k+2} over tuples (r, a_1..a_k, p), (s, j_1..j_k, q)."""
    n = Bt.shape[0]
    Btr = Bt.transpose(2, 3, 0, 1)  # [x_prev, y_prev, x, y]
    if k == 0:
        return Btr[r, s][None, None, :, :].copy()
    arr = Bt[:, :, r, s]  # [a1, j1]
    size = n
    for _ in range(2, k + 1):
        ip = np.arange(size) % n
        C = Btr[ip][:, ip]  # [A, J, a_t, j_t]
        arr = (arr[:, :, None, None] * C).transpose(0, 2, 1, 3).reshape(size * n, size * n)
        size *= n
    ip = np.arange(size) % n
    closing = Btr[ip][:, ip]  # [A, J, p, q]
    return arr[:, :, None, None] * closing


# ---------------------------------------------------------------------------
# dense float solver
# ---------------------------------------------------------------------------


def _dense(xi: MagicBasis, k: int, l: int) -> int:
    n = xi.n
    Bt = _transfer(xi)
    nk, nl = n**k, n**l
    unknowns = nl * nk
    carry = np.zeros((0, unknowns), dtype=np.complex128)
    scale = 0.0
    for r in range(n):
        for s in range(n):
            X = _boundary_slices(Bt, k, r, s)  # [A, J, p, q]
            Y = _boundary_slices(Bt, l, r, s)  # [I, B, p, q]
            Xr = X.transpose(2, 3, 1, 0).reshape(n * n, nk, nk)  # [pq, j, A]
            Yr = Y.transpose(2, 3, 0, 1).reshape(n * n, nl, nl)  # [pq, i, B]
            block = np.zeros((n * n, nl, nk, nl, nk), dtype=np.complex128)
            for i in range(nl):
                block[:, i, :, i, :] += Xr
            for j in range(nk):
                block[:, :, j, :, j] -= Yr
            flat = block.reshape(n * n * nl * nk, unknowns)
            # incremental triangularization keeps the singular values of the
            # stack without ever forming (or squaring) the full system
            stacked = np.vstack([carry, flat])
            carry = scipy.linalg.qr(stacked, mode="r")[0][: min(unknowns, stacked.shape[0])]
            scale = max(scale, float(np.abs(Xr).max()), float(np.abs(Yr).max()))
    if scale == 0.0:
        return unknowns
    sigma = scipy.linalg.svdvals(carry)
    thresh = SKETCH_RELTOL * max(float(sigma.max(initial=0.0)), scale)
    rank = int(np.count_nonzero(sigma > thresh))
    return unknowns - rank


# ---------------------------------------------------------------------------
# exact cyclotomic solver
# ---------------------------------------------------------------------------


def _scalar_mul_matrix(c: np.ndarray, shift_red: np.ndarray) -> np.ndarray:
    """Matrix M with (row @ M) the cyclotomic product row * c, canonical."""
    return np.einsum("v,vut->ut", c, shift_red)


def _exact_rank(rows: list[np.ndarray], L: int, width: int) -> int:
    """Fraction-free elimination over Z[zeta_L].

    Rows are (width, L) int arrays of canonical coefficient vectors; content
    is divided out after every combination step to slow coefficient growth.
    Arithmetic runs in int64 and escalates to Python integers (object dtype)
    when entries would overflow.
    """
    from .cyclotomic import _power_table

    red = np.array(_power_table(L), dtype=np.int64)
    shift_red = np.array(
        [[red[(u + v) % L] for u in range(L)] for v in range(L)], dtype=np.int64
    )  # [v, u, t]
    shift_red_obj = shift_red.astype(object)

    def mul_matrix(scalar):
        # matrix M with (cells @ M) the entrywise cyclotomic product by scalar
        if scalar.dtype == np.int64:
            return np.einsum("v,vut->ut", scalar, shift_red)
        return (scalar[:, None, None] * shift_red_obj).sum(axis=0)

    def absmax(arr):
        if arr.dtype == np.int64:
            return int(np.abs(arr).max(initial=0))
        return max((int(abs(c)) for c in arr.flat), default=0)

    def content_reduce(row):
        if row.dtype == np.int64:
            g = int(np.gcd.reduce(np.abs(row), axis=None))
        else:
            g = 0
            for c in row.flat:
                if c:
                    g = gcd(g, abs(int(c)))
                    if g == 1:
                        break
        if g > 1:
            row = row // g
        if row.dtype == object and absmax(row) < 1 << 60:
            row = row.astype(np.int64)
        return row

    pivots: list[tuple[int, np.ndarray]] = []
    rows = sorted(rows, key=lambda r: int(np.count_nonzero(np.any(r != 0, axis=1))))
    for row in rows:
        row = row.copy()
        for pc, prow in pivots:
            cell = row[pc]
            if not np.any(cell != 0):
                continue
            if (
                row.dtype == object
                or prow.dtype == object
                or absmax(row) * absmax(prow) * L * L > 1 << 62
            ):
                row = row.astype(object)
                prow_ = prow.astype(object)
            else:
                prow_ = prow
            row = row @ mul_matrix(prow_[pc]) - prow_ @ mul_matrix(row[pc])
            row = content_reduce(row)
        nz = np.flatnonzero(np.any(row != 0, axis=1))
        if nz.size:
            pivots.append((int(nz[0]), row))
            pivots.sort(key=lambda pr: pr[0])
    return len(pivots)


def _exact_dense(xi: MagicBasis, k: int, l: int) -> int:
    n = xi.n
    g = xi.gram()
    L = g.level
    nk, nl = n**k, n**l
    unknowns = nl * nk
    Gk = _chain_expand_exact(g.coeffs, n, k + 2, L)
    Gl = Gk if l == k else _chain_expand_exact(g.coeffs, n, l + 2, L)
    # boundary-sliced views [r, s, A, J, p, q, L] over tuple (r, A.., p)
    Xall = Gk.reshape(n, nk, n, n, nk, n, L).transpose(0, 3, 1, 4, 2, 5, 6)
    Yall = Gl.reshape(n, nl, n, n, nl, n, L).transpose(0, 3, 1, 4, 2, 5, 6)
    xcols: dict[bytes, int] = {}
    yrows: dict[bytes, int] = {}
    xstore: list[np.ndarray] = []
    ystore: list[np.ndarray] = []
    keyparts = []
    for r in range(n):
        for s in range(n):
            # X columns keyed by (j, p, q); Y rows keyed by (i, p, q)
            Xc = np.ascontiguousarray(
                Xall[r, s].transpose(1, 2, 3, 0, 4).reshape(nk * n * n, nk * L)
            )
            Yc = np.ascontiguousarray(
                Yall[r, s].transpose(0, 2, 3, 1, 4).reshape(nl * n * n, nl * L)
            )
            ux, invx = np.unique(Xc, axis=0, return_inverse=True)
            uy, invy = np.unique(Yc, axis=0, return_inverse=True)
            gx = np.empty(len(ux), dtype=np.int64)
            for t, urow in enumerate(ux):
                b = urow.tobytes()
                if b not in xcols:
                    xcols[b] = len(xstore)
                    xstore.append(urow.reshape(nk, L))
                gx[t] = xcols[b]
            gy = np.empty(len(uy), dtype=np.int64)
            for t, urow in enumerate(uy):
                b = urow.tobytes()
                if b not in yrows:
                    yrows[b] = len(ystore)
                    ystore.append(urow.reshape(nl, L))
                gy[t] = yrows[b]
            xid = gx[invx].reshape(nk, n, n)  # [j, p, q]
            yid = gy[invy].reshape(nl, n, n)  # [i, p, q]
            ii, jj = np.meshgrid(np.arange(nl), np.arange(nk), indexing="ij")
            for p in range(n):
                for q in range(n):
                    part = np.stack(
                        [ii.ravel(), jj.ravel(),
                         np.broadcast_to(xid[jj, p, q], ii.shape).ravel(),
                         np.broadcast_to(yid[ii, p, q], ii.shape).ravel()],
                        axis=1,
                    )
                    keyparts.append(part)
    keys = np.unique(np.concatenate(keyparts, axis=0), axis=0)
    if len(keys) > EXACT_ROW_GUARD:
        raise ResourceCapExceeded(
            "too many distinct exact rows",
            cap_name="exact_row_guard",
            cap_value=EXACT_ROW_GUARD,
        )
    # cells have exact norm^2 = n, so unit-normalizing both chains amounts
    # to scaling one side by an integer power of n
    xscale = n ** max(0, l - k)
    yscale = n ** max(0, k - l)
    rows = []
    for i, j, xi_id, yi_id in keys:
        row = np.zeros((unknowns, L), dtype=np.int64)
        row[i * nk:(i + 1) * nk] = xscale * xstore[xi_id]
        row[j::nk] -= yscale * ystore[yi_id]
        if row.any():
            rows.append(row)
    rank = _exact_rank(rows, L, unknowns)
    return unknowns - rank


# ---------------------------------------------------------------------------
# sketch solver
# ---------------------------------------------------------------------------


def _chain_apply(Bt: np.ndarray, m: int, V: np.ndarray) -> np.ndarray:
    """Apply G^m to a batch of vectors; V has shape (n^m, batch)."""
    n = Bt.shape[0]
    batch = V.shape[1]
    if m == 1:
        return np.ones((n, n), dtype=complex) @ V
    if m == 2:
        return np.einsum("abiw,wbf->iaf", Bt, V.reshape(n, n, batch)).reshape(n * n, batch)
    R = V.reshape(n, n, -1)  # (j1, j2, rest*batch)
    R = np.einsum("abiw,wbS->iabS", Bt, R)  # (i1, i2, j2, rest*batch)
    for t in range(3, m):
        P0 = n ** (t - 2)
        R = R.reshape(P0, n, n, n, -1)  # (prefix, i_{t-1}, j_{t-1}, j_t, rest)
        R = np.einsum("abiw,PiwbS->PiabS", Bt, R)
    R = R.reshape(n ** (m - 2), n, n, n, batch)
    R = np.einsum("abiw,Piwbf->Piaf", Bt, R)
    return R.reshape(n**m, batch)


def _sketch_rows(xi: MagicBasis, k: int, l: int, seed: int, m_rows: int) -> tuple[np.ndarray, float]:
    """Sketch matrix plus the scale of its unsubtracted terms.

    The scale anchors the rank threshold: when the residual operator is
    identically zero the rows are pure cancellation noise, which must not
    be mistaken for full rank.
    """
    n = xi.n
    Bt = _transfer(xi)
    BtT = np.ascontiguousarray(Bt.transpose(2, 3, 0, 1))
    rng = np.random.default_rng(seed)
    nk2, nl2 = n ** (k + 2), n ** (l + 2)
    rows = np.empty((m_rows, n ** (k + l)), dtype=np.complex128)
    scale = 0.0
    # chain intermediates grow to n^{m+1} entries per functional
    chunk = max(1, int(2e7) // (n ** (max(k, l) + 3)))
    done = 0
    while done < m_rows:
        f = min(chunk, m_rows - done)
        U = rng.standard_normal((nl2, f)) + 1j * rng.standard_normal((nl2, f))
        V = rng.standard_normal((nk2, f)) + 1j * rng.standard_normal((nk2, f))
        W = _chain_apply(Bt, k + 2, V)  # G^{k+2} v
        Yv = _chain_apply(BtT, l + 2, np.conj(U))  # (G^{l+2})^T conj(u)
        Uc = np.conj(U).reshape(n, n**l, n, f)
        Wr = W.reshape(n, n**k, n, f)
        c1 = np.einsum("ripf,rapf->iaf", Uc, Wr)
        Yr = Yv.reshape(n, n**l, n, f)
        Vr = V.reshape(n, n**k, n, f)
        c2 = np.einsum("sbqf,sjqf->bjf", Yr, Vr)
        scale = max(scale, float(np.abs(c1).max()), float(np.abs(c2).max()))
        rows[done:done + f] = (c1 - c2).reshape(n ** (k + l), f).T
        done += f
    return rows, scale


def _rank_pivoted(S: np.ndarray, scale: float, reltol: float = SKETCH_RELTOL) -> int:
    if S.size == 0 or scale == 0.0:
        return 0
    _, R, _ = scipy.linalg.qr(S, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    if diag.size == 0:
        return 0
    return int(np.count_nonzero(diag > reltol * scale))


def _sketch(xi: MagicBasis, k: int, l: int, seed: int) -> int:
    n = xi.n
    unknowns = n ** (k + l)
    m_rows = unknowns + 64
    dims = []
    for s in (seed, seed + 1):
        S, scale = _sketch_rows(xi, k, l, s, m_rows)
        dims.append(unknowns - _rank_pivoted(S, scale))
    if dims[0] != dims[1]:
        raise UnstableRankError(
            f"sketch ranks disagree between seeds {seed} and {seed + 1}: {dims}"
        )
    return dims[0]
