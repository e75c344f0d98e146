"""Latin squares, magic partitions, and the permutation groups they generate."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import QpermError, ResourceCapExceeded

__all__ = [
    "LatinSquare",
    "MagicPartition",
    "PermGroup",
    "latin_conjugate",
    "latin_group",
    "partition_group",
    "closure",
    "abelian_invariant_factors",
    "random_latin_square",
]

DEFAULT_ORDER_CAP = 10**6


class LatinSquare:
    """An n x n array over {1, ..., n} whose rows and columns are permutations."""

    __slots__ = ("n", "cells")

    def __init__(self, cells):
        cells = np.asarray(cells, dtype=np.int64)
        if cells.ndim != 2 or cells.shape[0] != cells.shape[1]:
            raise ValueError(f"expected a square array, got {cells.shape}")
        n = cells.shape[0]
        want = list(range(1, n + 1))
        for i in range(n):
            if sorted(cells[i].tolist()) != want:
                raise ValueError(f"row {i} is not a permutation of 1..{n}")
            if sorted(cells[:, i].tolist()) != want:
                raise ValueError(f"column {i} is not a permutation of 1..{n}")
        cells = cells.copy()
        cells.setflags(write=False)
        self.n = n
        self.cells = cells

    def __eq__(self, other):
        return isinstance(other, LatinSquare) and np.array_equal(self.cells, other.cells)

    def __hash__(self):
        return hash((self.n, self.cells.tobytes()))

    def __repr__(self):
        return f"LatinSquare({self.cells.tolist()})"

    @classmethod
    def circulant(cls, n: int) -> "LatinSquare":
        idx = np.arange(n)
        return cls((idx[:, None] - idx[None, :]) % n + 1)


def latin_conjugate(sq: LatinSquare) -> LatinSquare:
    """The conjugate square: entry (k, j) is the row i with sq[i, j] = k.

    An involution: conjugating twice gives the original square back.
    """
    n = sq.n
    out = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            out[sq.cells[i, j] - 1, j] = i + 1
    return LatinSquare(out)


class MagicPartition:
    """An n x n array of disjoint subsets of {1..N}, each row/column a partition."""

    __slots__ = ("n", "ground", "blocks")

    def __init__(self, blocks: Sequence[Sequence[Iterable[int]]], ground: int):
        n = len(blocks)
        cells = tuple(
            tuple(frozenset(blocks[i][j]) for j in range(n)) for i in range(n)
        )
        if any(len(row) != n for row in blocks):
            raise ValueError("blocks must form a square array")
        full = frozenset(range(1, ground + 1))
        for i in range(n):
            row_union: set[int] = set()
            col_union: set[int] = set()
            row_total = col_total = 0
            for j in range(n):
                row_union |= cells[i][j]
                col_union |= cells[j][i]
                row_total += len(cells[i][j])
                col_total += len(cells[j][i])
            if row_union != full or row_total != ground:
                raise ValueError(f"row {i} does not partition 1..{ground}")
            if col_union != full or col_total != ground:
                raise ValueError(f"column {i} does not partition 1..{ground}")
        self.n = n
        self.ground = ground
        self.blocks = cells

    @classmethod
    def from_latin(cls, sq: LatinSquare) -> "MagicPartition":
        return cls(
            [[{int(sq.cells[i, j])} for j in range(sq.n)] for i in range(sq.n)],
            sq.n,
        )


def _perm_order(p: tuple[int, ...]) -> int:
    n = len(p)
    seen = [False] * n
    order = 1
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        cur = start
        while not seen[cur]:
            seen[cur] = True
            cur = p[cur]
            length += 1
        order = math.lcm(order, length)
    return order


def closure(generators: Sequence[tuple[int, ...]], cap: int = DEFAULT_ORDER_CAP) -> frozenset:
    """Breadth-first closure of permutations under composition."""
    if not generators:
        raise ValueError("need at least one generator")
    n = len(generators[0])
    ident = tuple(range(n))
    elems = {ident}
    frontier = [ident]
    gens = [tuple(g) for g in generators]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[i]] for i in range(n))
                if c not in elems:
                    elems.add(c)
                    if len(elems) > cap:
                        raise ResourceCapExceeded(
                            f"group closure exceeded the cap of {cap} elements",
                            cap_name="group_order_cap",
                            cap_value=cap,
                        )
                    nxt.append(c)
        frontier = nxt
    return frozenset(elems)


@dataclass(frozen=True)
class PermGroup:
    """A subgroup of S_n given by generators, with its closure data."""

    degree: int
    generators: tuple[tuple[int, ...], ...]
    elements: frozenset
    order: int
    abelian: bool
    order_histogram: dict

    @classmethod
    def generated(cls, generators: Sequence[Sequence[int]], cap: int = DEFAULT_ORDER_CAP) -> "PermGroup":
        gens = tuple(tuple(g) for g in generators)
        n = len(gens[0])
        if any(len(g) != n or sorted(g) != list(range(n)) for g in gens):
            raise ValueError("generators must be permutations of 0..n-1 of one degree")
        elems = closure(gens, cap)
        compose = lambda a, b: tuple(a[b[i]] for i in range(n))
        abelian = all(
            compose(a, b) == compose(b, a) for a in gens for b in gens
        )
        hist = Counter(_perm_order(p) for p in elems)
        return cls(n, gens, elems, len(elems), abelian, dict(sorted(hist.items())))

    @property
    def is_cyclic(self) -> bool:
        return max(self.order_histogram) == self.order


def latin_group(sq: LatinSquare, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Group generated by the rows of the conjugate square.

    Row k of the conjugate, read as the permutation j -> conj[k, j], is the
    symmetry sigma_k; these generate the group attached to the square.
    """
    conj = latin_conjugate(sq)
    gens = [tuple(int(v) - 1 for v in conj.cells[k]) for k in range(sq.n)]
    return PermGroup.generated(gens, cap)


def partition_group(part: MagicPartition, cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    """Group generated by the block symmetries sigma_k(j) = i for k in E_ij."""
    n = part.n
    gens = []
    for k in range(1, part.ground + 1):
        perm = [-1] * n
        for j in range(n):
            for i in range(n):
                if k in part.blocks[i][j]:
                    perm[j] = i
                    break
        if any(v < 0 for v in perm):
            raise ValueError(f"element {k} missing from some column")
        gens.append(tuple(perm))
    return PermGroup.generated(gens, cap)


def abelian_invariant_factors(group: PermGroup) -> list[int]:
    """Invariant factors d_1 | d_2 | ... of a finite abelian group.

    Recovered prime by prime from the counts of elements killed by p^j,
    which determine the p-group partition, then zipped into divisibility
    chain form.
    """
    if not group.abelian:
        raise ValueError("group is not abelian")
    order = group.order
    if order == 1:
        return []
    partitions: dict[int, list[int]] = {}
    m = order
    p = 2
    primes = []
    while p * p <= m:
        if m % p == 0:
            primes.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        primes.append(m)
    orders = [_perm_order(o) for o in group.elements]
    for p in primes:
        # s_j = log_p #{x : x^{p^j} = 1} = sum_i min(j, lambda_i)
        s = [0]
        while True:
            pj = p ** len(s)
            cnt = sum(1 for o in orders if pj % o == 0)
            sj = round(math.log(cnt, p))
            s.append(sj)
            if sj == s[-2]:
                break
        lam = []
        for j in range(1, len(s)):
            at_least_j = s[j] - s[j - 1]
            at_least_j1 = s[j + 1] - s[j] if j + 1 < len(s) else 0
            lam.extend([j] * (at_least_j - at_least_j1))
        partitions[p] = sorted(lam, reverse=True)
    height = max(len(v) for v in partitions.values())
    factors = []
    for t in range(height):
        d = 1
        for p, lam in partitions.items():
            if t < len(lam):
                d *= p ** lam[t]
        factors.append(d)
    return sorted(factors)


def random_latin_square(n: int, rng: np.random.Generator, max_tries: int = 2000) -> LatinSquare:
    """A uniformly-seeded random Latin square by row-wise backtracking."""
    for _ in range(max_tries):
        rows: list[list[int]] = []
        ok = True
        for _ in range(n):
            placed = _random_row(rows, n, rng)
            if placed is None:
                ok = False
                break
            rows.append(placed)
        if ok:
            return LatinSquare(rows)
    raise QpermError(f"failed to sample a Latin square of size {n}")


def _random_row(rows: list[list[int]], n: int, rng: np.random.Generator) -> Optional[list[int]]:
    cols = [set(r[j] for r in rows) for j in range(n)]
    row = [0] * n
    used: set[int] = set()

    def place(j: int) -> bool:
        if j == n:
            return True
        options = [v for v in range(1, n + 1) if v not in used and v not in cols[j]]
        rng.shuffle(options)
        for v in options:
            row[j] = v
            used.add(v)
            if place(j + 1):
                return True
            used.remove(v)
        return False

    return row if place(0) else None
