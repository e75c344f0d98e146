"""Exact arithmetic with roots of unity and vanishing-sum analysis.

Elements of Z[zeta_l] are integer coefficient vectors of length l (index k
holds the coefficient of zeta_l^k) kept in canonical form, i.e. reduced
modulo the l-th cyclotomic polynomial.  Equality and the zero test are then
plain vector comparisons, with no floating point involved.

The second half of the module decides whether a vanishing sum of l-th roots
of unity splits into rotated p-cycles (full sets of p-th roots of unity,
p prime), both exactly on exponent multisets and approximately on arbitrary
unit-circle values.
"""

from __future__ import annotations

import cmath
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

from .errors import InvalidOrderError, NotVanishingSumError

__all__ = [
    "CyclotomicInt",
    "ExponentMultiset",
    "Cycle",
    "CycleDecomposition",
    "ApproxCycle",
    "ApproxCycleDecomposition",
    "cyclotomic_polynomial",
    "sum_roots",
    "cycle_decompose",
    "cycle_decompose_approx",
    "lam_leung_member",
    "prime_factors",
]

DEFAULT_TOL = 1e-9


def _poly_divmod(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    # exact division of integer polynomials; coefficients ascending
    num = list(num)
    quot = [0] * (len(num) - len(den) + 1)
    dlead = den[-1]
    for shift in range(len(num) - len(den), -1, -1):
        coeff = num[shift + len(den) - 1]
        if coeff % dlead != 0:
            raise ArithmeticError("non-exact polynomial division")
        coeff //= dlead
        quot[shift] = coeff
        for i, d in enumerate(den):
            num[shift + i] -= coeff * d
    while len(num) > 1 and num[-1] == 0:
        num.pop()
    return quot, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(l: int) -> tuple[int, ...]:
    """Coefficients (ascending) of the l-th cyclotomic polynomial."""
    if l < 1:
        raise InvalidOrderError(f"order must be positive, got {l}")
    if l == 1:
        return (-1, 1)
    poly = [-1] + [0] * (l - 1) + [1]  # x^l - 1
    for d in range(1, l):
        if l % d == 0:
            poly, rem = _poly_divmod(poly, list(cyclotomic_polynomial(d)))
            assert rem == [0]
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(l: int) -> tuple[tuple[int, ...], ...]:
    """Canonical coefficient vector of zeta_l^e for e = 0..l-1.

    Row e is x^e reduced modulo the cyclotomic polynomial and padded to
    length l.
    """
    phi_poly = list(cyclotomic_polynomial(l))
    deg = len(phi_poly) - 1
    rows = []
    cur = [0] * l
    cur[0] = 1
    for e in range(l):
        if e > 0:
            cur = [0] + cur[:-1]
            # reduce degree-l overflow is impossible here; reduce by phi
            cur = _reduce_in_place(cur, phi_poly, deg)
        rows.append(tuple(cur))
    return tuple(rows)


def _reduce_in_place(vec: list[int], phi_poly: list[int], deg: int) -> list[int]:
    vec = list(vec)
    for i in range(len(vec) - 1, deg - 1, -1):
        c = vec[i]
        if c:
            vec[i] = 0
            for j, d in enumerate(phi_poly[:-1]):
                vec[i - deg + j] -= c * d
    return vec


def reduction_matrix(l: int):
    """Numpy int64 matrix R with (coeffs @ R) the canonical form of coeffs."""
    import numpy as np

    return np.array(_power_table(l), dtype=np.int64)


def _canonical(l: int, coeffs: Sequence[int]) -> tuple[int, ...]:
    table = _power_table(l)
    out = [0] * l
    for e, c in enumerate(coeffs):
        if c:
            row = table[e % l]
            for k in range(l):
                out[k] += c * row[k]
    return tuple(out)


class CyclotomicInt:
    """An element of Z[zeta_l] in canonical reduced form.

    Instances are immutable and hashable; two elements are equal exactly
    when their reduced coefficient vectors agree (same order required).
    """

    __slots__ = ("order", "coeffs")

    def __init__(self, order: int, coeffs: Sequence[int], reduced: bool = False):
        if order < 1:
            raise InvalidOrderError(f"order must be positive, got {order}")
        if len(coeffs) > order:
            raise ValueError("coefficient vector longer than the order")
        if not reduced:
            coeffs = _canonical(order, coeffs)
        else:
            coeffs = tuple(coeffs)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "coeffs", coeffs)

    def __setattr__(self, *a):
        raise AttributeError("CyclotomicInt is immutable")

    @classmethod
    def zero(cls, order: int) -> "CyclotomicInt":
        return cls(order, (0,) * order, reduced=True)

    @classmethod
    def one(cls, order: int) -> "CyclotomicInt":
        return cls.root(order, 0)

    @classmethod
    def root(cls, order: int, exponent: int) -> "CyclotomicInt":
        """zeta_order^exponent."""
        if order < 1:
            raise InvalidOrderError(f"order must be positive, got {order}")
        return cls(order, _power_table(order)[exponent % order], reduced=True)

    @classmethod
    def integer(cls, order: int, value: int) -> "CyclotomicInt":
        vec = [0] * order
        vec[0] = value
        return cls(order, _canonical(order, vec), reduced=True)

    def _check_order(self, other: "CyclotomicInt"):
        if self.order != other.order:
            raise ValueError(
                f"mixed orders {self.order} and {other.order}; promote first"
            )

    def __add__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.integer(self.order, other)
        self._check_order(other)
        return CyclotomicInt(
            self.order,
            tuple(a + b for a, b in zip(self.coeffs, other.coeffs)),
            reduced=True,
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicInt(self.order, tuple(-a for a in self.coeffs), reduced=True)

    def __sub__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.integer(self.order, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return CyclotomicInt(
                self.order, tuple(other * a for a in self.coeffs), reduced=True
            )
        self._check_order(other)
        l = self.order
        prod = [0] * l
        for u, a in enumerate(self.coeffs):
            if a:
                for v, b in enumerate(other.coeffs):
                    if b:
                        prod[(u + v) % l] += a * b
        return CyclotomicInt(l, _canonical(l, prod), reduced=True)

    __rmul__ = __mul__

    def conjugate(self) -> "CyclotomicInt":
        """Complex conjugation, i.e. exponent k -> -k mod l."""
        l = self.order
        flipped = [0] * l
        for k, a in enumerate(self.coeffs):
            flipped[(-k) % l] += a
        return CyclotomicInt(l, _canonical(l, flipped), reduced=True)

    def to_order(self, target: int) -> "CyclotomicInt":
        """Re-express in Z[zeta_target]; target must be a multiple of order."""
        if target % self.order != 0:
            raise ValueError(f"{target} is not a multiple of {self.order}")
        step = target // self.order
        vec = [0] * target
        for k, a in enumerate(self.coeffs):
            vec[k * step] += a
        return CyclotomicInt(target, _canonical(target, vec), reduced=True)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def to_complex(self) -> complex:
        l = self.order
        return sum(
            c * cmath.exp(2j * cmath.pi * k / l)
            for k, c in enumerate(self.coeffs)
            if c
        ) or 0j

    def __eq__(self, other):
        if isinstance(other, int):
            other = CyclotomicInt.integer(self.order, other)
        if not isinstance(other, CyclotomicInt):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __repr__(self):
        terms = [
            (f"{c}" if k == 0 else f"{c}*z^{k}")
            for k, c in enumerate(self.coeffs)
            if c
        ]
        body = " + ".join(terms) if terms else "0"
        return f"CyclotomicInt({self.order}, {body})"


@dataclass(frozen=True)
class ExponentMultiset:
    """A formal sum of l-th roots of unity, given by its exponent multiset."""

    order: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise InvalidOrderError(f"order must be positive, got {self.order}")
        if any(not (0 <= e < self.order) for e in self.exponents):
            raise ValueError("exponents must lie in {0, ..., order-1}")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents)))

    @classmethod
    def of(cls, exponents: Iterable[int], order: int) -> "ExponentMultiset":
        if order < 1:
            raise InvalidOrderError(f"order must be positive, got {order}")
        return cls(order, tuple(e % order for e in exponents))

    def __len__(self):
        return len(self.exponents)


def sum_roots(s: ExponentMultiset) -> CyclotomicInt:
    """Exact value of the formal sum of roots described by s."""
    vec = [0] * s.order
    for e in s.exponents:
        vec[e] += 1
    return CyclotomicInt(s.order, vec)


@dataclass(frozen=True)
class Cycle:
    """A rotated full set of p-th roots of unity inside the l-th roots.

    Denotes the multiset {rotation + t*(l/p) : t = 0..p-1}; always sums to
    zero exactly.
    """

    prime: int
    rotation: int

    def exponents(self, order: int) -> tuple[int, ...]:
        step = order // self.prime
        return tuple((self.rotation + t * step) % order for t in range(self.prime))


@dataclass(frozen=True)
class CycleDecomposition:
    order: int
    cycles: tuple[Cycle, ...]

    def exponents(self) -> tuple[int, ...]:
        out: list[int] = []
        for c in self.cycles:
            out.extend(c.exponents(self.order))
        return tuple(sorted(out))

    @property
    def profile(self) -> tuple[int, ...]:
        """Multiset of cycle lengths, ascending (e.g. (2, 2, 3))."""
        return tuple(sorted(c.prime for c in self.cycles))


def prime_factors(l: int) -> tuple[int, ...]:
    """Distinct prime factors of l, ascending."""
    out = []
    m = l
    d = 2
    while d * d <= m:
        if m % d == 0:
            out.append(d)
            while m % d == 0:
                m //= d
        d += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def cycle_decompose(s: ExponentMultiset) -> Optional[CycleDecomposition]:
    """Split a vanishing sum of roots into rotated prime cycles, if possible.

    Exhaustive backtracking over the prime block covering the smallest
    remaining exponent, largest primes first; failed sub-multisets are
    memoized.  Raises NotVanishingSumError when the input does not sum to
    zero (a different situation from "vanishing but not decomposable", which
    returns None).
    """
    if not sum_roots(s).is_zero:
        raise NotVanishingSumError(
            f"multiset {s.exponents} does not vanish at order {s.order}"
        )
    l = s.order
    primes = sorted((p for p in prime_factors(l)), reverse=True)
    counts = Counter(s.exponents)
    failed: set[tuple] = set()

    def key(c: Counter) -> tuple:
        return tuple(sorted(c.items()))

    def search(c: Counter) -> Optional[list[Cycle]]:
        if not c:
            return []
        k = key(c)
        if k in failed:
            return None
        anchor = min(c)
        for p in primes:
            step = l // p
            if anchor >= step:
                # some member below the anchor would be required
                continue
            members = [anchor + t * step for t in range(p)]
            if all(c[m] >= 1 for m in members):
                for m in members:
                    c[m] -= 1
                    if c[m] == 0:
                        del c[m]
                rest = search(c)
                for m in members:
                    c[m] += 1
                if rest is not None:
                    return [Cycle(p, anchor)] + rest
        failed.add(k)
        return None

    cycles = search(counts)
    if cycles is None:
        return None
    cycles.sort(key=lambda c: (c.rotation, c.prime))
    return CycleDecomposition(l, tuple(cycles))


@dataclass(frozen=True)
class ApproxCycle:
    """A prime-size block of unit values forming a rotated root cycle."""

    prime: int
    rotation: complex
    indices: tuple[int, ...]


@dataclass(frozen=True)
class ApproxCycleDecomposition:
    blocks: tuple[ApproxCycle, ...]

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(sorted(b.prime for b in self.blocks))


def _primes_up_to(n: int) -> list[int]:
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, p))]


def _block_is_cycle(values: Sequence[complex], idx: Sequence[int], p: int, tol: float) -> bool:
    # after dividing by the anchor, the block must hit every p-th root once
    anchor = values[idx[0]]
    targets = [cmath.exp(2j * cmath.pi * t / p) for t in range(p)]
    used = [False] * p
    for i in idx:
        z = values[i] / anchor
        for t, w in enumerate(targets):
            if not used[t] and abs(z - w) <= tol:
                used[t] = True
                break
        else:
            return False
    return True


def cycle_decompose_approx(
    values: Sequence[complex],
    tol: float = DEFAULT_TOL,
    primes: Optional[Sequence[int]] = None,
) -> Optional[ApproxCycleDecomposition]:
    """Partition unit-modulus values into rotated prime root cycles.

    Works on arbitrary points of the unit circle: a block of size p passes
    when, divided by one of its elements, it equals the full set of p-th
    roots of unity within tol.  `primes` restricts the allowed block sizes
    (used by the 6x6 classifier to ask for all-2 or all-3 partitions).
    Raises NotVanishingSumError when the values do not sum to ~0.
    """
    n = len(values)
    if any(abs(abs(v) - 1) > tol for v in values):
        raise ValueError("values must have unit modulus within tol")
    if abs(sum(values)) > n * tol:
        raise NotVanishingSumError("values do not sum to zero within n*tol")
    allowed = sorted(primes if primes is not None else _primes_up_to(n), reverse=True)
    failed: set[frozenset] = set()

    def search(remaining: tuple[int, ...]) -> Optional[list[ApproxCycle]]:
        if not remaining:
            return []
        key = frozenset(remaining)
        if key in failed:
            return None
        first, rest = remaining[0], remaining[1:]
        for p in allowed:
            if p > len(remaining):
                continue
            for companions in combinations(rest, p - 1):
                idx = (first,) + companions
                if not _block_is_cycle(values, idx, p, tol):
                    continue
                left = tuple(i for i in rest if i not in companions)
                sub = search(left)
                if sub is not None:
                    return [ApproxCycle(p, values[first], idx)] + sub
        failed.add(key)
        return None

    blocks = search(tuple(range(n)))
    if blocks is None:
        return None
    return ApproxCycleDecomposition(tuple(blocks))


def lam_leung_member(n: int, l: int) -> bool:
    """Is n in the numerical semigroup generated by the prime factors of l?

    Dynamic programming on reachable sums; the length of any vanishing sum
    of l-th roots of unity lies in this semigroup.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if l < 1:
        raise InvalidOrderError(f"order must be positive, got {l}")
    primes = prime_factors(l)
    reach = [False] * (n + 1)
    reach[0] = True
    for m in range(1, n + 1):
        reach[m] = any(m >= p and reach[m - p] for p in primes)
    return reach[n]
