"""Emptiness tests for Butson classes H_n(l) and the (n, l) decision table.

A class is declared nonempty by exhibiting a catalog witness of matching
size whose level divides l, and empty when one of the arithmetic
obstructions fires: Lam-Leung (vanishing-sum lengths), Sylvester (real
case), de Launey (determinant norm), the extended Sylvester parity
arguments, or Haagerup's n=5 condition.  Everything else is Inconclusive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

from .cyclotomic import lam_leung_member, prime_factors
from .errors import ConsistencyError
from .hadamard import ButsonMatrix, HadamardMatrix, fourier, level, tensor
from .named import named

__all__ = [
    "ObstructionVerdict",
    "sylvester2",
    "sylvester_ext",
    "de_launey",
    "haagerup5",
    "decide",
    "table",
    "witness_matrix",
    "OBSTRUCTION_SYMBOLS",
]

LAM_LEUNG = "LamLeung"
SYLVESTER2 = "Sylvester2"
SYLVESTER_EXT_A = "SylvesterExtA"
SYLVESTER_EXT_B = "SylvesterExtB"
DE_LAUNEY = "DeLauney"
HAAGERUP5 = "Haagerup5"

OBSTRUCTION_SYMBOLS = {
    LAM_LEUNG: "o",
    SYLVESTER2: "o_s",
    SYLVESTER_EXT_A: "o_s",
    SYLVESTER_EXT_B: "o_s",
    DE_LAUNEY: "o_l",
    HAAGERUP5: "o_h",
}


@dataclass(frozen=True)
class ObstructionVerdict:
    """Decision for one (n, l) cell."""

    n: int
    l: int
    status: str  # "exists" | "empty" | "inconclusive"
    obstruction: Optional[str] = None
    witness: Optional[str] = None

    @property
    def symbol(self) -> str:
        if self.status == "exists":
            return self.witness or "?"
        if self.status == "empty":
            return OBSTRUCTION_SYMBOLS[self.obstruction]
        return "?"


def _is_prime(p: int) -> bool:
    return p >= 2 and all(p % d for d in range(2, int(p**0.5) + 1))


def sylvester2(n: int) -> bool:
    """Real-case obstruction: fires unless n = 2 or 4 | n."""
    return n != 2 and n % 4 != 0


def sylvester_ext(n: int, l: int) -> Optional[str]:
    """Parity obstructions; returns which branch fired, or None.

    Branch A: n = p + 2 with p >= 3 prime and l = 2 * p^b.
    Branch B: n = 2q with primes p > q >= 3 and l = 2^a * p^b.
    """
    p = n - 2
    if p >= 3 and _is_prime(p):
        m = l
        if m % 2 == 0:
            m //= 2
            if m % 2 != 0 and m > 1:
                while m % p == 0:
                    m //= p
                if m == 1:
                    return SYLVESTER_EXT_A
    if n % 2 == 0:
        q = n // 2
        if q >= 3 and _is_prime(q):
            m = l
            a = 0
            while m % 2 == 0:
                m //= 2
                a += 1
            if a >= 1 and m > 1:
                pf = prime_factors(m)
                if len(pf) == 1 and pf[0] > q:
                    return SYLVESTER_EXT_B
    return None


def _odd_part_exponents(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    m = n
    d = 2
    while d * d <= m:
        while m % d == 0:
            out[d] = out.get(d, 0) + 1
            m //= d
        d += 1
    if m > 1:
        out[m] = out.get(m, 0) + 1
    return out


def de_launey(n: int, l: int) -> str:
    """Determinant-norm obstruction; 'fires', 'passes', or 'inconclusive'.

    Evaluated exactly only where the norm form of Z[zeta_l] is classical:
    l in {1, 2} (n^n a perfect square), l = 4 (sum of two squares),
    l in {3, 6} (x^2 - xy + y^2 norm form).
    """
    if l not in (1, 2, 3, 4, 6):
        return "inconclusive"
    factors = _odd_part_exponents(n)
    exps = {p: e * n for p, e in factors.items()}
    if l in (1, 2):
        bad = any(e % 2 for e in exps.values())
    elif l == 4:
        bad = any(e % 2 for p, e in exps.items() if p % 4 == 3)
    else:  # 3, 6
        bad = any(e % 2 for p, e in exps.items() if p % 3 == 2)
    return "fires" if bad else "passes"


def haagerup5(n: int, l: int) -> bool:
    """n = 5 classes exist only when 5 divides l."""
    return n == 5 and l % 5 != 0


# ---------------------------------------------------------------------------
# Witness catalog
# ---------------------------------------------------------------------------


def _fourier_tensor_factorizations(n: int) -> list[tuple[int, ...]]:
    """Multisets of factors >= 2 with product n, smallest lcm first."""
    out: set[tuple[int, ...]] = set()

    def rec(m: int, smallest: int, acc: tuple[int, ...]):
        if m == 1:
            if acc:
                out.add(acc)
            return
        for d in range(smallest, m + 1):
            if m % d == 0:
                rec(m // d, d, acc + (d,))

    rec(n, 2, ())
    return sorted(out, key=lambda fs: (math.lcm(*fs), len(fs)))


def _fourier_tensor(factors: tuple[int, ...]) -> ButsonMatrix:
    m = fourier(factors[0])
    for f in factors[1:]:
        m = tensor(m, fourier(f))
    return m


@lru_cache(maxsize=None)
def _witness_catalog(n: int) -> tuple[tuple[str, int], ...]:
    """Ordered (name, level) candidates of size n; names follow the catalog."""
    special: list[tuple[str, Callable[[], HadamardMatrix]]] = []
    if n == 6:
        special = [("T", lambda: named("T")), ("H", lambda: named("H^q", q=1))]
    elif n == 7:
        special = [("P", lambda: named("P^q", q=1))]
    elif n == 9:
        special = [("X_9^10", lambda: named("X_9^10"))]
    elif n == 10:
        special = [
            ("X_10^4", lambda: named("X_10^4")),
            ("X_10^5", lambda: named("X_10^5")),
            ("X_10^6", lambda: named("X_10^6")),
        ]
    entries: list[tuple[str, int]] = []
    seen_levels: set[int] = set()

    def push(name: str, lvl: int):
        entries.append((name, lvl))
        seen_levels.add(lvl)

    for factors in _fourier_tensor_factorizations(n):
        lvl = math.lcm(*factors)
        if lvl in seen_levels:
            continue
        if len(factors) == 1:
            push(f"F_{n}", lvl)
        elif all(f <= 9 for f in factors):
            push("F_" + "".join(str(f) for f in factors), lvl)
        else:
            push("(x)".join(f"F_{f}" for f in factors), lvl)
    for name, builder in special:
        m = builder()
        push(name, level(m))
    entries.sort(key=lambda e: e[1])
    return tuple(entries)


def witness_matrix(name: str) -> HadamardMatrix:
    """Materialize a catalog witness from its table name."""
    if name == "H":
        return named("H^q", q=1)
    if name == "P":
        return named("P^q", q=1)
    if "(x)" in name:
        parts = name.split("(x)")
        m = named(parts[0])
        for p in parts[1:]:
            m = tensor(m, named(p))
        return m
    return named(name)


def _find_witness(n: int, l: int) -> Optional[str]:
    for name, lvl in _witness_catalog(n):
        if l % lvl == 0:
            return name
    return None


def decide(n: int, l: int, check_consistency: bool = True) -> ObstructionVerdict:
    """Decide H_n(l) from the catalog and the implemented obstructions.

    A witness always wins; when check_consistency is set (default), a
    witness coexisting with a firing obstruction raises ConsistencyError
    instead, since that would mean one of the two is implemented wrong.
    """
    if n < 2 or l < 2:
        raise ValueError("decide requires n >= 2 and l >= 2")
    witness = _find_witness(n, l)
    obstruction = None
    if not lam_leung_member(n, l):
        obstruction = LAM_LEUNG
    elif l == 2 and sylvester2(n):
        obstruction = SYLVESTER2
    elif de_launey(n, l) == "fires":
        obstruction = DE_LAUNEY
    else:
        obstruction = sylvester_ext(n, l)
        if obstruction is None and haagerup5(n, l):
            obstruction = HAAGERUP5
    if witness is not None:
        if obstruction is not None and check_consistency:
            raise ConsistencyError(
                f"H_{n}({l}): witness {witness} coexists with obstruction {obstruction}"
            )
        return ObstructionVerdict(n, l, "exists", witness=witness)
    if obstruction is not None:
        return ObstructionVerdict(n, l, "empty", obstruction=obstruction)
    return ObstructionVerdict(n, l, "inconclusive")


def table(n_max: int, l_max: int) -> dict[tuple[int, int], ObstructionVerdict]:
    """decide(n, l) over the full grid 2 <= n <= n_max, 2 <= l <= l_max."""
    if n_max < 2 or l_max < 2:
        raise ValueError("table requires n_max >= 2 and l_max >= 2")
    return {
        (n, l): decide(n, l)
        for n in range(2, n_max + 1)
        for l in range(2, l_max + 1)
    }


def render_table(grid: dict[tuple[int, int], ObstructionVerdict]) -> str:
    ns = sorted({n for n, _ in grid})
    ls = sorted({l for _, l in grid})
    header = ["n\\l"] + [str(l) for l in ls]
    rows = [header]
    for n in ns:
        rows.append([str(n)] + [grid[(n, l)].symbol for l in ls])
    widths = [max(len(r[c]) for r in rows) for c in range(len(header))]
    lines = [
        "  ".join(cell.ljust(widths[c]) for c, cell in enumerate(row)).rstrip()
        for row in rows
    ]
    return "\n".join(lines)
