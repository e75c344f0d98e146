"""Catalog of the named Hadamard matrices used throughout the library.

Entries are stored in logarithmic notation where all entries are roots of
unity; the parameterized families (F_22^q, H^q, P^q, F_23^rs, F_32^rs)
return exact Butson matrices when their parameters are recognized roots of
unity and tolerance-backed complex matrices otherwise.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .errors import QpermError
from .hadamard import (
    ButsonMatrix,
    ComplexHadamard,
    HadamardMatrix,
    as_root_of_unity,
    dita_deform,
    fourier,
    tensor,
)

__all__ = ["named", "registry_names", "UnknownMatrixError", "MissingParameterError"]


class UnknownMatrixError(QpermError, KeyError):
    pass


class MissingParameterError(QpermError, ValueError):
    pass


TAO_EXPS = [
    [0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 2, 2],
    [0, 1, 0, 2, 2, 1],
    [0, 1, 2, 0, 1, 2],
    [0, 2, 2, 1, 0, 1],
    [0, 2, 1, 2, 1, 0],
]

# tokens (c, p): entry = i^c * q^p, over the 4th roots of unity
HAAGERUP_TOKENS = [
    [(0, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
    [(0, 0), (2, 0), (1, 0), (1, 0), (3, 0), (3, 0)],
    [(0, 0), (1, 0), (2, 0), (3, 0), (0, 1), (2, 1)],
    [(0, 0), (1, 0), (3, 0), (2, 0), (2, 1), (0, 1)],
    [(0, 0), (3, 0), (0, -1), (2, -1), (1, 0), (2, 0)],
    [(0, 0), (3, 0), (2, -1), (0, -1), (2, 0), (1, 0)],
]

# tokens (c, p): entry = w^c * q^p with w = e^{2 pi i / 6}
PETRESCU_TOKENS = [
    [(0, 0)] * 7,
    [(0, 0), (1, 1), (4, 1), (5, 0), (3, 0), (3, 0), (1, 0)],
    [(0, 0), (4, 1), (1, 1), (3, 0), (5, 0), (3, 0), (1, 0)],
    [(0, 0), (5, 0), (3, 0), (1, -1), (4, -1), (1, 0), (3, 0)],
    [(0, 0), (3, 0), (5, 0), (4, -1), (1, -1), (1, 0), (3, 0)],
    [(0, 0), (3, 0), (3, 0), (1, 0), (1, 0), (4, 0), (5, 0)],
    [(0, 0), (1, 0), (1, 0), (3, 0), (3, 0), (5, 0), (4, 0)],
]

# tokens (c, p): entry = (-1)^c * q^p
F22_TOKENS = [
    [(0, 0), (0, 0), (0, 0), (0, 0)],
    [(0, 0), (0, 1), (1, 0), (1, 1)],
    [(0, 0), (1, 0), (0, 0), (1, 0)],
    [(0, 0), (1, 1), (1, 0), (0, 1)],
]

X_9_10 = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 5, 3, 3, 5, 9, 8, 7, 1],
    [0, 4, 5, 7, 1, 3, 5, 9, 9],
    [0, 3, 7, 5, 1, 8, 9, 3, 5],
    [0, 9, 1, 5, 5, 3, 7, 2, 7],
    [0, 9, 5, 1, 3, 5, 1, 7, 6],
    [0, 1, 7, 9, 6, 1, 5, 5, 3],
    [0, 7, 9, 4, 9, 5, 3, 5, 1],
    [0, 5, 2, 9, 7, 7, 3, 1, 5],
]

X_10_4 = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 2, 3, 3, 3, 3, 1, 1, 1, 1],
    [0, 3, 2, 1, 1, 3, 3, 3, 1, 1],
    [0, 3, 1, 2, 3, 1, 3, 1, 3, 1],
    [0, 3, 1, 3, 2, 1, 1, 3, 1, 3],
    [0, 3, 3, 1, 1, 2, 1, 1, 3, 3],
    [0, 1, 3, 3, 1, 1, 2, 3, 3, 1],
    [0, 1, 3, 1, 3, 1, 3, 2, 1, 3],
    [0, 1, 1, 3, 1, 3, 3, 1, 2, 3],
    [0, 1, 1, 1, 3, 3, 1, 3, 3, 2],
]

X_10_5 = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 0, 1, 1, 2, 2, 3, 3, 4, 4],
    [0, 1, 0, 3, 2, 4, 1, 4, 2, 3],
    [0, 1, 3, 4, 3, 1, 0, 2, 4, 2],
    [0, 2, 3, 0, 1, 3, 4, 1, 2, 4],
    [0, 2, 4, 2, 0, 1, 3, 4, 3, 1],
    [0, 3, 1, 2, 4, 0, 4, 2, 1, 3],
    [0, 3, 2, 4, 1, 4, 2, 3, 0, 1],
    [0, 4, 2, 1, 4, 3, 1, 0, 3, 2],
    [0, 4, 4, 3, 3, 2, 2, 1, 1, 0],
]

X_10_6 = [
    [0, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    [0, 4, 1, 5, 3, 1, 3, 3, 5, 1],
    [0, 1, 2, 3, 5, 5, 1, 3, 5, 3],
    [0, 5, 3, 2, 1, 5, 3, 5, 3, 1],
    [0, 3, 5, 1, 4, 1, 1, 5, 3, 3],
    [0, 3, 3, 3, 3, 3, 0, 0, 0, 0],
    [0, 1, 1, 5, 3, 4, 3, 0, 2, 4],
    [0, 1, 5, 3, 5, 2, 4, 3, 2, 0],
    [0, 5, 3, 5, 1, 2, 0, 2, 3, 4],
    [0, 3, 5, 1, 1, 4, 4, 2, 0, 3],
]


def _unit(value) -> complex:
    z = complex(value)
    if abs(abs(z) - 1) > 1e-9:
        raise ValueError(f"parameter must have unit modulus, got |{z}| = {abs(z)}")
    return z


def _from_tokens(tokens, base: int, q: complex) -> HadamardMatrix:
    """Instantiate a (c, p) token table: entry = zeta_base^c * q^p."""
    root = as_root_of_unity(q)
    if root is not None:
        e, d = root
        L = math.lcm(base, d)
        exps = [
            [(c * (L // base) + p * e * (L // d)) % L for (c, p) in row]
            for row in tokens
        ]
        return ButsonMatrix(L, exps)
    w = np.exp(2j * np.pi / base)
    ent = np.array([[w ** c * q ** p for (c, p) in row] for row in tokens])
    return ComplexHadamard(ent)


def bjorck_froberg_root(positive_imag: bool = True) -> complex:
    """The chosen unit root of a^2 - (1 - sqrt(3))*a + 1 = 0."""
    b = 1 - math.sqrt(3)
    disc = b * b - 4  # negative: conjugate unit roots
    im = math.sqrt(-disc) / 2
    return complex(b / 2, im if positive_imag else -im)


def _bjorck_froberg(positive_imag: bool = True) -> ComplexHadamard:
    a = bjorck_froberg_root(positive_imag)
    first = np.array([1, 1j * a, -a, -1j, -np.conj(a), 1j * np.conj(a)])
    rows = [np.roll(first, r) for r in range(6)]
    return ComplexHadamard(np.array(rows))


def _f23(r, s) -> HadamardMatrix:
    params = np.array([[1, 1], [1, _unit(r)], [1, _unit(s)]])
    return dita_deform(fourier(2), fourier(3), params)


def _f32(r, s) -> HadamardMatrix:
    params = np.array([[1, 1, 1], [1, _unit(r), _unit(s)]])
    return dita_deform(fourier(3), fourier(2), params)


def _require(params: dict, *names):
    missing = [k for k in names if k not in params]
    if missing:
        raise MissingParameterError(f"missing parameter(s): {', '.join(missing)}")
    extra = [k for k in params if k not in names]
    if extra:
        raise ValueError(f"unexpected parameter(s): {', '.join(extra)}")
    return [params[k] for k in names]


def _parse_fourier_name(name: str) -> Optional[HadamardMatrix]:
    if not name.startswith("F_"):
        return None
    digits = name[2:]
    if not digits.isdigit():
        return None
    if len(digits) > 1 and all(d >= "2" for d in digits):
        out = fourier(int(digits[0]))
        for d in digits[1:]:
            out = tensor(out, fourier(int(d)))
        return out
    return fourier(int(digits))


def named(name: str, **params) -> HadamardMatrix:
    """Look up a catalog matrix by name.

    Plain names: T, BF, X_9^10, X_10^4, X_10^5, X_10^6, F_<n>, and tensor
    shorthands such as F_22 or F_233 (digits all >= 2).  Parameterized
    names: F_22^q, H^q, P^q (parameter q), F_23^rs, F_32^rs (parameters
    r, s); parameters are unit-modulus complex numbers.
    """
    if name == "T":
        _require(params)
        return ButsonMatrix(3, TAO_EXPS)
    if name == "BF":
        _require(params)
        return _bjorck_froberg()
    if name == "H^q":
        (q,) = _require(params, "q")
        return _from_tokens(HAAGERUP_TOKENS, 4, _unit(q))
    if name == "P^q":
        (q,) = _require(params, "q")
        return _from_tokens(PETRESCU_TOKENS, 6, _unit(q))
    if name == "F_22^q":
        (q,) = _require(params, "q")
        return _from_tokens(F22_TOKENS, 2, _unit(q))
    if name == "F_23^rs":
        r, s = _require(params, "r", "s")
        return _f23(r, s)
    if name == "F_32^rs":
        r, s = _require(params, "r", "s")
        return _f32(r, s)
    if name == "X_9^10":
        _require(params)
        return ButsonMatrix(10, X_9_10)
    if name == "X_10^4":
        _require(params)
        return ButsonMatrix(4, X_10_4)
    if name == "X_10^5":
        _require(params)
        return ButsonMatrix(5, X_10_5)
    if name == "X_10^6":
        _require(params)
        return ButsonMatrix(6, X_10_6)
    m = _parse_fourier_name(name)
    if m is not None:
        if params:
            raise ValueError(f"{name} takes no parameters")
        return m
    raise UnknownMatrixError(f"unknown matrix name: {name!r}")


def registry_names() -> list[str]:
    return [
        "F_n (n >= 1), F_22, F_33, ... (tensor shorthands)",
        "F_22^q",
        "T",
        "H^q",
        "P^q",
        "BF",
        "F_23^rs",
        "F_32^rs",
        "X_9^10",
        "X_10^4",
        "X_10^5",
        "X_10^6",
    ]
