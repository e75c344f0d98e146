from itertools import product

import numpy as np
import pytest

import qperm as qp
from qperm.errors import ResourceCapExceeded
from qperm.hadamard import random_witness
from qperm.homdim import hom_dim
from qperm.magic import (
    components,
    gram_graph,
    higher_gram,
    latin_basis,
    magic_from_hadamard,
)
from qperm.groups import LatinSquare


def cyclic_orbit_count(n, weight):
    """Orbits of the simultaneous shift t -> t+1 on tuples in [n]^weight."""
    seen = set()
    count = 0
    for t in product(range(n), repeat=weight):
        if t in seen:
            continue
        count += 1
        for d in range(n):
            seen.add(tuple((x + d) % n for x in t))
    return count


@pytest.mark.parametrize("n", [2, 3])
def test_fourier_hom_dims_match_orbit_oracle_exact(n):
    xi = magic_from_hadamard(qp.fourier(n))
    for k in range(0, 4):
        for l in range(0, 4 - k + 1):
            if k + l > 4:
                continue
            expected = cyclic_orbit_count(n, k + l)
            assert hom_dim(xi, k, l, method="exact_dense") == expected
            assert hom_dim(xi, k, l, method="sketch") == expected
            if k + l >= 1:
                assert expected == n ** (k + l - 1)


def test_fourier_hom_dim_spot_checks_n45():
    for n, k, l in [(4, 1, 1), (4, 0, 2), (4, 2, 1), (5, 1, 1), (5, 0, 1)]:
        xi = magic_from_hadamard(qp.fourier(n))
        expected = cyclic_orbit_count(n, k + l)
        assert hom_dim(xi, k, l, method="exact_dense") == expected
        assert hom_dim(xi, k, l, method="sketch") == expected


def test_hom_dim_0_1_is_one_for_hadamard_bases():
    for m in [qp.fourier(3), qp.named("T"), qp.named("H^q", q=1j), qp.named("BF")]:
        xi = magic_from_hadamard(m)
        assert hom_dim(xi, 0, 1) == 1
        assert hom_dim(xi, 1, 0) == 1


def test_hom_dim_1_1_equals_gram_components():
    mats = [
        qp.fourier(2),
        qp.fourier(3),
        qp.named("T"),
        qp.named("H^q", q=1j),
        qp.tensor(qp.fourier(2), qp.fourier(2)),
        qp.named("BF"),
    ]
    for m in mats:
        xi = magic_from_hadamard(m)
        comp = components(gram_graph(xi))
        assert hom_dim(xi, 1, 1) == comp
        assert comp <= m.n


def test_hom_dim_equivalence_invariant():
    rng = np.random.default_rng(12)
    base = qp.named("H^q", q=1j)
    xi = magic_from_hadamard(base)
    d = hom_dim(xi, 1, 1)
    for _ in range(2):
        w = random_witness(6, rng, exact_level=8)
        xi2 = magic_from_hadamard(w.apply(base))
        assert hom_dim(xi2, 1, 1) == d


def test_latin_basis_hom_dims():
    # group-orbit oracle: for the circulant square the symmetry group is cyclic
    n = 3
    xb = latin_basis(LatinSquare.circulant(n))
    for k, l in [(1, 1), (0, 2), (2, 1)]:
        assert hom_dim(xb, k, l) == cyclic_orbit_count(n, k + l)
        assert hom_dim(xb, k, l, method="sketch") == cyclic_orbit_count(n, k + l)


def test_methods_agree_on_seeds():
    xi = magic_from_hadamard(qp.fourier(4))
    a = hom_dim(xi, 1, 1, method="sketch", seed=0)
    b = hom_dim(xi, 1, 1, method="sketch", seed=123)
    assert a == b == 4


def test_exact_dense_caps():
    xi = magic_from_hadamard(qp.fourier(5))
    with pytest.raises(ResourceCapExceeded):
        hom_dim(xi, 2, 2, method="exact_dense", dense_entry_cap=10)
    with pytest.raises(ResourceCapExceeded):
        hom_dim(xi, 3, 3, method="exact_dense", rows_cap=10)


def test_negative_powers_rejected():
    xi = magic_from_hadamard(qp.fourier(2))
    with pytest.raises(ValueError):
        hom_dim(xi, -1, 0)
