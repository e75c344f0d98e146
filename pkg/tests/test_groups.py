import numpy as np
import pytest

import qperm as qp
from qperm.errors import ResourceCapExceeded
from qperm.groups import (
    LatinSquare,
    MagicPartition,
    PermGroup,
    abelian_invariant_factors,
    latin_conjugate,
    latin_group,
    partition_group,
    random_latin_square,
)

PAPER_SIGMA = [
    [1, 2, 3, 4, 5],
    [3, 1, 2, 5, 4],
    [4, 5, 1, 3, 2],
    [2, 4, 5, 1, 3],
    [5, 3, 4, 2, 1],
]

PAPER_SIGMA_CONJ = [
    [1, 2, 3, 4, 5],
    [4, 1, 2, 5, 3],
    [2, 5, 1, 3, 4],
    [3, 4, 5, 1, 2],
    [5, 3, 4, 2, 1],
]


def test_latin_square_validation():
    with pytest.raises(ValueError):
        LatinSquare([[1, 2], [1, 2]])
    with pytest.raises(ValueError):
        LatinSquare([[1, 1], [2, 2]])
    LatinSquare([[1]])


def test_displayed_conjugate_pair():
    sq = LatinSquare(PAPER_SIGMA)
    assert latin_conjugate(sq) == LatinSquare(PAPER_SIGMA_CONJ)
    assert latin_conjugate(latin_conjugate(sq)) == sq


def test_conjugate_of_trivial():
    sq = LatinSquare([[1]])
    assert latin_conjugate(sq) == sq


def test_circulant_conjugate_involutive():
    for n in range(1, 8):
        sq = LatinSquare.circulant(n)
        conj = latin_conjugate(sq)
        assert latin_conjugate(conj) == sq
        # direct index computation: conj[k, j] = i iff (i - j) mod n + 1 == k
        for k in range(n):
            for j in range(n):
                i = conj.cells[k, j] - 1
                assert (i - j) % n + 1 == k + 1


def test_conjugate_involutive_on_random_squares():
    rng = np.random.default_rng(42)
    for n in range(2, 8):
        for _ in range(10):
            sq = random_latin_square(n, rng)
            assert latin_conjugate(latin_conjugate(sq)) == sq


def test_circulant_group_is_cyclic():
    for n in range(1, 8):
        g = latin_group(LatinSquare.circulant(n))
        assert g.order == n
        assert g.abelian
        assert g.is_cyclic or n == 1
        # the closure is exactly the powers of one n-cycle
        shift = tuple((i + 1) % n for i in range(n))
        powers = set()
        cur = tuple(range(n))
        for _ in range(n):
            powers.add(cur)
            cur = tuple(shift[i] for i in cur)
        assert g.elements == powers


def test_latin_group_of_paper_square():
    g = latin_group(LatinSquare(PAPER_SIGMA))
    assert g.order % 5 == 0  # contains the 5-cycles generated by its rows
    assert not g.abelian


def test_partition_group_matches_latin_group():
    rng = np.random.default_rng(1)
    for n in (3, 4, 5):
        sq = random_latin_square(n, rng)
        part = MagicPartition.from_latin(sq)
        assert partition_group(part).elements == latin_group(sq).elements


def test_partition_group_trivial():
    n = 3
    full = set(range(1, 7))
    blocks = [[full if i == j else set() for j in range(n)] for i in range(n)]
    part = MagicPartition(blocks, 6)
    g = partition_group(part)
    assert g.order == 1


def test_random_magic_partition_order_divides_group():
    # partitions of {1..6} over a 3x3 array: group is a subgroup of S_3
    rng = np.random.default_rng(2)
    sq1 = random_latin_square(3, rng)
    sq2 = random_latin_square(3, rng)
    blocks = [
        [{int(sq1.cells[i, j]), int(sq2.cells[i, j]) + 3} for j in range(3)]
        for i in range(3)
    ]
    part = MagicPartition(blocks, 6)
    g = partition_group(part)
    assert 6 % g.order == 0


def test_magic_partition_validation():
    with pytest.raises(ValueError):
        MagicPartition([[{1}, {1}], [{2}, {2}]], 2)


def test_group_order_cap():
    sq = random_latin_square(5, np.random.default_rng(0))
    with pytest.raises(ResourceCapExceeded):
        latin_group(sq, cap=3)


def test_abelian_invariant_factors():
    klein = PermGroup.generated([(1, 0, 3, 2), (2, 3, 0, 1)])
    assert abelian_invariant_factors(klein) == [2, 2]
    cyc6 = latin_group(LatinSquare.circulant(6))
    assert abelian_invariant_factors(cyc6) == [6]
    z2z4 = PermGroup.generated(
        [(1, 0, 2, 3, 4, 5), (0, 1, 3, 4, 5, 2)]
    )
    assert abelian_invariant_factors(z2z4) == [2, 4]
    triv = PermGroup.generated([(0, 1)])
    assert abelian_invariant_factors(triv) == []
    cyc3 = latin_group(LatinSquare.circulant(3))
    assert abelian_invariant_factors(cyc3) == [3]
    # the addition-table square has involution row maps generating S_3
    sym3 = latin_group(LatinSquare([[1, 2, 3], [2, 3, 1], [3, 1, 2]]))
    assert not sym3.abelian and sym3.order == 6
    with pytest.raises(ValueError):
        abelian_invariant_factors(sym3)


def test_order_histogram():
    g = latin_group(LatinSquare.circulant(6))
    assert g.order_histogram == {1: 1, 2: 1, 3: 2, 6: 2}
