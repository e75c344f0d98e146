import numpy as np
import pytest

import qperm as qp
from qperm.hadamard import ButsonMatrix, ComplexHadamard
from qperm.named import MissingParameterError, UnknownMatrixError, bjorck_froberg_root


def test_tao_entries():
    t = qp.named("T")
    j = np.exp(2j * np.pi / 3)
    assert abs(t.to_complex()[1, 2] - j) < 1e-12  # row 2, column 3
    assert qp.level(t) == 3


def test_haagerup_at_i_is_butson_level_4():
    h = qp.named("H^q", q=1j)
    assert isinstance(h, ButsonMatrix)
    assert qp.level(h) == 4
    assert qp.is_hadamard(h)


def test_haagerup_symbolic_positions():
    q = np.exp(0.41j)
    h = qp.to_complex(qp.named("H^q", q=q))
    assert abs(h[2, 4] - q) < 1e-12
    assert abs(h[2, 5] + q) < 1e-12
    assert abs(h[4, 2] - np.conj(q)) < 1e-12
    assert abs(h[1, 1] + 1) < 1e-12


def test_x_9_10_row():
    x = qp.named("X_9^10")
    assert x.level == 10
    assert x.exps[1].tolist() == [0, 5, 3, 3, 5, 9, 8, 7, 1]


def test_all_fixed_catalog_matrices_are_hadamard():
    for name in ["T", "BF", "X_9^10", "X_10^4", "X_10^5", "X_10^6"]:
        assert qp.is_hadamard(qp.named(name)), name
    for n in range(1, 11):
        assert qp.is_hadamard(qp.named(f"F_{n}")), n
    for name in ["F_22", "F_33", "F_222", "F_23", "F_32"]:
        assert qp.is_hadamard(qp.named(name)), name


def test_parameterized_families_random_parameters():
    rng = np.random.default_rng(0)
    for _ in range(5):
        q = np.exp(2j * np.pi * rng.random())
        r, s = np.exp(2j * np.pi * rng.random(2))
        for m in [
            qp.named("H^q", q=q),
            qp.named("P^q", q=q),
            qp.named("F_22^q", q=q),
            qp.named("F_23^rs", r=r, s=s),
            qp.named("F_32^rs", r=r, s=s),
        ]:
            assert qp.is_hadamard(m)


def test_petrescu_structure():
    w = np.exp(2j * np.pi / 6)
    q = np.exp(1.1j)
    p = qp.to_complex(qp.named("P^q", q=q))
    assert abs(p[1, 1] - q * w) < 1e-12
    assert abs(p[3, 3] - np.conj(q) * w) < 1e-12
    assert abs(p[6, 6] - w**4) < 1e-12
    p1 = qp.named("P^q", q=1)
    assert isinstance(p1, ButsonMatrix) and qp.level(p1) == 6


def test_bjorck_froberg_root_and_matrix():
    a = bjorck_froberg_root()
    assert abs(a**2 - (1 - np.sqrt(3)) * a + 1) < 1e-12
    assert abs(abs(a) - 1) < 1e-12
    assert a.imag > 0
    bf = qp.named("BF")
    assert isinstance(bf, ComplexHadamard)
    # circulant: every row is the previous one shifted right
    e = bf.entries
    for r in range(1, 6):
        assert np.allclose(e[r], np.roll(e[r - 1], 1))


def test_unknown_and_missing():
    with pytest.raises(UnknownMatrixError):
        qp.named("nope")
    with pytest.raises(MissingParameterError):
        qp.named("H^q")
    with pytest.raises(ValueError):
        qp.named("T", q=1)


def test_multidigit_names():
    # F_10 is the size-10 Fourier matrix, not a tensor (digits 1 and 0)
    f10 = qp.named("F_10")
    assert f10.n == 10 and qp.level(f10) == 10
    f222 = qp.named("F_222")
    assert f222.n == 8 and qp.level(f222) == 2
