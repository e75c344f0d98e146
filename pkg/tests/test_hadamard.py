import numpy as np
import pytest

import qperm as qp
from qperm.errors import SearchBudgetExceeded, ShapeError
from qperm.hadamard import ButsonMatrix, ComplexHadamard, random_witness


def test_fourier_small():
    f2 = qp.fourier(2)
    assert f2.exps.tolist() == [[0, 0], [0, 1]] and f2.level == 2
    f4 = qp.fourier(4)
    assert f4.exps[1].tolist() == [0, 1, 2, 3]
    assert qp.fourier(1).exps.tolist() == [[0]]
    assert qp.is_hadamard(qp.fourier(4))


def test_is_hadamard_diagnostic_on_broken_fourier():
    f4 = qp.fourier(4)
    exps = f4.exps.copy()
    exps[2, 3] = (exps[2, 3] + 2) % 4  # negate one entry
    broken = ButsonMatrix(4, exps)
    check = qp.is_hadamard(broken)
    assert not check
    i, j = check.pair
    # recompute the named inner product directly
    hm = broken.to_complex()
    assert abs(np.sum(hm[i] * np.conj(hm[j]))) > 1e-6


def test_is_hadamard_shape_error():
    with pytest.raises(ShapeError):
        ButsonMatrix(2, [[0, 0, 0], [0, 1, 0]])


def test_complex_backend_checks():
    ent = qp.fourier(3).to_complex()
    assert qp.is_hadamard(ComplexHadamard(ent))
    bad = ent.copy()
    bad[1, 1] = 0.5
    check = qp.is_hadamard(ComplexHadamard(bad))
    assert not check and check.reason == "entry not unit modulus"


def test_level_computation():
    assert qp.level(qp.fourier(4)) == 4
    assert qp.level(qp.named("H^q", q=1)) == 4
    assert qp.level(qp.named("T")) == 3
    assert qp.level(ButsonMatrix(6, [[0]])) == 1
    assert qp.level(ButsonMatrix(6, [[0, 3], [3, 0]])) == 2


def test_tensor_shapes_and_levels():
    t = qp.tensor(qp.fourier(2), qp.fourier(2))
    assert t.n == 4 and t.level == 2 and qp.is_hadamard(t)
    t23 = qp.tensor(qp.fourier(2), qp.fourier(3))
    assert t23.level == 6
    assert qp.equivalent(t23, qp.fourier(6)) is not None
    # tensor with the trivial matrix is the identity operation
    triv = ButsonMatrix(1, [[0]])
    assert qp.tensor(qp.fourier(3), triv) == qp.fourier(3)


def test_tensor_index_order():
    a = qp.fourier(2)
    b = qp.fourier(3)
    t = qp.tensor(a, b)
    ac, bc, tc = a.to_complex(), b.to_complex(), t.to_complex()
    for i in range(2):
        for x in range(3):
            for j in range(2):
                for y in range(3):
                    assert abs(tc[i * 3 + x, j * 3 + y] - ac[i, j] * bc[x, y]) < 1e-12


def test_dita_product_block_display():
    # 2x2 outer factor: the block matrix is (h11*k1 | h12*k2 ; h21*k1 | h22*k2)
    h = qp.fourier(2)
    k1, k2 = qp.fourier(3), qp.fourier(3)
    d = qp.dita_product(h, [k1, k2])
    hc = h.to_complex()
    dc = d.to_complex()
    for j, k in enumerate([k1, k2]):
        kc = k.to_complex()
        for i in range(2):
            block = dc[i * 3:(i + 1) * 3, j * 3:(j + 1) * 3]
            assert np.allclose(block, hc[i, j] * kc)
    assert d == qp.tensor(h, qp.fourier(3))


def test_dita_product_scaled_factor_still_hadamard():
    base = qp.fourier(3)
    scaled = ComplexHadamard(base.to_complex() * np.exp(0.37j))
    d = qp.dita_product(qp.fourier(2), [base, scaled])
    assert qp.is_hadamard(d)
    hm = qp.to_complex(d)
    gram = hm @ hm.conj().T
    assert np.allclose(gram, 6 * np.eye(6), atol=1e-9)


def test_dita_product_shape_errors():
    with pytest.raises(ShapeError):
        qp.dita_product(qp.fourier(2), [qp.fourier(3)])
    with pytest.raises(ShapeError):
        qp.dita_product(qp.fourier(2), [qp.fourier(3), qp.fourier(2)])


def test_dita_deform_all_ones_is_tensor():
    d = qp.dita_deform(qp.fourier(2), qp.fourier(3), np.ones((3, 2)))
    assert d == qp.tensor(qp.fourier(2), qp.fourier(3))


def test_dita_deform_rejects_non_unit():
    with pytest.raises(ValueError):
        qp.dita_deform(qp.fourier(2), qp.fourier(2), np.array([[1, 1], [1, 0.5]]))


def test_dita_deform_matches_f22q():
    q = np.exp(0.9j)
    d = qp.dita_deform(qp.fourier(2), qp.fourier(2), np.array([[1, 1], [1, q]]))
    w = qp.equivalent(d, qp.named("F_22^q", q=q))
    assert w is not None


def test_dephase_fixed_point_and_roundtrip():
    t = qp.named("T")
    d, w = qp.dephase(t)
    assert qp.matrices_equal(d, t)
    assert np.all(w.row_exps == 0) and np.all(w.col_exps == 0)
    # scaled Fourier comes back to Fourier
    f4 = qp.fourier(4)
    exps = f4.exps.copy()
    exps[1] = (exps[1] + 1) % 4  # row 2 multiplied by i
    d, w = qp.dephase(ButsonMatrix(4, exps))
    assert d == f4
    bf = qp.named("BF")
    d, w = qp.dephase(bf)
    assert np.allclose(d.entries[0], 1) and np.allclose(d.entries[:, 0], 1)
    assert qp.matrices_equal(w.apply(bf), d)
    back = w.inverse().apply(d)
    assert qp.matrices_equal(back, bf, tol=1e-12)
    d2, w2 = qp.dephase(d)
    assert qp.matrices_equal(d2, d, tol=1e-12)


def test_witness_algebra():
    rng = np.random.default_rng(11)
    t = qp.named("T")
    w1 = random_witness(6, rng, exact_level=6)
    w2 = random_witness(6, rng, exact_level=12)
    lhs = w2.apply(w1.apply(t))
    rhs = w2.compose(w1).apply(t)
    assert qp.matrices_equal(lhs, rhs)
    assert qp.matrices_equal(w1.inverse().apply(w1.apply(t)), t)
    bf = qp.named("BF")
    w3 = random_witness(6, rng)
    assert qp.matrices_equal(w3.inverse().apply(w3.apply(bf)), bf, tol=1e-12)


def test_is_hadamard_invariant_under_witnesses():
    rng = np.random.default_rng(5)
    for m in [qp.named("T"), qp.named("BF"), qp.fourier(5)]:
        for _ in range(3):
            lvl = 12 if isinstance(m, ButsonMatrix) else None
            w = random_witness(m.n, rng, exact_level=lvl)
            assert qp.is_hadamard(w.apply(m))


def test_equivalences_from_catalog():
    wi = qp.equivalent(qp.named("F_22^q", q=1j), qp.fourier(4))
    assert wi is not None
    assert qp.matrices_equal(wi.apply(qp.named("F_22^q", q=1j)), qp.fourier(4))
    w1 = qp.equivalent(qp.named("F_22^q", q=1), qp.tensor(qp.fourier(2), qp.fourier(2)))
    assert w1 is not None
    assert qp.equivalent(qp.named("T"), qp.named("H^q", q=1)) is None


def test_equivalent_reflexive_symmetric():
    rng = np.random.default_rng(3)
    for m in [qp.named("T"), qp.fourier(5)]:
        w = qp.equivalent(m, m)
        assert w is not None and qp.matrices_equal(w.apply(m), m)
    a = qp.named("H^q", q=1)
    b = random_witness(6, rng, exact_level=8).apply(a)
    wab = qp.equivalent(a, b)
    wba = qp.equivalent(b, a)
    assert wab is not None and wba is not None
    assert qp.matrices_equal(wab.apply(a), b)
    assert qp.matrices_equal(wba.apply(b), a)


def test_equivalent_random_witness_roundtrip_complex():
    rng = np.random.default_rng(17)
    bf = qp.named("BF")
    for _ in range(3):
        w = random_witness(6, rng)
        moved = w.apply(bf)
        found = qp.equivalent(bf, moved)
        assert found is not None
        assert qp.matrices_equal(found.apply(bf), moved, tol=1e-7)


def test_equivalent_size_mismatch():
    with pytest.raises(ShapeError):
        qp.equivalent(qp.fourier(2), qp.fourier(3))


def test_equivalent_budget_exhaustion_is_loud():
    a = qp.named("H^q", q=1)
    rng = np.random.default_rng(23)
    b = random_witness(6, rng, exact_level=4).apply(a)
    with pytest.raises(SearchBudgetExceeded):
        qp.equivalent(a, b, node_budget=1)


def test_regularity_profiles():
    t = qp.is_regular(qp.named("T"))
    assert t.regular and set(t.profiles.values()) == {(3, 3)} and len(t.profiles) == 15
    p = qp.is_regular(qp.named("P^q", q=1))
    assert p.regular and set(p.profiles.values()) == {(2, 2, 3)} and len(p.profiles) == 21
    bf = qp.is_regular(qp.named("BF"))
    assert not bf.regular


def test_regularity_exact_matches_float():
    for m in [qp.named("T"), qp.named("H^q", q=1), qp.fourier(5), qp.named("X_10^4")]:
        exact = qp.is_regular(m)
        approx = qp.is_regular(ComplexHadamard(m.to_complex()), tol=1e-9)
        assert exact.regular == approx.regular
        assert exact.profiles == approx.profiles
