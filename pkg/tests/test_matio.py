import numpy as np
import pytest

import qperm as qp
from qperm.errors import MatrixParseError
from qperm.hadamard import ComplexHadamard
from qperm.matio import loads_blog, loads_cmat, read_matrix, write_matrix


def test_blog_roundtrip_bit_exact(tmp_path):
    x = qp.named("X_9^10")
    path = tmp_path / "x.blog"
    write_matrix(str(path), x)
    back = read_matrix(str(path))
    assert back == x
    assert back.level == x.level
    assert np.array_equal(back.exps, x.exps)


def test_cmat_roundtrip_precision(tmp_path):
    q = np.exp(1j) / abs(np.exp(1j))
    h = qp.named("H^q", q=q)
    hm = ComplexHadamard(qp.to_complex(h))
    path = tmp_path / "h.cmat"
    write_matrix(str(path), hm)
    back = read_matrix(str(path))
    assert back.n == 6
    assert np.max(np.abs(back.entries - hm.entries)) < 1e-15
    assert back.tol == hm.tol
    # write/read a second time: floats are reproduced exactly
    path2 = tmp_path / "h2.cmat"
    write_matrix(str(path2), back)
    again = read_matrix(str(path2))
    assert np.array_equal(again.entries, back.entries)


def test_blog_parse_errors():
    with pytest.raises(MatrixParseError) as err:
        loads_blog("2 2\n0 0\n0\n")
    assert err.value.line == 3
    with pytest.raises(MatrixParseError):
        loads_blog("")
    with pytest.raises(MatrixParseError):
        loads_blog("2\n0 0\n0 1\n")
    with pytest.raises(MatrixParseError) as err:
        loads_blog("2 2\n0 5\n0 1\n")
    assert err.value.line == 2


def test_cmat_parse_errors():
    with pytest.raises(MatrixParseError):
        loads_cmat("{not json")
    with pytest.raises(MatrixParseError):
        loads_cmat('{"n": 2, "tol": 1e-9, "entries": [[[1,0]]]}')


def test_unknown_extension(tmp_path):
    with pytest.raises(MatrixParseError):
        write_matrix(str(tmp_path / "m.txt"), qp.fourier(2))


def test_butson_written_as_cmat(tmp_path):
    path = tmp_path / "f.cmat"
    write_matrix(str(path), qp.fourier(3))
    back = read_matrix(str(path))
    assert isinstance(back, ComplexHadamard)
    assert np.max(np.abs(back.entries - qp.fourier(3).to_complex())) < 1e-15
