import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from srpac.gf2 import BitMatrix, as_bits, inverse_lower_unitriangular, pack_rows, unpack_rows


def bit_arrays(rows, cols):
    return arrays(np.uint8, (rows, cols), elements=st.integers(0, 1))


@given(st.integers(1, 5), st.integers(1, 150), st.data())
def test_pack_round_trip(rows, cols, data):
    dense = data.draw(bit_arrays(rows, cols))
    assert np.array_equal(unpack_rows(pack_rows(dense), cols), dense)


@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 70), st.data())
def test_matmul_matches_integer_product(a, b, c, data):
    A = data.draw(bit_arrays(a, b))
    B = data.draw(bit_arrays(b, c))
    got = (BitMatrix.from_dense(A) @ BitMatrix.from_dense(B)).to_array()
    assert np.array_equal(got, (A.astype(int) @ B.astype(int)) % 2)


@given(st.integers(1, 80), st.data())
def test_vecmul_and_batch_agree(n, data):
    M = data.draw(bit_arrays(n, n))
    V = data.draw(bit_arrays(4, n))
    bm = BitMatrix.from_dense(M)
    expected = (V.astype(int) @ M.astype(int)) % 2
    assert np.array_equal(bm.batch_vecmul(V), expected)
    for k in range(4):
        assert np.array_equal(bm.vecmul(V[k]), expected[k])


def test_transpose_and_equality():
    M = np.array([[1, 0, 1], [0, 1, 1]], dtype=np.uint8)
    bm = BitMatrix.from_dense(M)
    assert np.array_equal(bm.T.to_array(), M.T)
    assert bm == BitMatrix.from_dense(M.copy())
    assert hash(bm) == hash(BitMatrix.from_dense(M.copy()))
    assert bm != bm.T


def test_dense_view_is_read_only():
    bm = BitMatrix.identity(4)
    with pytest.raises(ValueError):
        bm.to_array()[0, 0] = 0


@given(st.integers(1, 40), st.data())
def test_unitriangular_inverse(n, data):
    L = np.tril(data.draw(bit_arrays(n, n)), -1) + np.eye(n, dtype=np.uint8)
    m = BitMatrix.from_dense(L)
    assert m.is_lower_unitriangular()
    assert (m @ inverse_lower_unitriangular(m)) == BitMatrix.identity(n)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        as_bits([0, 2])
    with pytest.raises(ValueError):
        as_bits([0, 1], length=3)
    with pytest.raises(ValueError):
        BitMatrix.from_dense([[0, 3]])
    with pytest.raises(ValueError):
        BitMatrix.identity(2) @ BitMatrix.identity(3)
    with pytest.raises(ValueError):
        inverse_lower_unitriangular(BitMatrix.from_dense([[0, 1], [1, 0]]))
