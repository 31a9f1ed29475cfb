import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from glpsh.field import (
    FieldError,
    Mat,
    MatrixError,
    block_embed,
    block_embed_flat,
    block_extract_flat,
    det_flat,
    field_for_order,
    field_make,
    gl_enumerate,
    gl_order,
    identity_flat,
    inverse_flat,
    key_to_entries,
    mat_inv,
    matmul_flat,
    matrix_key,
)

ORDERS = [2, 3, 4, 5, 7, 8, 9, 16]


@pytest.mark.parametrize("q", ORDERS)
def test_field_axioms_exhaustive(q):
    F = field_for_order(q)
    assert F.q == q
    r = range(q)
    for a, b, c in itertools.product(r, repeat=3):
        assert F.add[F.add[a, b], c] == F.add[a, F.add[b, c]]
        assert F.mul[F.mul[a, b], c] == F.mul[a, F.mul[b, c]]
        assert F.mul[a, F.add[b, c]] == F.add[F.mul[a, b], F.mul[a, c]]
    for a in r:
        assert F.add[a, F.neg[a]] == 0
        if a:
            assert F.mul[a, F.inv[a]] == 1


@pytest.mark.parametrize("q", ORDERS)
def test_generator_is_primitive(q):
    F = field_for_order(q)
    assert F.element_order(F.generator) == q - 1


def test_prime_field_is_residue_arithmetic():
    F = field_make(7)
    for a in range(7):
        for b in range(7):
            assert F.add[a, b] == (a + b) % 7 and F.mul[a, b] == (a * b) % 7


@pytest.mark.parametrize("bad", [6, 12, 1])
def test_non_prime_powers_rejected(bad):
    with pytest.raises(FieldError):
        field_for_order(bad)


def test_field_cap():
    with pytest.raises(FieldError):
        field_make(2, 5)
    with pytest.raises(FieldError):
        field_make(6)


@pytest.mark.parametrize("n,q", [(0, 2), (1, 2), (1, 5), (2, 2), (2, 3), (3, 2), (2, 4)])
def test_gl_order_matches_enumeration(n, q):
    assert len(gl_enumerate(n, field_for_order(q))) == gl_order(n, q)


def test_gl_enumeration_sorted_by_key():
    F = field_for_order(3)
    els = gl_enumerate(2, F)
    keys = [matrix_key(e, 3) for e in els]
    assert keys == sorted(keys)
    assert all(key_to_entries(k, 3, 2) == e for k, e in zip(keys, els))


def test_gl_cap():
    with pytest.raises(FieldError):
        gl_enumerate(3, field_for_order(3), cap=1000)


def _mat(q, n):
    return st.lists(st.integers(0, q - 1), min_size=n * n, max_size=n * n).map(tuple)


@given(q=st.sampled_from([2, 3, 4, 5]), data=st.data())
def test_det_multiplicative(q, data):
    F = field_for_order(q)
    n = 3
    a, b = data.draw(_mat(q, n)), data.draw(_mat(q, n))
    assert det_flat(F, matmul_flat(F, a, b, n), n) == F.mul[det_flat(F, a, n), det_flat(F, b, n)]


@given(q=st.sampled_from([2, 3, 4, 9]), data=st.data())
def test_inverse(q, data):
    F = field_for_order(q)
    n = 3
    a = data.draw(_mat(q, n))
    if det_flat(F, a, n) == 0:
        with pytest.raises(MatrixError):
            inverse_flat(F, a, n)
        return
    assert matmul_flat(F, a, inverse_flat(F, a, n), n) == identity_flat(n)


def test_block_roundtrip():
    F = field_for_order(3)
    A = Mat.from_rows([[1, 2], [0, 1]], F)
    B = Mat.from_rows([[2]], F)
    C = block_embed([A, B])
    assert C.rows() == [[1, 2, 0], [0, 1, 0], [0, 0, 2]]
    assert block_extract_flat(C.entries, (2, 1), 3) == [A.entries, B.entries]
    assert block_embed_flat([(), (1,)], (0, 1), 1) == (1,)
    assert (C @ mat_inv(C)) == Mat.identity(3, F)


def test_mat_validation():
    F = field_for_order(2)
    with pytest.raises(MatrixError):
        Mat(2, (0, 1, 1), F)
    with pytest.raises(MatrixError):
        Mat(1, (2,), F)
