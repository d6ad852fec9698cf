import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from matcocycle.matkernel import (ScaledProduct, eigen_moduli, exterior_power, op_norm, product_log_norms,
                                  scaled_multiply, singular_values, spectral_radius)

finite = st.floats(-3, 3, allow_nan=False, allow_infinity=False)


def square(k):
    return arrays(np.float64, (k, k), elements=finite)


def test_exterior_power_2x2_is_determinant():
    M = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert exterior_power(M, 2) == pytest.approx(np.array([[-2.0]]))
    assert np.array_equal(exterior_power(M, 1), M)


def test_exterior_power_of_identity_and_diagonal():
    assert np.allclose(exterior_power(np.eye(4), 2), np.eye(6))
    D = np.diag([1.0, 2.0, 3.0])
    assert np.allclose(exterior_power(D, 2), np.diag([2.0, 3.0, 6.0]))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5).flatmap(lambda k: st.tuples(square(k), square(k))))
def test_exterior_power_is_multiplicative(pair):
    M, N = pair
    k = M.shape[0]
    for l in range(1, k + 1):
        lhs = exterior_power(M @ N, l)
        rhs = exterior_power(M, l) @ exterior_power(N, l)
        assert np.allclose(lhs, rhs, atol=1e-9 * max(1.0, np.abs(rhs).max()))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5).flatmap(square))
def test_exterior_norm_is_product_of_singular_values(M):
    s = singular_values(M)
    for l in range(1, M.shape[0] + 1):
        assert op_norm(exterior_power(M, l)) == pytest.approx(np.prod(s[:l]), rel=1e-9, abs=1e-12)


def test_eigen_moduli_complex_pair_not_simple():
    c, s = math.cos(1.0), math.sin(1.0)
    mods, simple = eigen_moduli(np.array([[c, -s], [s, c]]))
    assert mods == pytest.approx([1.0, 1.0])
    assert not simple.any()


def test_eigen_moduli_golden_matrix():
    mods, simple = eigen_moduli(np.array([[2.0, 1.0], [1.0, 1.0]]))
    assert mods == pytest.approx([(3 + math.sqrt(5)) / 2, (3 - math.sqrt(5)) / 2], rel=1e-13)
    assert simple.all()


def test_scaled_product_long_chain_no_overflow():
    A = np.diag([2.0, 0.5])
    P = ScaledProduct.identity(2)
    for _ in range(5000):
        P = scaled_multiply(P, A)
    assert P.log_norm == pytest.approx(5000 * math.log(2), rel=1e-12)


def test_product_log_norms_matches_direct():
    rng = np.random.default_rng(0)
    mats = rng.normal(size=(3, 2, 2))
    words = rng.integers(0, 3, size=(20, 6))
    got = product_log_norms(mats, words)
    for w, g in zip(words, got):
        P = np.eye(2)
        for s in w:
            P = mats[s] @ P
        assert g == pytest.approx(math.log(op_norm(P)), rel=1e-12)


def test_spectral_radius():
    assert spectral_radius(np.array([[0.0, 2.0], [2.0, 0.0]])) == pytest.approx(2.0)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        op_norm(np.ones((2, 3)))
    with pytest.raises(ValueError):
        op_norm(np.array([[np.nan]]))
