from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mpoec.tensor import (
    ContractError,
    NumericError,
    PermuteError,
    ReshapeError,
    as_tensor,
    contract,
    permute,
    reshape,
    svd_truncated,
)


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def test_contract_pauli_x_on_basis_vector():
    x = as_tensor([[0, 1], [1, 0]])
    v = as_tensor([1, 0])
    np.testing.assert_array_equal(contract(x, v, [1], [0]), [0, 1])


def test_contract_identity_leaves_operand(rng):
    b = crandn(rng, 2, 5)
    np.testing.assert_allclose(contract(np.eye(2), b, [1], [0]), b, atol=0)


def test_contract_matches_loops(rng):
    a, b = crandn(rng, 2, 3, 4), crandn(rng, 4, 5)
    ref = np.zeros((2, 3, 5), dtype=complex)
    for i, j, k, l in itertools.product(range(2), range(3), range(5), range(4)):
        ref[i, j, k] += a[i, j, l] * b[l, k]
    np.testing.assert_allclose(contract(a, b, [2], [0]), ref, rtol=1e-12, atol=1e-12)


def test_contract_multiple_axes_matches_loops(rng):
    a, b = crandn(rng, 3, 2, 4), crandn(rng, 4, 3, 2)
    ref = np.zeros((2, 2), dtype=complex)
    for i, j, k, l in itertools.product(range(3), range(2), range(4), range(2)):
        ref[j, l] += a[i, j, k] * b[k, i, l]
    np.testing.assert_allclose(contract(a, b, [0, 2], [1, 0]), ref, atol=1e-12)


def test_contract_bilinear(rng):
    a, b = crandn(rng, 3, 4), crandn(rng, 4, 2)
    alpha = 0.3 - 1.7j
    np.testing.assert_allclose(contract(alpha * a, b, [1], [0]), alpha * contract(a, b, [1], [0]), rtol=1e-12)


def test_contract_errors(rng):
    a, b = crandn(rng, 2, 3), crandn(rng, 4, 2)
    with pytest.raises(ContractError):
        contract(a, b, [1], [0])
    with pytest.raises(ContractError):
        contract(a, b, [0, 1], [0])
    with pytest.raises(ContractError):
        contract(a, b, [5], [0])


def test_reshape_round_trip(rng):
    t = crandn(rng, 2, 2, 2, 2)
    np.testing.assert_array_equal(reshape(reshape(t, (4, 4)), (2, 2, 2, 2)), t)
    with pytest.raises(ReshapeError):
        reshape(reshape(t, (4, 4)), (3, 5))


def test_reshape_theta_grouping_matches_index_arithmetic(rng):
    cl, cr = 3, 2
    theta = crandn(rng, cl, 2, 2, cr, 2, 2)
    m = reshape(theta, (cl * 4, cr * 4))
    for a, p, q, b, r, s in itertools.product(range(cl), range(2), range(2), range(cr), range(2), range(2)):
        assert m[(a * 2 + p) * 2 + q, (b * 2 + r) * 2 + s] == theta[a, p, q, b, r, s]


def test_permute(rng):
    t = crandn(rng, 2, 3, 4, 5)
    np.testing.assert_array_equal(permute(t, (0, 1, 2, 3)), t)
    m = crandn(rng, 2, 3)
    np.testing.assert_array_equal(permute(m, (1, 0)), m.T)
    p = permute(t, (2, 3, 0, 1))
    for _ in range(50):
        i, j, k, l = rng.integers(2), rng.integers(3), rng.integers(4), rng.integers(5)
        assert p[k, l, i, j] == t[i, j, k, l]
    with pytest.raises(PermuteError):
        permute(t, (0, 0, 1, 2))


def test_svd_identity():
    res = svd_truncated(np.eye(2, dtype=complex), 0.5)
    np.testing.assert_allclose(res.s, [1, 1])
    np.testing.assert_allclose(res.u @ res.vh, np.eye(2), atol=1e-14)


def test_svd_relative_cutoff():
    res = svd_truncated(np.diag([1.0, 1e-8]).astype(complex), 1e-6)
    assert res.bond == 1
    assert res.discarded_weight == pytest.approx(1e-16, rel=1e-9)


def test_svd_threshold_zero_reconstructs(rng):
    m = crandn(rng, 8, 6)
    res = svd_truncated(m, 0.0)
    assert np.linalg.norm(m - (res.u * res.s) @ res.vh) < 1e-10


def test_svd_keeps_one_and_respects_cap(rng):
    m = crandn(rng, 6, 6)
    assert svd_truncated(m, 0.999).bond >= 1
    assert svd_truncated(m, 0.0, max_bond=3).bond == 3
    with pytest.raises(NumericError):
        svd_truncated(np.full((2, 2), np.nan, dtype=complex), 0.0)
    with pytest.raises(ValueError):
        svd_truncated(m, 1.0)


@settings(max_examples=60, deadline=None)
@given(
    rows=st.integers(1, 7),
    cols=st.integers(1, 7),
    threshold=st.floats(0.0, 0.9),
    seed=st.integers(0, 2**32 - 1),
)
def test_svd_truncation_error_is_discarded_weight(rows, cols, threshold, seed):
    m = crandn(np.random.default_rng(seed), rows, cols)
    res = svd_truncated(m, threshold)
    err = np.linalg.norm(m - (res.u * res.s) @ res.vh)
    assert abs(err - np.sqrt(res.discarded_weight)) < 1e-9
    assert np.all(res.s >= threshold * res.s[0] * (1 - 1e-12))
