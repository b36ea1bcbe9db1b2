from __future__ import annotations

import math

import numpy as np
import pytest

from conftest import random_circuit, random_gate
from mpoec.gates import Gate, decompose_gate_mpo, gate_matrix
from mpoec.mpo import (
    MPO,
    Side,
    apply_1qg,
    apply_long_range,
    apply_zone,
    identity_mpo,
    local_identity_distance,
    trace,
)
from mpoec.oracle import embed


def _dist(a, b):
    return float(np.max(np.abs(a - b)))


def test_identity_mpo():
    w = identity_mpo(1)
    assert w.sites[0].shape == (2, 2, 1, 1)
    assert trace(w) == 2
    w = identity_mpo(3)
    assert trace(w) == 8 and w.bonds == [1, 1]
    np.testing.assert_array_equal(w.to_matrix(), np.eye(8))
    with pytest.raises(ValueError):
        identity_mpo(0)


@pytest.mark.parametrize("n", range(1, 31))
def test_identity_trace_is_exact(n):
    assert trace(identity_mpo(n)) == complex(2.0**n)


def test_mpo_validation():
    with pytest.raises(ValueError):
        MPO([np.zeros((2, 2, 2, 1))])
    with pytest.raises(ValueError):
        MPO([np.zeros((2, 2, 1, 2)), np.zeros((2, 2, 3, 1))])


def test_apply_1qg_examples():
    x = gate_matrix(Gate("x", (0,)))
    w = apply_1qg(identity_mpo(3), x, 0)
    np.testing.assert_allclose(w.to_matrix(), embed(Gate("x", (0,)), 3))

    h = gate_matrix(Gate("h", (0,)))
    w = apply_1qg(apply_1qg(identity_mpo(2), h, 1), h, 1)
    assert _dist(w.sites[1], identity_mpo(1).sites[0]) < 1e-12

    theta = 0.83
    w = identity_mpo(2)
    apply_1qg(w, gate_matrix(Gate("rz", (1,), (theta,))), 1, Side.G)
    apply_1qg(w, gate_matrix(Gate("rz", (1,), (-theta,))), 1, Side.GDAG)
    assert _dist(w.sites[1], identity_mpo(1).sites[0]) < 1e-12


def test_apply_1qg_keeps_bonds(rng):
    w = identity_mpo(4)
    apply_zone(w, [Gate("swap", (1, 2))], [], 1, 0.0)
    apply_zone(w, [Gate("cx", (0, 1))], [], 0, 0.0)
    before = w.bonds
    for _ in range(20):
        g = random_gate(rng, 4, max_arity=1)
        apply_1qg(w, gate_matrix(g), g.qubits[0], Side.G if rng.random() < 0.5 else Side.GDAG)
        assert w.bonds == before


def test_apply_zone_examples():
    w = apply_zone(identity_mpo(3), [Gate("cx", (1, 2))], [Gate("cx", (1, 2))], 1, 1e-6)
    assert w.bonds == [1, 1]
    np.testing.assert_allclose(w.to_matrix(), np.eye(8), atol=1e-12)

    w = apply_zone(identity_mpo(2), [Gate("cx", (0, 1))], [], 0, 1e-6)
    assert w.bonds == [2]
    np.testing.assert_allclose(w.to_matrix(), embed(Gate("cx", (0, 1)), 2), atol=1e-12)

    zone = [Gate("rx", (0,), (0.3,)), Gate("rzz", (0, 1), (1.1,)), Gate("rx", (1,), (-2.0,))]
    adj = [g.adjoint() for g in zone]
    # the dagger side folds adjoints in forward order: W h_0 h_1 h_2
    w = apply_zone(identity_mpo(2), zone, adj, 0, 1e-6)
    assert w.bonds == [1]
    np.testing.assert_allclose(w.to_matrix(), np.eye(4), atol=1e-12)

    with pytest.raises(IndexError):
        apply_zone(identity_mpo(2), [], [], 1, 0.0)


def test_apply_long_range_examples():
    cz = Gate("cz", (0, 3))
    w = identity_mpo(4)
    apply_long_range(w, decompose_gate_mpo(cz), Side.G, 1e-6)
    assert _dist(w.to_matrix(), embed(cz, 4)) < 1e-9
    apply_long_range(w, decompose_gate_mpo(cz), Side.GDAG, 1e-6)
    assert w.bonds == [1, 1, 1]
    assert _dist(w.to_matrix(), np.eye(16)) < 1e-9

    g = Gate("rzz", (0, 2), (2.17,))
    w = apply_long_range(identity_mpo(3), decompose_gate_mpo(g), Side.G, 1e-6)
    assert _dist(w.to_matrix(), embed(g, 3)) < 1e-9

    with pytest.raises(ValueError):
        apply_long_range(identity_mpo(3), decompose_gate_mpo(Gate("cz", (0, 3))), Side.G, 0.0)


def test_apply_long_range_with_opposite_and_feeder():
    a, b = Gate("cx", (1, 4)), Gate("swap", (0, 3))
    fed = {(2, 3): ([Gate("rzz", (2, 3), (0.4,))], [Gate("h", (3,))])}
    w = identity_mpo(5)
    apply_long_range(
        w,
        decompose_gate_mpo(a, 0, 4),
        Side.G,
        0.0,
        zone_feeder=lambda i, j: fed.pop((i, j), ([], [])),
        opposite=decompose_gate_mpo(b, 0, 4),
    )
    ref = embed(Gate("rzz", (2, 3), (0.4,)), 5) @ embed(a, 5) @ embed(b, 5) @ embed(Gate("h", (3,)), 5)
    assert _dist(w.to_matrix(), ref) < 1e-9


@pytest.mark.parametrize("seed", range(12))
def test_dense_equivalence_at_threshold_zero(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 6))
    w = identity_mpo(n)
    left = np.eye(2**n, dtype=complex)
    right = np.eye(2**n, dtype=complex)
    for g in random_circuit(n, 25, seed + 50, max_arity=3):
        side = Side.G if rng.random() < 0.5 else Side.GDAG
        lo, hi = g.span
        if g.num_qubits == 1:
            apply_1qg(w, gate_matrix(g), lo, side)
        elif g.is_nearest_neighbor:
            zone = [g]
            apply_zone(w, zone if side is Side.G else [], zone if side is Side.GDAG else [], lo, 0.0)
        else:
            apply_long_range(w, decompose_gate_mpo(g), side, 0.0)
        if side is Side.G:
            left = embed(g, n) @ left
        else:
            right = right @ embed(g, n)
    assert np.linalg.norm(w.to_matrix() - left @ right) < 1e-9


def test_trace_examples(rng):
    x = apply_1qg(identity_mpo(2), gate_matrix(Gate("x", (0,))), 0)
    assert abs(trace(x)) < 1e-15
    cz = apply_zone(identity_mpo(2), [Gate("cz", (0, 1))], [], 0, 0.0)
    assert trace(cz) == pytest.approx(2.0)
    c = random_circuit(4, 20, 3)
    w = identity_mpo(4)
    ref = np.eye(16, dtype=complex)
    for g in c:
        if g.num_qubits == 1:
            apply_1qg(w, gate_matrix(g), g.qubits[0])
        else:
            apply_long_range(w, decompose_gate_mpo(g), Side.G, 0.0) if not g.is_nearest_neighbor else apply_zone(
                w, [g], [], g.span[0], 0.0
            )
        ref = embed(g, 4) @ ref
    assert abs(trace(w) - np.trace(ref)) < 1e-9


def test_truncation_monotone_in_threshold():
    c = random_circuit(5, 40, 11, nearest=True)
    bonds = []
    for thr in (0.0, 1e-6, 1e-3, 1e-1, 0.5):
        w = identity_mpo(5)
        for g in c:
            if g.num_qubits == 1:
                apply_1qg(w, gate_matrix(g), g.qubits[0])
            else:
                apply_zone(w, [g], [], g.span[0], thr)
        bonds.append(w.max_bond)
    assert bonds == sorted(bonds, reverse=True)


def _dense_distance(m: np.ndarray, n: int, site: int) -> float:
    t = m.reshape((2,) * (2 * n))
    reduced = np.trace(t, axis1=site, axis2=n + site)
    return 1.0 - np.linalg.norm(reduced) ** 2 / (2.0 * np.linalg.norm(m) ** 2)


def test_local_identity_distance_anchors():
    w = identity_mpo(3)
    assert local_identity_distance(w, 1) == 0.0
    x = apply_1qg(identity_mpo(2), gate_matrix(Gate("x", (0,))), 0)
    assert local_identity_distance(x, 0) == pytest.approx(1.0)
    assert local_identity_distance(x, 1) == pytest.approx(0.0, abs=1e-15)
    rz = apply_1qg(identity_mpo(2), gate_matrix(Gate("rz", (0,), (1e-2,))), 0)
    d = local_identity_distance(rz, 0)
    assert 0 < d == pytest.approx(math.sin(5e-3) ** 2, rel=1e-9)
    assert d == pytest.approx(_dense_distance(rz.to_matrix(), 2, 0), rel=1e-9)
    with pytest.raises(IndexError):
        local_identity_distance(w, 3)


@pytest.mark.parametrize("seed", range(6))
def test_local_identity_distance_matches_dense(seed):
    n = 4
    w = identity_mpo(n)
    for g in random_circuit(n, 15, seed, nearest=True):
        if g.num_qubits == 1:
            apply_1qg(w, gate_matrix(g), g.qubits[0])
        else:
            apply_zone(w, [g], [], g.span[0], 0.0)
    m = w.to_matrix()
    for site in range(n):
        assert local_identity_distance(w, site) == pytest.approx(_dense_distance(m, n, site), abs=1e-12)


def test_local_identity_distance_ignores_unitaries_elsewhere():
    w = apply_1qg(identity_mpo(3), gate_matrix(Gate("rz", (0,), (0.7,))), 0)
    before = local_identity_distance(w, 0)
    apply_zone(w, [Gate("rzz", (1, 2), (1.3,)), Gate("h", (2,))], [Gate("sx", (1,))], 1, 0.0)
    assert local_identity_distance(w, 0) == pytest.approx(before, abs=1e-14)
