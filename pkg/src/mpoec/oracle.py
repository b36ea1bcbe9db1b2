"""Brute-force dense unitaries, used as ground truth for small circuits."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit
from .gates import Gate, gate_matrix

MAX_DENSE_QUBITS = 12


@dataclass(frozen=True)
class DenseUnitary:
    n: int
    m: np.ndarray


def apply_dense(u: np.ndarray, n: int, g: Gate) -> np.ndarray:
    """Left-multiply the ``2^n x 2^n`` matrix ``u`` by the embedding of ``g``."""
    k = g.num_qubits
    cols = u.shape[1]
    t = u.reshape((2,) * n + (cols,))
    gt = gate_matrix(g).reshape((2,) * (2 * k))
    t = np.tensordot(gt, t, axes=(list(range(k, 2 * k)), list(g.qubits)))
    # tensordot put the k output axes first; move them back to their qubit slots
    t = np.moveaxis(t, list(range(k)), list(g.qubits))
    return t.reshape(2**n, cols)


def dense_unitary(c: Circuit) -> DenseUnitary:
    """Product of all gate embeddings in program order, qubit 0 most significant."""
    n = c.num_qubits
    if n > MAX_DENSE_QUBITS:
        raise ValueError(f"dense oracle is capped at {MAX_DENSE_QUBITS} qubits, got {n}")
    u = np.eye(2**n, dtype=complex)
    for g in c.gates:
        u = apply_dense(u, n, g)
    return DenseUnitary(n, u)


def embed(g: Gate, n: int) -> np.ndarray:
    return apply_dense(np.eye(2**n, dtype=complex), n, g)


def oracle_equivalent(g: Circuit, g_prime: Circuit, tol: float = 1e-9) -> tuple[bool, float | None]:
    """Decide ``U = e^{i phi} U'`` by brute force.

    Returns:
        ``(equivalent, phi)``; ``phi`` is ``None`` when no phase could be
        recovered from the first diagonal entry of ``U U'^dagger``.
    """
    if g.num_qubits != g_prime.num_qubits:
        raise ValueError("circuits act on different numbers of qubits")
    d = dense_unitary(g).m @ dense_unitary(g_prime).m.conj().T
    d00 = d[0, 0]
    if abs(abs(d00) - 1.0) > tol:
        return False, None
    phase = d00 / abs(d00)
    ok = bool(np.max(np.abs(d - phase * np.eye(d.shape[0]))) <= tol)
    return ok, float(np.angle(phase))
