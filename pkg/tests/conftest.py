from __future__ import annotations

import math

import numpy as np
import pytest

from mpoec.circuit import Circuit
from mpoec.gates import CATALOG, Gate

ONE_QUBIT = [k for k, (a, _) in CATALOG.items() if a == 1]
TWO_QUBIT = [k for k, (a, _) in CATALOG.items() if a == 2]


def random_gate(rng: np.random.Generator, n: int, nearest: bool = False, max_arity: int = 2) -> Gate:
    arity = 1 if n == 1 else int(rng.integers(1, max_arity + 1))
    arity = min(arity, n)
    if arity == 1:
        kind = ONE_QUBIT[rng.integers(len(ONE_QUBIT))]
    elif arity == 2:
        kind = TWO_QUBIT[rng.integers(len(TWO_QUBIT))]
    else:
        kind = ["ccx", "ccz"][rng.integers(2)]
    if arity == 2 and nearest:
        a = int(rng.integers(n - 1))
        qubits = (a, a + 1) if rng.random() < 0.5 else (a + 1, a)
    else:
        qubits = tuple(int(q) for q in rng.choice(n, size=arity, replace=False))
    params = tuple(float(rng.uniform(-math.pi, math.pi)) for _ in range(CATALOG[kind][1]))
    return Gate(kind, qubits, params)


def random_circuit(n: int, num_gates: int, seed: int, nearest: bool = False, max_arity: int = 2) -> Circuit:
    rng = np.random.default_rng(seed)
    return Circuit(n, [random_gate(rng, n, nearest, max_arity) for _ in range(num_gates)])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
