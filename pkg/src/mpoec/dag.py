"""Per-qubit dependency graph used to pull temporal zones out of a circuit."""

from __future__ import annotations

from collections import deque
from typing import Sequence

from .circuit import Circuit
from .gates import Gate


class CircuitDag:
    """Gates linked by per-qubit chains in program order.

    Node ``k`` is the ``k``-th gate of the source list. A node is *ready* when
    it heads the chain of every qubit it touches; only ready nodes may be
    removed, so any removal order is a valid topological order.
    """

    def __init__(self, num_qubits: int, gates: Sequence[Gate]) -> None:
        self.num_qubits = num_qubits
        self.gates: list[Gate] = list(gates)
        self._chains: list[deque[int]] = [deque() for _ in range(num_qubits)]
        for idx, g in enumerate(self.gates):
            for q in g.qubits:
                self._chains[q].append(idx)
        self._alive = len(self.gates)

    @classmethod
    def from_circuit(cls, c: Circuit) -> CircuitDag:
        return cls(c.num_qubits, c.gates)

    def __len__(self) -> int:
        return self._alive

    @property
    def empty(self) -> bool:
        return self._alive == 0

    @property
    def num_edges(self) -> int:
        return sum(max(len(ch) - 1, 0) for ch in self._chains)

    def front(self, q: int) -> int | None:
        """Index of the next unremoved gate on qubit ``q``."""
        ch = self._chains[q]
        return ch[0] if ch else None

    def remaining_on(self, q: int) -> int:
        return len(self._chains[q])

    def is_ready(self, idx: int) -> bool:
        return all(self.front(q) == idx for q in self.gates[idx].qubits)

    def ready_nodes(self) -> list[int]:
        heads = {ch[0] for ch in self._chains if ch}
        return sorted(idx for idx in heads if self.is_ready(idx))

    def remove(self, idx: int) -> Gate:
        if not self.is_ready(idx):
            raise ValueError(f"node {idx} ({self.gates[idx]}) is not at the frontier")
        for q in self.gates[idx].qubits:
            self._chains[q].popleft()
        self._alive -= 1
        return self.gates[idx]

    def pop_zone(self, qubits: Sequence[int]) -> list[Gate]:
        """Remove and return every gate reachable from the frontier that acts only on ``qubits``.

        Gates come back in program order. A qubit's chain stops contributing at
        its first gate that couples to a qubit outside the set.
        """
        allowed = set(qubits)
        out: list[Gate] = []
        while True:
            best = None
            for q in allowed:
                idx = self.front(q)
                if idx is None or (best is not None and idx >= best):
                    continue
                g = self.gates[idx]
                if allowed.issuperset(g.qubits) and self.is_ready(idx):
                    best = idx
            if best is None:
                return out
            out.append(self.remove(best))

    def topological_order(self) -> list[int]:
        """Drain a copy of the DAG by repeated frontier removal."""
        clone = CircuitDag(self.num_qubits, [])
        clone.gates = self.gates
        clone._chains = [deque(ch) for ch in self._chains]
        clone._alive = self._alive
        order: list[int] = []
        while not clone.empty:
            idx = clone.ready_nodes()[0]
            clone.remove(idx)
            order.append(idx)
        return order


def build_dag(c: Circuit) -> CircuitDag:
    return CircuitDag.from_circuit(c)


def extract_temporal_zone(dag: CircuitDag, i: int, j: int) -> list[Gate]:
    """Pull the temporal zone of the qubit pair ``(i, j)`` out of ``dag``."""
    return dag.pop_zone((i, j))
