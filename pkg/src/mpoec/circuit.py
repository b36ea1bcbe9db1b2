"""Circuit container and circuit-level transformations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

from .gates import Gate


@dataclass
class Circuit:
    """An ordered gate list on ``num_qubits`` qubits (program order)."""

    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.num_qubits < 1:
            raise ValueError(f"a circuit needs at least one qubit, got {self.num_qubits}")
        self.gates = list(self.gates)
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate) -> None:
        if max(g.qubits) >= self.num_qubits:
            raise ValueError(f"{g} addresses a qubit outside 0..{self.num_qubits - 1}")

    def append(self, g: Gate) -> None:
        self._check(g)
        self.gates.append(g)

    def extend(self, gates: Iterable[Gate]) -> None:
        for g in gates:
            self.append(g)

    def add(self, kind: str, *qubits: int, params: Iterable[float] = ()) -> Circuit:
        self.append(Gate(kind, qubits, tuple(params)))
        return self

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self) -> Iterator[Gate]:
        return iter(self.gates)

    def copy(self) -> Circuit:
        return Circuit(self.num_qubits, list(self.gates))


def dagger(c: Circuit) -> Circuit:
    """Inverse circuit: gates reversed and each replaced by its adjoint."""
    return Circuit(c.num_qubits, [g.adjoint() for g in reversed(c.gates)])
