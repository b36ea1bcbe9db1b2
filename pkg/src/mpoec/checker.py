"""Equivalence checking by sweeping two circuits into an intermediary MPO."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from typing import Any

from .circuit import Circuit
from .dag import CircuitDag, extract_temporal_zone
from .gates import Gate, gate_matrix, local_operator, operator_mpo
from .mpo import (
    MPO,
    Side,
    nearest_unitary,
    apply_1qg,
    apply_long_range,
    apply_zone,
    identity_mpo,
    local_identity_distance,
    trace,
)

EQUIVALENT = "equivalent"
NON_EQUIVALENT = "non_equivalent"

# a qubit whose remaining operator weight off the identity exceeds this stops the check
EARLY_STOP_CUTOFF = 1e-7


@dataclass(frozen=True)
class CheckConfig:
    """Knobs of one equivalence check.

    Attributes:
        svd_threshold: Relative singular value cutoff applied at every split.
        trace_tolerance: ``eps`` in ``| |Tr W| / 2^n - 1 | <= eps``.
        max_bond: Optional hard cap on MPO bond dimensions.
        early_stop: Stop as soon as a finished qubit is provably non-identity.
    """

    svd_threshold: float = 1e-3
    trace_tolerance: float = 1e-13
    max_bond: int | None = None
    early_stop: bool = True

    def __post_init__(self) -> None:
        if not 0.0 <= self.svd_threshold < 1.0:
            raise ValueError(f"svd_threshold must lie in [0, 1), got {self.svd_threshold}")
        if not 0.0 <= self.trace_tolerance < 1.0:
            raise ValueError(f"trace_tolerance must lie in [0, 1), got {self.trace_tolerance}")
        if self.max_bond is not None and self.max_bond < 1:
            raise ValueError(f"max_bond must be >= 1, got {self.max_bond}")


@dataclass
class CheckReport:
    verdict: str
    trace_ratio: complex
    max_bond_seen: int
    sweeps: int
    gate_applications: int
    final_bonds: list[int]
    early_stopped_at: int | None = None
    early_stop_distance: float | None = None
    discarded_weight: float = 0.0
    config: CheckConfig = field(default_factory=CheckConfig)
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.verdict == EQUIVALENT

    @property
    def trace_ratio_magnitude(self) -> float:
        return abs(self.trace_ratio)

    def to_dict(self, timings: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "verdict": self.verdict,
            "trace_ratio": {"re": self.trace_ratio.real, "im": self.trace_ratio.imag},
            "trace_ratio_magnitude": self.trace_ratio_magnitude,
            "max_bond": self.max_bond_seen,
            "final_bonds": list(self.final_bonds),
            "sweeps": self.sweeps,
            "gate_applications": self.gate_applications,
            "early_stopped_at": self.early_stopped_at,
            "early_stop_distance": self.early_stop_distance,
            "discarded_weight": self.discarded_weight,
            "config": asdict(self.config),
        }
        if timings:
            out["timings"] = dict(self.timings)
        return out

    def to_json(self, timings: bool = True, **kwargs) -> str:
        return json.dumps(self.to_dict(timings), **kwargs)


def trace_verdict(w: MPO, eps: float) -> tuple[str, complex]:
    """Compare ``|Tr W| / 2^n`` with 1; the modulus absorbs a global phase."""
    ratio = trace(w) / float(2**w.n)
    verdict = EQUIVALENT if abs(abs(ratio) - 1.0) <= eps else NON_EQUIVALENT
    return verdict, ratio


class _Run:
    """Mutable state of one check: the MPO, both DAGs and bookkeeping."""

    def __init__(self, g: Circuit, g_prime: Circuit, cfg: CheckConfig) -> None:
        self.n = g.num_qubits
        self.cfg = cfg
        self.dag_g = CircuitDag.from_circuit(g)
        # adjoints in the second circuit's own program order, folded onto q'
        self.dag_d = CircuitDag(self.n, [gate.adjoint() for gate in g_prime.gates])
        self.w = identity_mpo(self.n)
        self.applied = 0
        self.sweeps = 0
        self.checked: set[int] = set()
        self.stopped_at: int | None = None
        self.stop_distance: float | None = None

    @property
    def done(self) -> bool:
        return self.dag_g.empty and self.dag_d.empty

    def pull_zones(self, i: int, j: int) -> tuple[list[Gate], list[Gate]]:
        zg = extract_temporal_zone(self.dag_g, i, j)
        zd = extract_temporal_zone(self.dag_d, i, j)
        self.applied += len(zg) + len(zd)
        return zg, zd

    def apply_pair(self, i: int, zg: list[Gate], zd: list[Gate]) -> None:
        if all(x.num_qubits == 1 for x in zg) and all(x.num_qubits == 1 for x in zd):
            # single-qubit work never needs a split
            for x in zg:
                apply_1qg(self.w, gate_matrix(x), x.qubits[0], Side.G)
            for x in zd:
                apply_1qg(self.w, gate_matrix(x), x.qubits[0], Side.GDAG)
        else:
            apply_zone(self.w, zg, zd, i, self.cfg.svd_threshold, self.cfg.max_bond)

    def long_range_candidate(self, dag: CircuitDag, i: int) -> int | None:
        """Ready long-range or k>2 gate of ``dag`` whose span starts at qubit ``i``."""
        idx = dag.front(i)
        if idx is None:
            return None
        gate = dag.gates[idx]
        if gate.is_nearest_neighbor or gate.span[0] != i or not dag.is_ready(idx):
            return None
        return idx

    def apply_long_range(self, i: int) -> bool:
        """Run one subsweep for a long-range or k>2 gate whose span starts at ``i``.

        The temporal zone of the triggering gate's qubit set is pulled from
        both circuits, so a long-range gate on one side meets its counterpart
        gates on the other side in the same subsweep. Each side's zone becomes
        one exact operator MPO over the union span.
        """
        trigger = None
        for dag in (self.dag_g, self.dag_d):
            idx = self.long_range_candidate(dag, i)
            if idx is not None:
                trigger = dag.gates[idx]
                break
        if trigger is None:
            return False
        qubits = sorted(trigger.qubits)
        zg = self.dag_g.pop_zone(qubits)
        zd = self.dag_d.pop_zone(qubits)
        self.applied += len(zg) + len(zd)
        lo, hi = qubits[0], qubits[-1]
        mpos = {}
        if zg:
            mpos[Side.G] = operator_mpo(nearest_unitary(local_operator(zg, qubits)), qubits, lo, hi)
        if zd:
            op = local_operator(zd, qubits, right=True)
            mpos[Side.GDAG] = operator_mpo(nearest_unitary(op), qubits, lo, hi)
        side = Side.G if Side.G in mpos else Side.GDAG
        apply_long_range(
            self.w,
            mpos[side],
            side,
            self.cfg.svd_threshold,
            self.pull_zones,
            self.cfg.max_bond,
            opposite=mpos.get(Side.GDAG) if side is Side.G else None,
        )
        self.after_update(range(lo, hi + 1))
        return True

    def after_update(self, qubits) -> None:
        if not self.cfg.early_stop or self.stopped_at is not None:
            return
        for q in sorted(qubits):
            if q in self.checked:
                continue
            if self.dag_g.remaining_on(q) or self.dag_d.remaining_on(q):
                continue
            self.checked.add(q)
            d = local_identity_distance(self.w, q)
            if d > EARLY_STOP_CUTOFF:
                self.stopped_at = q
                self.stop_distance = d
                return

    def sweep(self) -> None:
        """One even/odd pass; returns early after a long-range subsweep."""
        self.sweeps += 1
        for parity in (0, 1):
            for i in range(parity, self.n - 1, 2):
                zg, zd = self.pull_zones(i, i + 1)
                if zg or zd:
                    self.apply_pair(i, zg, zd)
                    self.after_update((i, i + 1))
                elif self.apply_long_range(i):
                    return
                if self.stopped_at is not None:
                    return

    def run_single_qubit(self) -> None:
        self.sweeps += 1
        for dag, side in ((self.dag_g, Side.G), (self.dag_d, Side.GDAG)):
            while not dag.empty:
                gate = dag.remove(dag.front(0))
                apply_1qg(self.w, gate_matrix(gate), 0, side)
                self.applied += 1


def check_equivalence(g: Circuit, g_prime: Circuit, cfg: CheckConfig | None = None) -> CheckReport:
    """Decide whether ``g`` and ``g_prime`` implement the same unitary up to global phase.

    Both circuits are fed into an identity MPO from opposite sides, pair by
    pair in an even/odd sweep, one temporal zone per side and pair. Long-range
    and multi-qubit gates interrupt the sweep with an exact gate-MPO subsweep.

    Raises:
        ValueError: If the circuits act on different numbers of qubits.
    """
    cfg = cfg or CheckConfig()
    if g.num_qubits != g_prime.num_qubits:
        raise ValueError(
            f"qubit count mismatch: {g.num_qubits} vs {g_prime.num_qubits}"
        )
    t0 = time.perf_counter()
    run = _Run(g, g_prime, cfg)
    t1 = time.perf_counter()
    if run.n == 1:
        run.run_single_qubit()
    else:
        while not run.done and run.stopped_at is None:
            before = len(run.dag_g) + len(run.dag_d)
            run.sweep()
            if run.stopped_at is None and len(run.dag_g) + len(run.dag_d) == before:
                raise RuntimeError("sweep made no progress; DAG scheduling invariant broken")
    t2 = time.perf_counter()

    if run.stopped_at is None:
        verdict, ratio = trace_verdict(run.w, cfg.trace_tolerance)
    else:
        verdict, ratio = NON_EQUIVALENT, trace(run.w) / float(2**run.n)
    t3 = time.perf_counter()
    return CheckReport(
        verdict=verdict,
        trace_ratio=ratio,
        max_bond_seen=run.w.max_bond_seen,
        sweeps=run.sweeps,
        gate_applications=run.applied,
        final_bonds=run.w.bonds,
        early_stopped_at=run.stopped_at,
        early_stop_distance=run.stop_distance,
        discarded_weight=run.w.discarded_weight,
        config=cfg,
        timings={
            "setup_s": t1 - t0,
            "sweep_s": t2 - t1,
            "verdict_s": t3 - t2,
            "total_s": t3 - t0,
        },
    )
