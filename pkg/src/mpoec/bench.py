"""Two-local benchmark circuits, native-basis rewrite, error injection and scaling studies.

Randomness comes from numpy's PCG64 bit generator seeded with a single
64-bit integer (``numpy.random.Generator(numpy.random.PCG64(seed))``), so a
seed fully determines every generated circuit and every injected error.
"""

from __future__ import annotations

import csv
import json
import math
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .checker import CheckConfig, check_equivalence
from .circuit import Circuit
from .gates import Gate

PATTERNS = ("linear", "sca", "full")
ERROR_KINDS = ("none", "missing_gates", "rotation_offset", "permutation")
HERON_BASIS = frozenset({"id", "x", "sx", "sxdg", "rz", "cz"})


def rng_for(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def entanglement_pairs(n: int, pattern: str, block: int) -> list[tuple[int, int]]:
    """Qubit pairs of the Rzz layer in block ``block``.

    ``sca`` starts from the circular list ``[(n-1, 0), (0, 1), ..., (n-2, n-1)]``,
    rotates it right by ``block mod n`` positions, and reverses every pair on
    odd blocks. The long-range ``(0, n-1)`` gate therefore moves one slot
    later in the layer each block. For ``n == 2`` the circular list is just
    ``[(0, 1)]``.
    """
    if pattern == "linear":
        return [(q, q + 1) for q in range(n - 1)]
    if pattern == "full":
        return list(combinations(range(n), 2))
    if pattern == "sca":
        circ = [(q, q + 1) for q in range(n - 1)]
        if n > 2:
            circ = [(n - 1, 0)] + circ
        shift = block % len(circ)
        pairs = circ[len(circ) - shift :] + circ[: len(circ) - shift]
        if block % 2 == 1:
            pairs = [(b, a) for a, b in pairs]
        return pairs
    raise ValueError(f"unknown entanglement pattern {pattern!r}; expected one of {PATTERNS}")


def generate_two_local(n: int, pattern: str, reps: int | None = None, seed: int = 0) -> Circuit:
    """Blocks of ``Rx`` layer, ``Rzz`` entangling layer, ``Rx`` layer.

    Angles are drawn i.i.d. uniform on ``[-pi, pi]`` in gate order.
    ``reps`` defaults to ``n`` (square circuits).
    """
    if n < 2:
        raise ValueError(f"two-local circuits need n >= 2, got {n}")
    if pattern not in PATTERNS:
        raise ValueError(f"unknown entanglement pattern {pattern!r}; expected one of {PATTERNS}")
    reps = n if reps is None else reps
    rng = rng_for(seed)
    c = Circuit(n)

    def angle() -> float:
        return float(rng.uniform(-math.pi, math.pi))

    for block in range(reps):
        for q in range(n):
            c.append(Gate("rx", (q,), (angle(),)))
        for a, b in entanglement_pairs(n, pattern, block):
            c.append(Gate("rzz", (a, b), (angle(),)))
        for q in range(n):
            c.append(Gate("rx", (q,), (angle(),)))
    return c


# Rewrite table. Every rule maps a gate to a gate sequence equal up to global phase.
def _rx_rule(g: Gate) -> list[Gate]:
    (q,), (theta,) = g.qubits, g.params
    return [
        Gate("rz", (q,), (math.pi / 2,)),
        Gate("sx", (q,)),
        Gate("rz", (q,), (theta + math.pi,)),
        Gate("sx", (q,)),
        Gate("rz", (q,), (math.pi / 2,)),
    ]


def _h_rule(g: Gate) -> list[Gate]:
    (q,) = g.qubits
    return [Gate("rz", (q,), (math.pi / 2,)), Gate("sx", (q,)), Gate("rz", (q,), (math.pi / 2,))]


def _cx_rule(g: Gate) -> list[Gate]:
    c, t = g.qubits
    return [*_h_rule(Gate("h", (t,))), Gate("cz", (c, t)), *_h_rule(Gate("h", (t,)))]


def _rzz_rule(g: Gate) -> list[Gate]:
    a, b = g.qubits
    return [*_cx_rule(Gate("cx", (a, b))), Gate("rz", (b,), g.params), *_cx_rule(Gate("cx", (a, b)))]


def _swap_rule(g: Gate) -> list[Gate]:
    a, b = g.qubits
    return [
        *_cx_rule(Gate("cx", (a, b))),
        *_cx_rule(Gate("cx", (b, a))),
        *_cx_rule(Gate("cx", (a, b))),
    ]


REWRITE_RULES = {
    "rx": _rx_rule,
    "h": _h_rule,
    "cx": _cx_rule,
    "rzz": _rzz_rule,
    "swap": _swap_rule,
}


def rewrite_to_heron(c: Circuit) -> Circuit:
    """Rewrite ``c`` into the ``{I, X, SX, SXdg, Rz, CZ}`` basis, equal up to global phase."""
    out = Circuit(c.num_qubits)
    for g in c.gates:
        if g.kind in HERON_BASIS:
            out.append(g)
        elif g.kind in REWRITE_RULES:
            out.extend(REWRITE_RULES[g.kind](g))
        else:
            raise ValueError(f"no native-basis rewrite for {g.kind}")
    return out


def inject_missing_gates(c: Circuit, count: int, seed: int) -> Circuit:
    """Drop ``count`` gates at distinct uniformly chosen positions."""
    if not 0 <= count <= len(c):
        raise ValueError(f"cannot remove {count} gates from a {len(c)}-gate circuit")
    drop = set(rng_for(seed).choice(len(c), size=count, replace=False).tolist())
    return Circuit(c.num_qubits, [g for k, g in enumerate(c.gates) if k not in drop])


def inject_rotation_offset(c: Circuit, theta_error: float) -> Circuit:
    """Add ``theta_error`` to every angle of every parameterized gate."""
    return Circuit(
        c.num_qubits,
        [Gate(g.kind, g.qubits, tuple(p + theta_error for p in g.params)) if g.params else g for g in c.gates],
    )


def inject_permutation(c: Circuit, n_swap: int, seed: int) -> Circuit:
    """Prepend ``n_swap`` nearest-neighbour SWAPs on uniformly chosen pairs."""
    n = c.num_qubits
    if n < 2:
        raise ValueError("permutation errors need at least two qubits")
    if n_swap < 0:
        raise ValueError(f"n_swap must be >= 0, got {n_swap}")
    starts = rng_for(seed).integers(0, n - 1, size=n_swap)
    swaps = [Gate("swap", (int(q), int(q) + 1)) for q in starts]
    return Circuit(n, swaps + list(c.gates))


def inject_error(c: Circuit, kind: str, severity: float, seed: int) -> Circuit:
    if kind == "none":
        return c.copy()
    if kind == "missing_gates":
        return inject_missing_gates(c, int(severity), seed)
    if kind == "rotation_offset":
        return inject_rotation_offset(c, float(severity))
    if kind == "permutation":
        return inject_permutation(c, int(severity), seed)
    raise ValueError(f"unknown error kind {kind!r}; expected one of {ERROR_KINDS}")


@dataclass(frozen=True)
class BenchSpec:
    """One grid point of a scaling study.

    ``G`` is the generated two-local circuit; ``G'`` is its native-basis
    rewrite with the selected error injected (seeded with ``seed + 1``).
    """

    n: int
    pattern: str = "linear"
    reps: int | None = None
    error_kind: str = "none"
    severity: float = 0.0
    config: CheckConfig = field(default_factory=CheckConfig)

    def __post_init__(self) -> None:
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.pattern not in PATTERNS:
            raise ValueError(f"unknown entanglement pattern {self.pattern!r}")
        if self.error_kind not in ERROR_KINDS:
            raise ValueError(f"unknown error kind {self.error_kind!r}")
        if self.error_kind in ("missing_gates", "permutation") and self.severity < 0:
            raise ValueError("gate and swap counts must be >= 0")
        if self.error_kind == "rotation_offset" and abs(self.severity) > math.pi:
            raise ValueError("rotation offsets must lie in [-pi, pi]")

    @property
    def layers(self) -> int:
        return self.n if self.reps is None else self.reps

    def circuits(self, seed: int) -> tuple[Circuit, Circuit]:
        g = generate_two_local(self.n, self.pattern, self.layers, seed)
        g_prime = inject_error(rewrite_to_heron(g), self.error_kind, self.severity, seed + 1)
        return g, g_prime


def run_sample(spec: BenchSpec, seed: int, sample: int = 0) -> dict:
    g, g_prime = spec.circuits(seed)
    t0 = time.perf_counter()
    report = check_equivalence(g, g_prime, spec.config)
    wall_ms = (time.perf_counter() - t0) * 1e3
    return {
        "kind": "sample",
        "n": spec.n,
        "pattern": spec.pattern,
        "reps": spec.layers,
        "error_kind": spec.error_kind,
        "severity": spec.severity,
        "svd_threshold": spec.config.svd_threshold,
        "sample": sample,
        "seed": seed,
        "verdict": report.verdict,
        "trace_ratio_mag": report.trace_ratio_magnitude,
        "max_bond": report.max_bond_seen,
        "wall_ms": wall_ms,
    }


def aggregate(records: Sequence[dict]) -> dict:
    times = [r["wall_ms"] for r in records]
    head = records[0]
    return {
        "kind": "aggregate",
        **{k: head[k] for k in ("n", "pattern", "reps", "error_kind", "severity", "svd_threshold")},
        "samples": len(records),
        "verdicts": {v: sum(r["verdict"] == v for r in records) for v in sorted({r["verdict"] for r in records})},
        "max_bond": max(r["max_bond"] for r in records),
        "mean_ms": statistics.fmean(times),
        "std_ms": statistics.pstdev(times) if len(times) > 1 else 0.0,
    }


def _run_task(task: tuple[BenchSpec, int, int]) -> dict:
    return run_sample(*task)


def run_scaling_study(
    grid: Iterable[BenchSpec],
    samples: int,
    out_path: str | Path,
    base_seed: int = 0,
    jobs: int = 1,
    csv_path: str | Path | None = None,
) -> list[dict]:
    """Run ``samples`` seeded checks per grid point and write JSON lines.

    Sample ``k`` of every grid point uses seed ``base_seed + k``. Each grid
    point yields its sample records followed by one aggregate record.
    """
    grid = list(grid)
    tasks = [(spec, base_seed + k, k) for spec in grid for k in range(samples)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]

    records: list[dict] = []
    for p in range(len(grid)):
        chunk = results[p * samples : (p + 1) * samples]
        records.extend(chunk)
        if chunk:
            records.append(aggregate(chunk))

    out_path = Path(out_path)
    with out_path.open("w", encoding="utf-8") as fh:
        for r in records:
            fh.write(json.dumps(r) + "\n")
    if csv_path is not None:
        export_csv(records, csv_path)
    return records


def export_csv(records: Sequence[dict], path: str | Path) -> None:
    """Write aggregate rows as CSV for external plotting."""
    rows = [r for r in records if r["kind"] == "aggregate"]
    cols = ["n", "pattern", "reps", "error_kind", "severity", "svd_threshold", "samples", "max_bond", "mean_ms", "std_ms"]
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=cols, extrasaction="ignore")
        writer.writeheader()
        writer.writerows(rows)
