"""Gate catalog, gate tensors and exact gate MPOs.

Qubit ordering convention: within any dense matrix the first listed qubit is
the most significant digit of the basis index. For whole-register matrices
qubit 0 is the most significant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import cos, sin

import numpy as np

from .tensor import Tensor, contract, permute, reshape, svd_truncated

# name -> (number of qubits, number of angle parameters)
CATALOG: dict[str, tuple[int, int]] = {
    "id": (1, 0),
    "x": (1, 0),
    "sx": (1, 0),
    "sxdg": (1, 0),
    "h": (1, 0),
    "rx": (1, 1),
    "rz": (1, 1),
    "rzz": (2, 1),
    "cz": (2, 0),
    "cx": (2, 0),
    "swap": (2, 0),
    "ccx": (3, 0),
    "ccz": (3, 0),
}

SELF_INVERSE = frozenset({"id", "x", "h", "cz", "cx", "swap", "ccx", "ccz"})
ADJOINT_KIND = {"sx": "sxdg", "sxdg": "sx"}

# singular values below this fraction of the largest are exact zeros in gate splits
_EXACT_ZERO = 1e-12


class CatalogError(ValueError):
    pass


@dataclass(frozen=True)
class Gate:
    """A catalog operation applied to specific qubits.

    Attributes:
        kind: Lower-case catalog name, e.g. ``"rzz"``.
        qubits: Target qubits, in the order the matrix convention refers to.
        params: Rotation angles in radians.
    """

    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))
        if self.kind not in CATALOG:
            raise CatalogError(f"unknown gate kind {self.kind!r}")
        arity, nparams = CATALOG[self.kind]
        if len(self.qubits) != arity:
            raise CatalogError(f"{self.kind} acts on {arity} qubit(s), got {self.qubits}")
        if len(self.params) != nparams:
            raise CatalogError(f"{self.kind} takes {nparams} parameter(s), got {self.params}")
        if len(set(self.qubits)) != len(self.qubits):
            raise CatalogError(f"repeated qubit in {self.kind}{self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise CatalogError(f"negative qubit index in {self.kind}{self.qubits}")

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def span(self) -> tuple[int, int]:
        return min(self.qubits), max(self.qubits)

    @property
    def is_nearest_neighbor(self) -> bool:
        """True for 1QGs and for 2QGs on adjacent qubits."""
        lo, hi = self.span
        return self.num_qubits <= 2 and hi - lo <= 1

    def adjoint(self) -> Gate:
        if self.kind in SELF_INVERSE:
            return self
        if self.kind in ADJOINT_KIND:
            return Gate(ADJOINT_KIND[self.kind], self.qubits)
        return Gate(self.kind, self.qubits, tuple(-p for p in self.params))

    def __str__(self) -> str:
        args = f"({', '.join(f'{p:.6g}' for p in self.params)})" if self.params else ""
        return f"{self.kind}{args} {','.join(map(str, self.qubits))}"


def _rx(theta: float) -> np.ndarray:
    c, s = cos(theta / 2), sin(theta / 2)
    return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)


def _rz(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


def _rzz(theta: float) -> np.ndarray:
    a, b = np.exp(-0.5j * theta), np.exp(0.5j * theta)
    return np.diag([a, b, b, a])


_SX = 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]], dtype=complex)

_FIXED = {
    "id": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "sx": _SX,
    "sxdg": _SX.conj().T,
    "h": np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    "cz": np.diag([1, 1, 1, -1]).astype(complex),
    "cx": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "swap": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
    "ccx": np.eye(8, dtype=complex)[[0, 1, 2, 3, 4, 5, 7, 6]],
    "ccz": np.diag([1, 1, 1, 1, 1, 1, 1, -1]).astype(complex),
}

_PARAMETRIC = {"rx": _rx, "rz": _rz, "rzz": _rzz}


def gate_matrix(g: Gate) -> Tensor:
    """The ``2^k x 2^k`` unitary of ``g`` in its listed qubit order."""
    if g.kind in _PARAMETRIC:
        return _PARAMETRIC[g.kind](*g.params)
    return _FIXED[g.kind].copy()


def tensorize(g: Gate) -> Tensor:
    """Rank-2k gate tensor with axes ``(out_1..out_k, in_1..in_k)``."""
    k = g.num_qubits
    return reshape(gate_matrix(g), (2,) * (2 * k))


def sorted_tensor(g: Gate) -> Tensor:
    """Gate tensor with both axis groups reordered by ascending qubit index."""
    k = g.num_qubits
    order = sorted(range(k), key=lambda p: g.qubits[p])
    return permute(tensorize(g), order + [k + p for p in order])


@dataclass
class GateMPO:
    """Exact MPO form of a gate over an inclusive span of qubits.

    Site tensors use the axis order ``(q_out, q_in, b_left, b_right)``; the
    outer bonds have extent 1.
    """

    sites: list[Tensor]
    span: tuple[int, int]
    gate: Gate | None = field(default=None, compare=False)

    @property
    def bonds(self) -> list[int]:
        return [t.shape[3] for t in self.sites[:-1]]

    def to_matrix(self) -> Tensor:
        """Dense operator on the span, first span qubit most significant."""
        acc = self.sites[0][:, :, 0, :]  # (o, i, b)
        for t in self.sites[1:]:
            acc = contract(acc, t, [acc.ndim - 1], [2])
        acc = acc[..., 0]
        m = acc.ndim // 2
        acc = permute(acc, [2 * j for j in range(m)] + [2 * j + 1 for j in range(m)])
        return reshape(acc, (2**m, 2**m))


def decompose_gate_mpo(g: Gate, span_lo: int | None = None, span_hi: int | None = None) -> GateMPO:
    """Split ``g`` into an exact MPO over ``[span_lo, span_hi]``.

    Interacting sites come from left-to-right SVDs of the site-grouped gate
    tensor, keeping every singular value that is not an exact zero. Sites
    inside the span that the gate does not touch are identities carrying the
    bond through.

    Raises:
        ValueError: If the span does not cover the gate's qubits.
    """
    k = g.num_qubits
    gm = operator_mpo(reshape(sorted_tensor(g), (2**k, 2**k)), sorted(g.qubits), span_lo, span_hi)
    gm.gate = g
    return gm


def operator_mpo(
    matrix: Tensor, qubits: list[int], span_lo: int | None = None, span_hi: int | None = None
) -> GateMPO:
    """Exact MPO of a dense operator on ascending ``qubits`` (first one most significant)."""
    lo, hi = qubits[0], qubits[-1]
    span_lo = lo if span_lo is None else span_lo
    span_hi = hi if span_hi is None else span_hi
    if span_lo > lo or span_hi < hi:
        raise ValueError(f"span [{span_lo}, {span_hi}] does not cover qubits {qubits}")

    k = len(qubits)
    t = reshape(matrix, (2,) * (2 * k))
    # group (out_j, in_j) per site
    t = permute(t, [a for j in range(k) for a in (j, k + j)])

    cores: list[Tensor] = []
    left = 1
    rest = reshape(t, (1, 4**k))
    for _ in range(k - 1):
        mat = reshape(rest, (left * 4, rest.size // (left * 4)))
        res = svd_truncated(mat, _EXACT_ZERO)
        chi = res.bond
        cores.append(permute(reshape(res.u, (left, 2, 2, chi)), (1, 2, 0, 3)))
        rest = res.s[:, None] * res.vh
        left = chi
    cores.append(permute(reshape(rest, (left, 2, 2, 1)), (1, 2, 0, 3)))

    eye = np.eye(2, dtype=complex)
    sites: list[Tensor] = []
    bond = 1
    core_of = dict(zip(qubits, cores))
    for q in range(span_lo, span_hi + 1):
        if q in core_of:
            sites.append(core_of[q])
            bond = core_of[q].shape[3]
        else:
            sites.append(np.einsum("ij,ab->ijab", eye, np.eye(bond, dtype=complex)))
    return GateMPO(sites=sites, span=(span_lo, span_hi))


def local_operator(gates, qubits: list[int], right: bool = False) -> Tensor:
    """Dense product of ``gates`` on the ascending qubit list ``qubits``.

    By default later gates multiply from the left (``g_m ... g_0``); with
    ``right`` they multiply from the right (``g_0 ... g_m``).
    """
    k = len(qubits)
    pos = {q: j for j, q in enumerate(qubits)}
    dim = 2**k
    op = np.eye(dim, dtype=complex)
    for g in gates:
        m = g.num_qubits
        axes = [pos[q] for q in g.qubits]
        gt = tensorize(g)
        if right:
            # op @ g: act on the column (input) axes with g's output axes
            t = op.reshape((2,) * (2 * k))
            cols = [k + a for a in axes]
            t = np.tensordot(t, gt, axes=(cols, list(range(m))))
            t = np.moveaxis(t, list(range(2 * k - m, 2 * k)), cols)
        else:
            t = op.reshape((2,) * k + (dim,))
            t = np.tensordot(gt, t, axes=(list(range(m, 2 * m)), axes))
            t = np.moveaxis(t, list(range(m)), axes)
        op = t.reshape(dim, dim)
    return op
