"""The intermediary MPO and the gate-application kernels acting on it.

Site tensors have axis order ``(q, q', a_left, a_right)``. Read as an
operator, ``q`` is the row (output) index and ``q'`` the column (input)
index, so the dense matrix of the chain is ``M[(q_0..q_{n-1}), (q'_0..q'_{n-1})]``
with qubit 0 most significant.

Gates of the first circuit act on the ``q`` side (``W <- g W``). Gates of the
second circuit, already replaced by their adjoints, act on the ``q'`` side
(``W <- W h``). Feeding both circuits in their own program order therefore
builds ``U U'^dagger`` from the middle outwards.
"""

from __future__ import annotations

import enum
from typing import Callable, Sequence

import numpy as np

from .gates import Gate, GateMPO, gate_matrix
from .tensor import Tensor, contract, permute, reshape, svd_truncated


class Side(enum.Enum):
    G = "G"
    GDAG = "Gdag"


ZoneFeeder = Callable[[int, int], tuple[Sequence[Gate], Sequence[Gate]]]

_SWAP4 = np.eye(4, dtype=complex)[[0, 2, 1, 3]]
_I2 = np.eye(2, dtype=complex)


class MPO:
    """Chain of rank-4 site tensors with unit boundary bonds."""

    def __init__(self, sites: list[Tensor]) -> None:
        if not sites:
            raise ValueError("an MPO needs at least one site")
        self.sites = sites
        self.max_bond_seen = max(self.bonds, default=1)
        self.discarded_weight = 0.0
        self.validate()

    @property
    def n(self) -> int:
        return len(self.sites)

    @property
    def bonds(self) -> list[int]:
        """Inner bond extents ``chi_1 .. chi_{n-1}``."""
        return [t.shape[3] for t in self.sites[:-1]]

    @property
    def max_bond(self) -> int:
        return max(self.bonds, default=1)

    def validate(self) -> None:
        if self.sites[0].shape[2] != 1 or self.sites[-1].shape[3] != 1:
            raise ValueError("boundary bonds must have extent 1")
        for i, t in enumerate(self.sites):
            if t.ndim != 4 or t.shape[:2] != (2, 2):
                raise ValueError(f"site {i} has shape {t.shape}, expected (2, 2, a, b)")
            if i + 1 < self.n and t.shape[3] != self.sites[i + 1].shape[2]:
                raise ValueError(f"bond mismatch between sites {i} and {i + 1}")

    def _note_bonds(self) -> None:
        self.max_bond_seen = max(self.max_bond_seen, self.max_bond)

    def copy(self) -> MPO:
        out = MPO([t.copy() for t in self.sites])
        out.max_bond_seen = self.max_bond_seen
        out.discarded_weight = self.discarded_weight
        return out

    def to_matrix(self) -> Tensor:
        """Dense ``2^n x 2^n`` matrix; exponential, meant for small ``n``."""
        acc = self.sites[0][:, :, 0, :]
        for t in self.sites[1:]:
            acc = contract(acc, t, [acc.ndim - 1], [2])
        acc = acc[..., 0]
        n = self.n
        acc = permute(acc, [2 * j for j in range(n)] + [2 * j + 1 for j in range(n)])
        return reshape(acc, (2**n, 2**n))


def identity_mpo(n: int) -> MPO:
    if n < 1:
        raise ValueError(f"identity_mpo needs n >= 1, got {n}")
    site = np.eye(2, dtype=complex).reshape(2, 2, 1, 1)
    return MPO([site.copy() for _ in range(n)])


def apply_1qg(w: MPO, g: Tensor, site: int, side: Side = Side.G) -> MPO:
    """Contract a 2x2 matrix into one site; bonds are untouched."""
    if not 0 <= site < w.n:
        raise IndexError(f"site {site} out of range for a {w.n}-site MPO")
    g = np.asarray(g, dtype=complex)
    if g.shape != (2, 2):
        raise ValueError(f"expected a 2x2 gate, got {g.shape}")
    t = w.sites[site]
    if side is Side.G:
        w.sites[site] = contract(g, t, [1], [0])
    else:
        w.sites[site] = permute(contract(t, g, [1], [0]), (0, 3, 1, 2))
    return w


def pair_operator(gates: Sequence[Gate], i: int) -> Tensor:
    """4x4 matrix on ``(i, i+1)`` of a gate list in program order (later gates on the left)."""
    op = np.eye(4, dtype=complex)
    for g in gates:
        op = _local_4x4(g, i) @ op
    return op


def _local_4x4(g: Gate, i: int) -> Tensor:
    m = gate_matrix(g)
    if g.qubits == (i,):
        return np.kron(m, _I2)
    if g.qubits == (i + 1,):
        return np.kron(_I2, m)
    if g.qubits == (i, i + 1):
        return m
    if g.qubits == (i + 1, i):
        return _SWAP4 @ m @ _SWAP4
    raise ValueError(f"{g} does not act within the zone ({i}, {i + 1})")


def _gdag_operator(gates: Sequence[Gate], i: int) -> Tensor:
    op = np.eye(4, dtype=complex)
    for g in gates:
        op = op @ _local_4x4(g, i)
    return op


def nearest_unitary(m: Tensor) -> Tensor:
    # long zones accumulate rounding in the product; the polar factor strips it
    u, _, vh = np.linalg.svd(m)
    return u @ vh


def zone_operators(
    zone_g: Sequence[Gate], zone_gdag: Sequence[Gate], i: int
) -> tuple[Tensor | None, Tensor | None]:
    """Unitary 4x4 operators of both zones on ``(i, i+1)``; ``None`` for an empty zone."""
    g_op = nearest_unitary(pair_operator(zone_g, i)) if zone_g else None
    d_op = nearest_unitary(_gdag_operator(zone_gdag, i)) if zone_gdag else None
    return g_op, d_op


def _fold_pair(theta: Tensor, g_op: Tensor | None, d_op: Tensor | None) -> Tensor:
    """Apply 4x4 operators to a tensor whose first four axes are ``(q_i, q_i', q_j, q_j')``."""
    if g_op is not None:
        # (o_i, o_j, in_i, in_j) against (q_i, q_j)
        theta = contract(reshape(g_op, (2, 2, 2, 2)), theta, [2, 3], [0, 2])
        # -> (o_i, o_j, q_i', q_j', rest...)
        theta = np.moveaxis(theta, 1, 2)
    if d_op is not None:
        # W h: contract q' with the row index of h
        rest = theta.ndim - 4
        theta = contract(theta, reshape(d_op, (2, 2, 2, 2)), [1, 3], [0, 1])
        # -> (q_i, q_j, rest..., c_i, c_j)
        theta = np.moveaxis(theta, [2 + rest, 3 + rest], [1, 3])
    return theta


def _split(theta: Tensor, threshold: float, max_bond: int | None) -> tuple[Tensor, Tensor, float]:
    """Split ``(q_i, q_i', q_j, q_j', a_l, right...)`` into two site tensors.

    The left factor is ``U``; ``S`` goes to the right. Returns the left site
    ``(q, q', a_l, chi)``, the right block ``(chi, q_j, q_j', right...)`` and
    the discarded weight.
    """
    a_l = theta.shape[4]
    right_shape = theta.shape[5:]
    # rows (a_l, q_i, q_i'), cols (q_j, q_j', right...)
    t = permute(theta, [4, 0, 1, 2, 3] + list(range(5, theta.ndim)))
    rows = a_l * 4
    mat = reshape(t, (rows, t.size // rows))
    res = svd_truncated(mat, threshold, max_bond)
    chi = res.bond
    left = permute(reshape(res.u, (a_l, 2, 2, chi)), (1, 2, 0, 3))
    right = reshape(res.s[:, None] * res.vh, (chi, 2, 2) + tuple(right_shape))
    return left, right, res.discarded_weight


def apply_zone(
    w: MPO,
    zone_g: Sequence[Gate],
    zone_gdag: Sequence[Gate],
    i: int,
    threshold: float,
    max_bond: int | None = None,
) -> MPO:
    """Apply two temporal zones on sites ``(i, i+1)`` followed by one truncated split.

    ``zone_g`` gates fold onto the ``q`` side in program order; ``zone_gdag``
    holds already-adjointed gates that fold onto the ``q'`` side in order.
    """
    if not 0 <= i < w.n - 1:
        raise IndexError(f"zone ({i}, {i + 1}) outside a {w.n}-site MPO")
    g_op, d_op = zone_operators(zone_g, zone_gdag, i)

    # (q_i, q_i', a_l, b) x (q_j, q_j', b, a_r) -> (q_i, q_i', a_l, q_j, q_j', a_r)
    theta = contract(w.sites[i], w.sites[i + 1], [3], [2])
    theta = permute(theta, (0, 1, 3, 4, 2, 5))
    theta = _fold_pair(theta, g_op, d_op)
    left, right, dw = _split(theta, threshold, max_bond)
    w.sites[i] = left
    w.sites[i + 1] = permute(right, (1, 2, 0, 3))
    w.discarded_weight += dw
    w._note_bonds()
    return w


def _identity_span(length: int) -> list[Tensor]:
    site = np.eye(2, dtype=complex).reshape(2, 2, 1, 1)
    return [site] * length


def apply_long_range(
    w: MPO,
    gm: GateMPO,
    side: Side,
    threshold: float,
    zone_feeder: ZoneFeeder | None = None,
    max_bond: int | None = None,
    opposite: GateMPO | None = None,
    recompress: bool = True,
) -> MPO:
    """Zip an exact gate MPO into ``w`` with a left-to-right subsweep over its span.

    At every pair ``(j, j+1)`` the two sites of ``w`` and the gate's site
    tensors are merged into one block that keeps the gate bond open on its
    right. ``zone_feeder(j, j+1)``, when given, returns extra
    ``(zone_g, zone_gdag)`` gates that are folded in before the split.

    ``opposite`` is an optional gate MPO on the same span for the other side;
    both are zipped in the same subsweep. With ``recompress`` a right-to-left
    pass of truncated splits over the span follows, which removes bond
    dimension left behind by gates that cancelled inside the span.
    """
    lo, hi = gm.span
    if not (0 <= lo < hi < w.n) or len(gm.sites) != hi - lo + 1:
        raise ValueError(f"gate MPO span {gm.span} does not fit a {w.n}-site MPO")
    if opposite is not None and opposite.span != gm.span:
        raise ValueError(f"span mismatch: {gm.span} vs {opposite.span}")
    other = opposite.sites if opposite is not None else _identity_span(hi - lo + 1)
    gsites, dsites = (gm.sites, other) if side is Side.G else (other, gm.sites)

    # (q, q', a_l, a_r, b_g, b_d)
    block = contract(gsites[0][:, :, 0, :], w.sites[lo], [1], [0])  # (o, bg, q', a_l, a_r)
    block = contract(block, dsites[0][:, :, 0, :], [2], [0])  # (o, bg, a_l, a_r, c, bd)
    block = permute(block, (0, 4, 2, 3, 1, 5))
    for j in range(lo, hi):
        k = j + 1 - lo
        # (q_i, q_i', a_l, bg, bd, q_j, q_j', a_r)
        theta = contract(block, w.sites[j + 1], [3], [2])
        # (o, bg', q_i, q_i', a_l, bd, q_j', a_r)
        theta = contract(gsites[k], theta, [1, 2], [5, 3])
        # (o, bg', q_i, q_i', a_l, a_r, c, bd')
        theta = contract(theta, dsites[k], [6, 5], [0, 2])
        # (q_i, q_i', q_j, q_j', a_l, a_r, bg', bd')
        theta = permute(theta, (2, 3, 0, 6, 4, 5, 1, 7))
        if zone_feeder is not None:
            zg, zd = zone_feeder(j, j + 1)
            if zg or zd:
                theta = _fold_pair(theta, *zone_operators(zg, zd, j))
        left, right, dw = _split(theta, threshold, max_bond)
        w.discarded_weight += dw
        w.sites[j] = left
        # (chi, q_j, q_j', a_r, bg', bd') -> (q, q', chi, a_r, bg', bd')
        block = permute(right, (1, 2, 0, 3, 4, 5))
    # both gates end in a unit boundary bond
    w.sites[hi] = np.ascontiguousarray(block[..., 0, 0])
    w._note_bonds()
    if recompress:
        recompress_span(w, lo, hi, threshold, max_bond)
    return w


def recompress_span(w: MPO, lo: int, hi: int, threshold: float, max_bond: int | None = None) -> MPO:
    """Right-to-left truncated splits over sites ``lo..hi``; ``S`` is absorbed leftwards."""
    for j in range(hi - 1, lo - 1, -1):
        theta = contract(w.sites[j], w.sites[j + 1], [3], [2])  # (q_i, q_i', a_l, q_j, q_j', a_r)
        a_l, a_r = theta.shape[2], theta.shape[5]
        mat = reshape(permute(theta, (2, 0, 1, 3, 4, 5)), (a_l * 4, 4 * a_r))
        res = svd_truncated(mat, threshold, max_bond)
        chi = res.bond
        w.sites[j] = permute(reshape(res.u * res.s[None, :], (a_l, 2, 2, chi)), (1, 2, 0, 3))
        w.sites[j + 1] = permute(reshape(res.vh, (chi, 2, 2, a_r)), (1, 2, 0, 3))
        w.discarded_weight += res.discarded_weight
    return w


def trace(w: MPO) -> complex:
    """``Tr[W]`` by a left-to-right product of traced transfer matrices."""
    env = np.ones((1,), dtype=complex)
    for t in w.sites:
        env = env @ np.einsum("qqab->ab", t)
    return complex(env[0])


def _grow_env(env: Tensor, t: Tensor, bra: Tensor | None = None) -> Tensor:
    """Advance a ``(chi, chi)`` norm environment across one site pair ``t``, ``bra``."""
    bra = t if bra is None else bra
    x = np.tensordot(env, t, axes=([0], [2]))  # (c, p, q, b)
    return np.tensordot(x, bra.conj(), axes=([0, 1, 2], [2, 0, 1]))  # (b, d)


def local_identity_distance(w: MPO, site: int) -> float:
    """How far the chain is from acting trivially on qubit ``site``.

    Writing ``W = sum_P P (x) M_P`` over the normalized Pauli basis of the
    qubit, the distance is the fraction of Hilbert-Schmidt weight carried by
    the non-identity components::

        d = 1 - ||Tr_site W||_F^2 / (2 ||W||_F^2)

    ``d`` lies in ``[0, 1]`` and is 0 exactly when ``W = I (x) M``. Unitaries
    applied later on other qubits leave ``d`` unchanged, so once no gate
    touches ``site`` any more, ``d > 0`` already rules out ``W ~ I``.
    """
    if not 0 <= site < w.n:
        raise IndexError(f"site {site} out of range for a {w.n}-site MPO")
    env = np.ones((1, 1), dtype=complex)
    for t in w.sites[:site]:
        env = _grow_env(env, t)
    t = w.sites[site]
    full = _grow_env(env, t)
    tr = np.einsum("qqab->ab", t)[None, None]
    reduced = _grow_env(env, tr)
    for t in w.sites[site + 1 :]:
        full = _grow_env(full, t)
        reduced = _grow_env(reduced, t)
    full, reduced = full[0, 0], reduced[0, 0]
    norm2 = float(full.real)
    if norm2 <= 0.0:
        return 1.0
    frac = float(reduced.real) / (2.0 * norm2)
    return float(min(1.0, max(0.0, 1.0 - frac)))
