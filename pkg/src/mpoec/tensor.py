"""Dense complex tensor kernels.

Tensors are plain ``numpy`` arrays of dtype ``complex128`` stored in C
(row-major) order: the last index varies fastest. Every reshape grouping used
elsewhere in the package is defined relative to that linearization, so
``reshape(t, (4, 4))`` on a ``(2, 2, 2, 2)`` tensor groups ``(i, j)`` into the
row index ``2 * i + j``.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod
from typing import Sequence

import numpy as np
import scipy.linalg
from numpy.typing import NDArray

Tensor = NDArray[np.complex128]


class TensorError(ValueError):
    """Base class for shape and index errors raised by the tensor kernels."""


class ContractError(TensorError):
    pass


class ReshapeError(TensorError):
    pass


class PermuteError(TensorError):
    pass


class NumericError(ArithmeticError):
    """Raised when a decomposition meets non-finite data or fails to converge."""


@dataclass(frozen=True)
class SvdResult:
    """Truncated singular value decomposition ``m ~= u @ diag(s) @ vh``.

    Attributes:
        u: ``(a, chi)`` matrix with orthonormal columns.
        s: Retained singular values, real, descending, length ``chi >= 1``.
        vh: ``(chi, b)`` matrix with orthonormal rows.
        discarded_weight: Sum of squares of the dropped singular values.
    """

    u: Tensor
    s: NDArray[np.float64]
    vh: Tensor
    discarded_weight: float

    @property
    def bond(self) -> int:
        return int(self.s.shape[0])


def as_tensor(data, dims: Sequence[int] | None = None) -> Tensor:
    """Coerce ``data`` to a complex128 C-ordered tensor, optionally reshaping to ``dims``."""
    t = np.ascontiguousarray(data, dtype=np.complex128)
    if dims is not None:
        t = reshape(t, dims)
    if any(d < 1 for d in t.shape):
        raise TensorError(f"all extents must be >= 1, got {t.shape}")
    return t


def contract(a: Tensor, b: Tensor, axes_a: Sequence[int], axes_b: Sequence[int]) -> Tensor:
    """Sum over paired axes of ``a`` and ``b``.

    The result carries the free axes of ``a`` in order, followed by the free
    axes of ``b`` in order.

    Raises:
        ContractError: If the axis lists differ in length, repeat an axis,
            fall out of range, or pair axes of different extent.
    """
    axes_a = list(axes_a)
    axes_b = list(axes_b)
    if len(axes_a) != len(axes_b):
        raise ContractError(f"axis lists differ in length: {axes_a} vs {axes_b}")
    for name, axes, t in (("a", axes_a, a), ("b", axes_b, b)):
        if len(set(axes)) != len(axes):
            raise ContractError(f"repeated axis in axes_{name}: {axes}")
        for ax in axes:
            if not 0 <= ax < t.ndim:
                raise ContractError(f"axis {ax} out of range for rank-{t.ndim} tensor {name}")
    for x, y in zip(axes_a, axes_b):
        if a.shape[x] != b.shape[y]:
            raise ContractError(
                f"extent mismatch on axis pair ({x}, {y}): {a.shape[x]} != {b.shape[y]}"
            )
    return np.tensordot(a, b, axes=(axes_a, axes_b))


def reshape(a: Tensor, new_dims: Sequence[int]) -> Tensor:
    """Reinterpret the dimension structure of ``a`` without moving data."""
    new_dims = tuple(int(d) for d in new_dims)
    if prod(new_dims) != a.size or any(d < 1 for d in new_dims):
        raise ReshapeError(f"cannot reshape {a.shape} ({a.size} entries) into {new_dims}")
    return np.reshape(a, new_dims)


def permute(a: Tensor, perm: Sequence[int]) -> Tensor:
    """Reorder the axes of ``a``: output axis ``k`` is input axis ``perm[k]``."""
    perm = tuple(int(p) for p in perm)
    if sorted(perm) != list(range(a.ndim)):
        raise PermuteError(f"{perm} is not a permutation of 0..{a.ndim - 1}")
    return np.ascontiguousarray(np.transpose(a, perm))


def _raw_svd(m: Tensor):
    try:
        return np.linalg.svd(m, full_matrices=False)
    except np.linalg.LinAlgError:
        pass
    # gesdd occasionally fails to converge where the slower QR-iteration driver succeeds
    try:
        return scipy.linalg.svd(m, full_matrices=False, lapack_driver="gesvd")
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"SVD did not converge for a {m.shape} matrix") from exc


def svd_truncated(m: Tensor, threshold: float, max_bond: int | None = None) -> SvdResult:
    """Singular value decomposition with a relative cutoff.

    Every singular value ``s_k < threshold * s_1`` is dropped, where ``s_1`` is
    the largest one. At least one value is always kept. ``max_bond`` further
    caps the number of retained values.

    Args:
        m: Rank-2 tensor.
        threshold: Relative cutoff in ``[0, 1)``.
        max_bond: Optional hard cap on the retained bond dimension.

    Returns:
        The truncated factors and the discarded weight.

    Raises:
        NumericError: On non-finite input or SVD failure.
    """
    if m.ndim != 2:
        raise TensorError(f"svd_truncated needs a rank-2 tensor, got rank {m.ndim}")
    if not 0.0 <= threshold < 1.0:
        raise ValueError(f"threshold must lie in [0, 1), got {threshold}")
    if not np.all(np.isfinite(m)):
        raise NumericError("non-finite entries in SVD input")

    u, s, vh = _raw_svd(m)
    keep = int(np.count_nonzero(s >= threshold * s[0])) if s[0] > 0 else 1
    keep = max(keep, 1)
    if max_bond is not None:
        keep = max(1, min(keep, max_bond))
    discarded = float(np.sum(s[keep:] ** 2))
    return SvdResult(
        u=np.ascontiguousarray(u[:, :keep]),
        s=np.ascontiguousarray(s[:keep]),
        vh=np.ascontiguousarray(vh[:keep, :]),
        discarded_weight=discarded,
    )
