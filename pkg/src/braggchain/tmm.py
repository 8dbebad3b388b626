"""2x2 transfer-matrix algebra for a single guided mode.

A :class:`TransferMatrix` maps the (backward, forward) field amplitudes on the
right of an element to those on its left::

    (E_L_back, E_L_forw)^T = M @ (E_R_back, E_R_forw)^T

The probe enters from the left, so index 0 of any sequence passed to
:func:`compose` is the element nearest the probe source.

Matrix entries may be complex scalars or numpy arrays of a common broadcast
shape; in the latter case a ``TransferMatrix`` is a batch of matrices (one per
detuning, say) and every operation acts elementwise over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

T_FLOOR = 1e-12
M22_FLOOR = 1e-12


class DegenerateAmplitudeError(ValueError):
    """Raised when a scatterer's transmission amplitude vanishes."""


class SingularMatrixError(ValueError):
    """Raised when R and T cannot be read off a transfer matrix."""


@dataclass(frozen=True)
class ScatterAmplitudes:
    """Single-scatterer reflection ``r`` and transmission ``t`` amplitudes."""

    r: complex | np.ndarray
    t: complex | np.ndarray


@dataclass(frozen=True)
class TransferMatrix:
    m11: complex | np.ndarray
    m12: complex | np.ndarray
    m21: complex | np.ndarray
    m22: complex | np.ndarray

    @classmethod
    def identity(cls, shape=()) -> "TransferMatrix":
        one = np.ones(shape, dtype=complex)
        zero = np.zeros(shape, dtype=complex)
        return cls(one, zero, zero.copy(), one.copy())

    @classmethod
    def from_array(cls, a) -> "TransferMatrix":
        a = np.asarray(a, dtype=complex)
        return cls(a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1])

    def to_array(self) -> np.ndarray:
        """Return the matrix (or batch) as an array of shape ``(..., 2, 2)``."""
        m11, m12, m21, m22 = np.broadcast_arrays(
            *(np.asarray(x, dtype=complex) for x in (self.m11, self.m12, self.m21, self.m22))
        )
        return np.stack([np.stack([m11, m12], -1), np.stack([m21, m22], -1)], -2)

    @property
    def det(self):
        return self.m11 * self.m22 - self.m12 * self.m21

    def __matmul__(self, other: "TransferMatrix") -> "TransferMatrix":
        if not isinstance(other, TransferMatrix):
            return NotImplemented
        return TransferMatrix(*_mul(self.m11, self.m12, self.m21, self.m22,
                                    other.m11, other.m12, other.m21, other.m22))


def _mul(a11, a12, a21, a22, b11, b12, b21, b22):
    return (
        a11 * b11 + a12 * b21,
        a11 * b12 + a12 * b22,
        a21 * b11 + a22 * b21,
        a21 * b12 + a22 * b22,
    )


def product_tree(m11, m12, m21, m22):
    """Ordered product of a stack of 2x2 matrices along axis 0.

    The entries are arrays whose leading axis indexes the factors (leftmost
    first); any trailing axes are batch axes.  Neighbouring factors are
    multiplied pairwise, level by level, which keeps every numpy call
    vectorised over the whole stack.  The order of the factors is preserved,
    so by associativity the result equals the sequential left-to-right product.
    """
    m = [np.asarray(x, dtype=complex) for x in (m11, m12, m21, m22)]
    n = m[0].shape[0]
    if n == 0:
        raise ValueError("cannot compose an empty sequence of matrices")
    while n > 1:
        half = n // 2
        even = [x[0:2 * half:2] for x in m]
        odd = [x[1:2 * half:2] for x in m]
        prod = _mul(*even, *odd)
        if n % 2:
            prod = tuple(np.concatenate([p, x[-1:]]) for p, x in zip(prod, m))
        m = list(prod)
        n = m[0].shape[0]
    return tuple(x[0] for x in m)


def atom_matrix(a: ScatterAmplitudes, t_floor: float = T_FLOOR) -> TransferMatrix:
    """Transfer matrix ``(1/t) [[t^2 - r^2, r], [-r, 1]]`` of one scatterer.

    Raises
    ------
    DegenerateAmplitudeError
        If ``|t| < t_floor`` anywhere (a lossless scatterer exactly on
        resonance reflects everything and has no finite transfer matrix).
    """
    r = np.asarray(a.r, dtype=complex)
    t = np.asarray(a.t, dtype=complex)
    if np.any(np.abs(t) < t_floor):
        raise DegenerateAmplitudeError(
            f"transmission amplitude below floor {t_floor:g}; "
            "unphysical lossless resonant scatterer"
        )
    inv_t = 1.0 / t
    return TransferMatrix((t * t - r * r) * inv_t, r * inv_t, -r * inv_t, inv_t)


def propagation_matrix(phase) -> TransferMatrix:
    """Free propagation over an optical phase ``k*d`` (radians)."""
    phase = np.asarray(phase, dtype=float)
    if not np.all(np.isfinite(phase)):
        raise ValueError("propagation phase must be finite")
    p = np.exp(1j * phase)
    zero = np.zeros_like(p)
    return TransferMatrix(p, zero, zero.copy(), np.conj(p))


def compose(matrices: Sequence[TransferMatrix]) -> TransferMatrix:
    """Left-to-right product ``matrices[0] @ matrices[1] @ ...``."""
    matrices = list(matrices)
    if not matrices:
        raise ValueError("cannot compose an empty sequence of matrices")
    if len(matrices) == 1:
        return matrices[0]
    fields = []
    for name in ("m11", "m12", "m21", "m22"):
        fields.append(np.asarray([getattr(m, name) for m in matrices], dtype=complex))
    # broadcast all entries to one batch shape before stacking
    shape = np.broadcast_shapes(*(f.shape for f in fields))
    fields = [np.broadcast_to(f, shape) for f in fields]
    return TransferMatrix(*product_tree(*fields))


def matrix_power(m: TransferMatrix, n: int) -> TransferMatrix:
    """``m`` raised to a non-negative integer power by repeated squaring."""
    if n < 0:
        raise ValueError("negative powers are not supported")
    shape = np.broadcast_shapes(*(np.shape(x) for x in (m.m11, m.m12, m.m21, m.m22)))
    result = TransferMatrix.identity(shape)
    base = m
    while n:
        if n & 1:
            result = result @ base
        base = base @ base
        n >>= 1
    return result


def chain_observables(m: TransferMatrix, floor: float = M22_FLOOR):
    """Reflectance and transmittance ``(R, T)`` of a composed chain.

    ``T = |1/m22|^2`` and ``R = |m12/m22|^2`` for a probe incident from the
    left with nothing incident from the right.
    """
    m22 = np.asarray(m.m22, dtype=complex)
    if np.any(np.abs(m22) < floor):
        raise SingularMatrixError(f"|m22| below floor {floor:g}")
    T = 1.0 / np.abs(m22) ** 2
    R = np.abs(m.m12 / m22) ** 2
    return R, T


def optical_depth(T):
    """Optical depth ``-ln(T)``."""
    T = np.asarray(T, dtype=float)
    if np.any(T <= 0):
        raise ValueError("optical depth is undefined for T <= 0")
    od = -np.log(T)
    return od.item() if od.ndim == 0 else od
