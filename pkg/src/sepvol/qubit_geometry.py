"""Bloch-ball geometry and the balancing map.

2x2 Hermitian matrices are identified with R^4 through the orthonormal basis
``{I/sqrt2, sx/sqrt2, sy/sqrt2, sz/sqrt2}``; a "Pauli vector" is the length-4
coordinate array in that basis.  The balancing map ``A`` is diagonal there:
it shrinks the identity coordinate by ``1/sqrt2`` and stretches the three
traceless coordinates by ``sqrt(3/2)``, which sends every pure state onto the
unit Hilbert-Schmidt sphere.

Matrices are plain :class:`numpy.ndarray` objects.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .numerics import DomainError, PrecisionContext, resolve

SQRT2 = math.sqrt(2.0)

PAULI = (
    np.eye(2, dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
BASIS = tuple(p / SQRT2 for p in PAULI)

A_DIAG = np.array([1 / SQRT2, math.sqrt(1.5), math.sqrt(1.5), math.sqrt(1.5)])

# Bloch vectors of the reference regular tetrahedron.
TETRAHEDRON_BLOCH = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / math.sqrt(3.0)


class DimensionError(ValueError):
    """Matrix of the wrong shape for the requested operation."""


def check_hermitian(m, dim: int | None = None, atol: float = 1e-12) -> np.ndarray:
    """Return ``m`` as a complex array after checking shape and hermiticity."""
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise DimensionError(f"expected a {dim}x{dim} matrix, got {m.shape[0]}x{m.shape[1]}")
    scale = max(1.0, float(np.abs(m).max()))
    if not np.allclose(m, m.conj().T, atol=atol * scale, rtol=0):
        raise ValueError("matrix is not Hermitian")
    return m


@dataclass(frozen=True)
class SystemParams:
    """Sizes attached to an N-qubit system."""

    N: int
    d: int
    n: int
    alpha: float

    @classmethod
    def for_qubits(cls, N: int) -> "SystemParams":
        if int(N) != N or N < 1:
            raise DomainError(f"qubit count must be a positive integer, got {N!r}")
        d = 2**N
        return cls(N=N, d=d, n=d * d - 1, alpha=ALPHA)


def pauli_decompose(m) -> np.ndarray:
    """Coordinates of a 2x2 Hermitian matrix in the orthonormal Pauli basis."""
    m = check_hermitian(m, dim=2)
    return np.array([np.trace(b @ m).real for b in BASIS])


def pauli_compose(coords) -> np.ndarray:
    c = np.asarray(coords, dtype=float)
    if c.shape != (4,):
        raise DimensionError(f"expected 4 Pauli coordinates, got shape {c.shape}")
    return sum(ci * b for ci, b in zip(c, BASIS))


def apply_A(coords) -> np.ndarray:
    """Balancing map in Pauli coordinates."""
    return A_DIAG * np.asarray(coords, dtype=float)


def apply_A_inv(coords) -> np.ndarray:
    return np.asarray(coords, dtype=float) / A_DIAG


def apply_A_matrix(m) -> np.ndarray:
    """Balancing map acting on a 2x2 Hermitian matrix."""
    return pauli_compose(apply_A(pauli_decompose(m)))


def log_det_A(ctx: PrecisionContext | None = None):
    """ln det A = ln sqrt(27/16)."""
    mp = resolve(ctx).mp
    return mp.log(mp.mpf(27) / 16) / 2


def log_det_A_tensor(N: int, ctx: PrecisionContext | None = None):
    """ln det of the N-fold tensor power of A.

    ``det(A^{(x)N}) = (det A)^{N 4^{N-1}}`` since every factor acts on a
    4-dimensional space and is tensored with ``4^{N-1}`` identity directions.
    """
    if int(N) != N or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    ctx = resolve(ctx)
    return N * 4 ** (N - 1) * log_det_A(ctx)


def modified_inner_product(u, v) -> float:
    """``(3 tr(uv) - tr u tr v) / 2``, equal to ``tr((Au)(Av))``."""
    u = check_hermitian(u)
    v = check_hermitian(v)
    if u.shape != (2, 2) or v.shape != (2, 2):
        raise DimensionError(f"modified inner product is defined on 2x2 matrices, got {u.shape} and {v.shape}")
    return float(((3 * np.trace(u @ v) - np.trace(u) * np.trace(v)) / 2).real)


def hs_inner(u, v) -> float:
    return float(np.trace(np.asarray(u) @ np.asarray(v)).real)


def bloch_state(r) -> np.ndarray:
    """Density matrix ``(I + r.sigma)/2`` for a Bloch vector ``r``."""
    r = np.asarray(r, dtype=float)
    return (PAULI[0] + r[0] * PAULI[1] + r[1] * PAULI[2] + r[2] * PAULI[3]) / 2


def tetrahedron_basis() -> list[np.ndarray]:
    """Images under A of the four pure states on the reference tetrahedron.

    Their Hilbert-Schmidt Gram matrix is the 4x4 identity, so the four images
    span the 2x2 Hermitian matrices orthonormally.
    """
    return [apply_A_matrix(bloch_state(r)) for r in TETRAHEDRON_BLOCH]


def tetrahedron_vectors() -> np.ndarray:
    """The tetrahedron basis as rows of Pauli coordinates (a 4x4 orthogonal matrix)."""
    return np.array([pauli_decompose(u) for u in tetrahedron_basis()])


def tensor_power_vectors(vectors: np.ndarray, N: int) -> np.ndarray:
    """All N-fold Kronecker products of the given coordinate rows.

    Only meant for small N; the result has ``len(vectors)**N`` rows.
    """
    out = np.asarray(vectors, dtype=float)
    base = out
    for _ in range(N - 1):
        out = np.einsum("ia,jb->ijab", out, base).reshape(out.shape[0] * base.shape[0], -1)
    return out


def alpha_exponent(D: int, ctx: PrecisionContext | None = None):
    """Exponent gained by balancing a single qudit factor C^D.

    ``A_D`` scales the identity direction by ``1/sqrt(D)`` and the ``D^2 - 1``
    traceless directions by ``sqrt((D+1)/D)``, so that pure states land on
    the unit sphere.  Returns ``ln det A_D / (D^2 ln D)``.
    """
    if int(D) != D or D < 2:
        raise DomainError(f"local dimension must be an integer >= 2, got {D!r}")
    mp = resolve(ctx).mp
    D = mp.mpf(D)
    log_det = -mp.log(D) / 2 + (D * D - 1) / 2 * mp.log((D + 1) / D)
    return log_det / (D * D * mp.log(D))


ALPHA = float(alpha_exponent(2))
