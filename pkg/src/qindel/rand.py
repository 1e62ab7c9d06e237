"""Seeded random states and bases for property tests and samplers."""

from __future__ import annotations

import numpy as np

from .states import DensityMatrix, QuditShape

__all__ = [
    "random_hermitian",
    "random_psd",
    "random_ket",
    "random_density",
    "random_orthonormal",
]


def _ginibre(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))


def random_hermitian(rng: np.random.Generator, dim: int) -> np.ndarray:
    g = _ginibre(rng, dim, dim)
    return (g + g.conj().T) / 2


def random_psd(rng: np.random.Generator, dim: int, rank: int | None = None) -> np.ndarray:
    """B B-dagger for a Ginibre B; rank limits the number of columns."""
    b = _ginibre(rng, dim, rank if rank is not None else dim)
    return b @ b.conj().T


def random_ket(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = _ginibre(rng, dim, 1).reshape(-1)
    return v / np.linalg.norm(v)


def random_density(rng: np.random.Generator, shape: QuditShape, rank: int | None = None) -> DensityMatrix:
    """Trace-normalized Ginibre state, optionally rank-limited."""
    m = random_psd(rng, shape.dim, rank)
    return DensityMatrix(shape, m / np.trace(m).real)


def random_orthonormal(rng: np.random.Generator, dim: int, count: int) -> list[np.ndarray]:
    """``count`` orthonormal vectors in C^dim (count <= dim)."""
    if count > dim:
        raise ValueError(f"cannot fit {count} orthonormal vectors in dimension {dim}")
    q, _ = np.linalg.qr(_ginibre(rng, dim, count))
    return [q[:, k].copy() for k in range(count)]
