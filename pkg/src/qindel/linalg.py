"""Dense complex-matrix arithmetic and Hermitian/PSD machinery.

Everything downstream (states, channels, feasibility, distances) is built on
the handful of operations here.  All functions are pure and accept anything
``np.asarray`` can turn into a complex matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import NoConvergence, NonSquare, NotHermitian, ShapeMismatch

__all__ = [
    "Tolerance",
    "kron",
    "adjoint",
    "trace",
    "frobenius_distance",
    "hermitian_part",
    "hermitian_residual",
    "hermitian_eigensystem",
    "is_psd",
    "project_psd",
    "psd_principal_minors",
]


@dataclass(frozen=True)
class Tolerance:
    """Numeric slack for equality, PSD and eigensolver decisions.

    eq_tol   Frobenius-distance threshold below which two matrices count as equal.
    psd_tol  eigenvalue floor: min eigenvalue >= -psd_tol still counts as PSD.
    eig_tol  residual threshold for the eigensolver backend.
    """

    eq_tol: float
    psd_tol: float
    eig_tol: float

    def __post_init__(self) -> None:
        if min(self.eq_tol, self.psd_tol, self.eig_tol) < 0:
            raise ValueError("tolerances must be nonnegative")

    @classmethod
    def for_dim(cls, dim: int) -> "Tolerance":
        """Default tolerances for matrices of order ``dim``.

        Constructed states carry only rounding error; comparisons get slack
        proportional to the dimension.
        """
        return cls(eq_tol=1e-9 * math.sqrt(dim), psd_tol=1e-9 * dim, eig_tol=1e-12 * dim)


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=complex)


def _tol_for(a: np.ndarray, tol: Tolerance | None) -> Tolerance:
    return tol if tol is not None else Tolerance.for_dim(a.shape[0])


def kron(a, b) -> np.ndarray:
    """Kronecker product; accepts matrices or kets (1-d vectors)."""
    return np.kron(_as_complex(a), _as_complex(b))


def adjoint(a) -> np.ndarray:
    """Conjugate transpose."""
    return _as_complex(a).conj().T


def trace(a) -> complex:
    a = _as_complex(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"trace needs a square matrix, got shape {a.shape}")
    return complex(np.trace(a))


def frobenius_distance(a, b) -> float:
    a, b = _as_complex(a), _as_complex(b)
    if a.shape != b.shape:
        raise ShapeMismatch(f"shapes {a.shape} and {b.shape} differ")
    return float(np.linalg.norm(a - b))


def hermitian_part(a) -> np.ndarray:
    """(a + a†)/2; removes rounding drift without changing Hermitian inputs."""
    a = _as_complex(a)
    return (a + a.conj().T) / 2


def hermitian_residual(a) -> float:
    """Frobenius distance between ``a`` and its adjoint."""
    a = _as_complex(a)
    return float(np.linalg.norm(a - a.conj().T))


def _require_hermitian(a: np.ndarray, tol: Tolerance) -> np.ndarray:
    res = hermitian_residual(a)
    if res > tol.eq_tol:
        raise NotHermitian(f"matrix is not Hermitian (residual {res:.3e})", res)
    return hermitian_part(a)


def hermitian_eigensystem(a, tol: Tolerance | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending, real) and eigenvector matrix of a Hermitian matrix.

    The input is checked Hermitian within ``eq_tol`` and symmetrized before the
    solve, so only rounding drift is ever discarded.  Column ``k`` of the
    returned unitary is the eigenvector for eigenvalue ``k``.
    """
    a = _as_complex(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"eigensystem needs a square matrix, got shape {a.shape}")
    tol = _tol_for(a, tol)
    h = _require_hermitian(a, tol)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return w, v


def is_psd(a, tol: Tolerance | None = None) -> bool:
    """True iff the Hermitian matrix has min eigenvalue >= -psd_tol."""
    a = _as_complex(a)
    tol = _tol_for(a, tol)
    w, _ = hermitian_eigensystem(a, tol)
    return bool(w[0] >= -tol.psd_tol)


def project_psd(a, tol: Tolerance | None = None) -> np.ndarray:
    """Frobenius-nearest PSD matrix: clip negative eigenvalues to zero.

    Fixed point for PSD inputs; does not renormalize the trace.
    """
    a = _as_complex(a)
    tol = _tol_for(a, tol)
    w, v = hermitian_eigensystem(a, tol)
    w = np.maximum(w, 0.0)
    return hermitian_part((v * w) @ v.conj().T)


def psd_principal_minors(a, tol: Tolerance | None = None, max_dim: int = 4) -> bool:
    """Exhaustive principal-minor PSD test, usable only for small matrices.

    A Hermitian matrix is PSD iff every principal minor is nonnegative.  The
    subset enumeration is exponential, so this is a cross-check oracle for
    ``is_psd`` at dim <= ``max_dim``, not a production path.
    """
    a = _as_complex(a)
    n = a.shape[0]
    if n > max_dim:
        raise ShapeMismatch(f"principal-minor test capped at dim {max_dim}, got {n}")
    tol = _tol_for(a, tol)
    _require_hermitian(a, tol)
    for k in range(1, n + 1):
        for rows in combinations(range(n), k):
            minor = np.linalg.det(a[np.ix_(rows, rows)])
            if minor.real < -tol.psd_tol:
                return False
    return True
