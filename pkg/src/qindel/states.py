"""Density-matrix data model: validation, spectral form, basis conventions, file I/O.

Conventions (fixed once, used everywhere):
  * qudit 1 is the most significant tensor factor, so the basis ket |x_1 ... x_n>
    has flat index sum_i x_i * l^(n-i);
  * all qudit positions are 1-based;
  * the n = 0 system has the single state (1), a 1x1 matrix.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    DigitOutOfRange,
    NotHermitian,
    NotNormalized,
    NotPSD,
    ParseError,
    ShapeMismatch,
    SizeCapExceeded,
    TraceNotOne,
    ValidationError,
)
from .linalg import (
    Tolerance,
    frobenius_distance,
    hermitian_eigensystem,
    hermitian_residual,
)

__all__ = [
    "SIZE_CAP",
    "QuditShape",
    "DensityMatrix",
    "PureKet",
    "SpectralForm",
    "basis_index",
    "basis_ket",
    "pure_ket",
    "density_from_ket",
    "validate",
    "scalar_state",
    "purity",
    "spectral_decompose",
    "reconstruct",
    "state_to_json_obj",
    "state_from_json_obj",
    "save_state",
    "load_state",
]

SIZE_CAP = 256  # largest allowed l^n


def _frozen_array(values, dtype=complex) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class QuditShape:
    """``length`` qudits of ``level`` levels each; total dimension level**length."""

    level: int
    length: int

    def __post_init__(self) -> None:
        if self.level < 2:
            raise ValueError(f"qudit level must be >= 2, got {self.level}")
        if self.length < 0:
            raise ValueError(f"length must be >= 0, got {self.length}")
        if self.level ** self.length > SIZE_CAP:
            raise SizeCapExceeded(
                f"dimension {self.level}**{self.length} exceeds the cap {SIZE_CAP}"
            )

    @property
    def dim(self) -> int:
        return self.level ** self.length

    def tol(self) -> Tolerance:
        return Tolerance.for_dim(self.dim)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A state of ``shape.length`` qudits: Hermitian, trace-1, PSD matrix.

    Instances built by the channel operations preserve validity by
    construction; ``validate`` is the checking constructor for foreign data.
    """

    shape: QuditShape
    mat: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "mat", _frozen_array(self.mat))
        if self.mat.shape != (self.shape.dim, self.shape.dim):
            raise ShapeMismatch(
                f"matrix shape {self.mat.shape} does not match qudit shape "
                f"(l={self.shape.level}, n={self.shape.length}, dim={self.shape.dim})"
            )

    @property
    def level(self) -> int:
        return self.shape.level

    @property
    def length(self) -> int:
        return self.shape.length

    @property
    def dim(self) -> int:
        return self.shape.dim

    def distance(self, other: "DensityMatrix") -> float:
        return frobenius_distance(self.mat, other.mat)

    def close_to(self, other: "DensityMatrix", tol: Tolerance | None = None) -> bool:
        if self.shape != other.shape:
            return False
        tol = tol if tol is not None else self.shape.tol()
        return self.distance(other) <= tol.eq_tol


@dataclass(frozen=True, eq=False)
class PureKet:
    """Unit vector |phi> on ``shape.length`` qudits."""

    shape: QuditShape
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitudes", _frozen_array(self.amplitudes).reshape(-1))
        if self.amplitudes.shape != (self.shape.dim,):
            raise ShapeMismatch(
                f"ket length {self.amplitudes.shape[0]} does not match dim {self.shape.dim}"
            )


@dataclass(frozen=True, eq=False)
class SpectralForm:
    """Eigen-pairs (weight, ket) of a density matrix, zero weights dropped."""

    shape: QuditShape
    pairs: tuple[tuple[float, np.ndarray], ...]

    @property
    def weights(self) -> np.ndarray:
        return np.array([p for p, _ in self.pairs])

    @property
    def rank(self) -> int:
        return len(self.pairs)


def _digits(x: str | Sequence[int], shape: QuditShape) -> list[int]:
    digits = [int(c) for c in x]
    if len(digits) != shape.length:
        raise ShapeMismatch(f"expected {shape.length} digits, got {len(digits)}")
    for d in digits:
        if not 0 <= d < shape.level:
            raise DigitOutOfRange(f"digit {d} not in Z_{shape.level}")
    return digits


def basis_index(x: str | Sequence[int], shape: QuditShape) -> int:
    """Flat index of the basis ket |x_1 ... x_n>, qudit 1 most significant."""
    idx = 0
    for d in _digits(x, shape):
        idx = idx * shape.level + d
    return idx


def basis_ket(x: str | Sequence[int], shape: QuditShape) -> np.ndarray:
    """Computational basis ket |x> as a dense vector."""
    ket = np.zeros(shape.dim, dtype=complex)
    ket[basis_index(x, shape)] = 1.0
    return ket


def pure_ket(amplitudes, shape: QuditShape, tol: Tolerance | None = None) -> PureKet:
    """Checked constructor: amplitudes must be finite and unit-norm."""
    vec = np.asarray(amplitudes, dtype=complex).reshape(-1)
    tol = tol if tol is not None else shape.tol()
    if not np.all(np.isfinite(vec.view(float))):
        raise NotNormalized("ket has non-finite entries")
    residual = abs(np.linalg.norm(vec) - 1.0)
    if residual > tol.eq_tol:
        raise NotNormalized(f"ket norm differs from 1 by {residual:.3e}", residual)
    return PureKet(shape, vec)


def density_from_ket(ket: PureKet, tol: Tolerance | None = None) -> DensityMatrix:
    """Rank-1 state |phi><phi|."""
    vec = ket.amplitudes
    tol = tol if tol is not None else ket.shape.tol()
    residual = abs(np.linalg.norm(vec) - 1.0)
    if residual > tol.eq_tol:
        raise NotNormalized(f"ket norm differs from 1 by {residual:.3e}", residual)
    return DensityMatrix(ket.shape, np.outer(vec, vec.conj()))


def validate(mat, shape: QuditShape, tol: Tolerance | None = None) -> DensityMatrix:
    """Check all density-matrix invariants; raise naming the first violation."""
    m = np.asarray(mat, dtype=complex)
    tol = tol if tol is not None else shape.tol()
    if m.shape != (shape.dim, shape.dim):
        raise ShapeMismatch(f"expected a {shape.dim}x{shape.dim} matrix, got {m.shape}")
    if not np.all(np.isfinite(m.view(float))):
        raise ValidationError("matrix has non-finite entries")
    herm_res = hermitian_residual(m)
    if herm_res > tol.eq_tol:
        raise NotHermitian(f"not Hermitian (residual {herm_res:.3e})", herm_res)
    tr_res = abs(np.trace(m) - 1.0)
    if tr_res > tol.eq_tol:
        raise TraceNotOne(f"trace differs from 1 by {tr_res:.3e}", tr_res)
    w, _ = hermitian_eigensystem(m, tol)
    if w[0] < -tol.psd_tol:
        raise NotPSD(f"negative eigenvalue {w[0]:.3e}", -float(w[0]))
    return DensityMatrix(shape, m)


def scalar_state(level: int) -> DensityMatrix:
    """The unique zero-qudit state (1); the endpoint of full deletion."""
    return DensityMatrix(QuditShape(level, 0), np.array([[1.0 + 0.0j]]))


def purity(rho: DensityMatrix) -> float:
    """tr(rho^2); equals 1 iff rho is rank 1."""
    return float(np.trace(rho.mat @ rho.mat).real)


def spectral_decompose(rho: DensityMatrix, tol: Tolerance | None = None) -> SpectralForm:
    """Eigen-pairs with weights clipped at psd_tol, dropped if ~0, renormalized.

    Ordered by descending weight.  For degenerate spectra the eigenbasis is
    whatever the solver returns; downstream constructions only depend on the
    reconstructed matrix.
    """
    tol = tol if tol is not None else rho.shape.tol()
    w, v = hermitian_eigensystem(rho.mat, tol)
    if w[0] < -tol.psd_tol:
        raise NotPSD(f"negative eigenvalue {w[0]:.3e}", -float(w[0]))
    keep = [(float(w[k]), v[:, k].copy()) for k in range(len(w)) if w[k] > tol.psd_tol]
    total = sum(p for p, _ in keep)
    pairs = tuple((p / total, ket) for p, ket in sorted(keep, key=lambda t: -t[0]))
    return SpectralForm(rho.shape, pairs)


def reconstruct(form: SpectralForm) -> DensityMatrix:
    """Sum p_x |x_L><x_L| back into a DensityMatrix."""
    mat = np.zeros((form.shape.dim, form.shape.dim), dtype=complex)
    for p, ket in form.pairs:
        mat += p * np.outer(ket, ket.conj())
    return DensityMatrix(form.shape, mat)


# --- state-file format (JSON, UTF-8) ------------------------------------------


def _complex_pairs(vec: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in vec]


def _vec_from_pairs(pairs, what: str) -> np.ndarray:
    try:
        return np.array([complex(re, im) for re, im in pairs], dtype=complex)
    except (TypeError, ValueError) as exc:
        raise ParseError(f"malformed {what}: expected [re, im] pairs") from exc


def state_to_json_obj(rho: DensityMatrix) -> dict:
    return {
        "level": rho.level,
        "length": rho.length,
        "kind": "mixed",
        "matrix": [_complex_pairs(row) for row in rho.mat],
    }


def ket_to_json_obj(ket: PureKet) -> dict:
    return {
        "level": ket.shape.level,
        "length": ket.shape.length,
        "kind": "pure",
        "ket": _complex_pairs(ket.amplitudes),
    }


def state_from_json_obj(obj: dict, tol: Tolerance | None = None) -> DensityMatrix:
    """Parse a state object, validating every invariant; reports the first
    violation with its numeric residual."""
    if not isinstance(obj, dict):
        raise ParseError("state object must be a JSON object")
    try:
        shape = QuditShape(int(obj["level"]), int(obj["length"]))
        kind = obj["kind"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed level/length/kind: {exc}") from exc
    try:
        if kind == "pure":
            vec = _vec_from_pairs(obj["ket"], "ket")
            if vec.shape != (shape.dim,):
                raise ParseError(f"ket length {vec.shape[0]} != dim {shape.dim}")
            return density_from_ket(pure_ket(vec, shape, tol), tol)
        if kind == "mixed":
            rows = obj["matrix"]
            mat = np.array([_vec_from_pairs(row, "matrix row") for row in rows])
            return validate(mat, shape, tol)
        if kind == "spectral":
            mat = np.zeros((shape.dim, shape.dim), dtype=complex)
            for pair in obj["pairs"]:
                weight = float(pair["p"])
                ket = _vec_from_pairs(pair["ket"], "spectral ket")
                if ket.shape != (shape.dim,):
                    raise ParseError(f"spectral ket length {ket.shape[0]} != dim {shape.dim}")
                mat += weight * np.outer(ket, ket.conj())
            return validate(mat, shape, tol)
    except KeyError as exc:
        raise ParseError(f"missing field for kind={kind!r}: {exc}") from exc
    except ValidationError as exc:
        raise ParseError(f"invalid {kind} state: {exc} (residual {exc.residual:.3e})") from exc
    raise ParseError(f"unknown state kind {kind!r}")


def save_state(rho: DensityMatrix, path: str | Path) -> None:
    Path(path).write_text(json.dumps(state_to_json_obj(rho)), encoding="utf-8")


def load_state(path: str | Path, tol: Tolerance | None = None) -> DensityMatrix:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read state file {path}: {exc}") from exc
    return state_from_json_obj(obj, tol)
