import json

import numpy as np
import pytest

from qindel.errors import (
    DigitOutOfRange,
    NotHermitian,
    NotNormalized,
    NotPSD,
    ParseError,
    ShapeMismatch,
    SizeCapExceeded,
    TraceNotOne,
)
from qindel.rand import random_density
from qindel.states import (
    DensityMatrix,
    QuditShape,
    basis_index,
    basis_ket,
    density_from_ket,
    load_state,
    pure_ket,
    purity,
    reconstruct,
    save_state,
    scalar_state,
    spectral_decompose,
    state_from_json_obj,
    state_to_json_obj,
    validate,
)


def test_qudit_shape():
    assert QuditShape(2, 3).dim == 8
    assert QuditShape(2, 0).dim == 1
    with pytest.raises(SizeCapExceeded):
        QuditShape(2, 9)
    with pytest.raises(ValueError):
        QuditShape(1, 2)


def test_basis_index_examples():
    assert basis_index("00", QuditShape(2, 2)) == 0
    assert basis_index("10", QuditShape(2, 2)) == 2
    assert basis_index("21", QuditShape(3, 2)) == 7
    with pytest.raises(DigitOutOfRange):
        basis_index("20", QuditShape(2, 2))
    with pytest.raises(ShapeMismatch):
        basis_index("0", QuditShape(2, 2))


@pytest.mark.parametrize("level,length", [(2, 8), (3, 5), (4, 4), (5, 3), (16, 2)])
def test_basis_index_is_a_bijection(level, length):
    shape = QuditShape(level, length)
    seen = set()
    digits = [0] * length

    def walk(pos):
        if pos == length:
            seen.add(basis_index(digits, shape))
            return
        for d in range(level):
            digits[pos] = d
            walk(pos + 1)

    walk(0)
    assert seen == set(range(shape.dim))


def test_density_from_ket():
    shape1 = QuditShape(2, 1)
    rho = density_from_ket(pure_ket([1, 0], shape1))
    np.testing.assert_allclose(rho.mat, np.diag([1.0, 0.0]))

    shape2 = QuditShape(2, 2)
    bell = (basis_ket("00", shape2) + basis_ket("11", shape2)) / np.sqrt(2)
    rho = density_from_ket(pure_ket(bell, shape2))
    expected = np.zeros((4, 4))
    expected[0, 0] = expected[0, 3] = expected[3, 0] = expected[3, 3] = 0.5
    np.testing.assert_allclose(rho.mat, expected, atol=1e-15)

    with pytest.raises(NotNormalized):
        pure_ket([1, 1], shape1)


def test_validate():
    shape1 = QuditShape(2, 1)
    ok = validate(np.eye(2) / 2, shape1)
    assert isinstance(ok, DensityMatrix)
    with pytest.raises(TraceNotOne):
        validate(np.eye(2), shape1)
    with pytest.raises(NotPSD):
        validate(np.diag([1.5, -0.5]), shape1)
    with pytest.raises(NotHermitian):
        validate([[0.5, 1], [0, 0.5]], shape1)
    with pytest.raises(ShapeMismatch):
        validate(np.eye(2) / 2, QuditShape(2, 2))


def test_spectral_decompose_pure():
    shape = QuditShape(2, 1)
    rho = density_from_ket(pure_ket([1, 0], shape))
    form = spectral_decompose(rho)
    assert form.rank == 1
    weight, ket = form.pairs[0]
    assert weight == pytest.approx(1.0)
    assert abs(ket[0]) == pytest.approx(1.0)


def test_spectral_decompose_diagonal_mixture():
    shape = QuditShape(2, 2)
    k00, k11 = basis_ket("00", shape), basis_ket("11", shape)
    rho = DensityMatrix(shape, 0.3 * np.outer(k00, k00) + 0.7 * np.outer(k11, k11))
    form = spectral_decompose(rho)
    assert form.rank == 2
    np.testing.assert_allclose(form.weights, [0.7, 0.3])
    assert abs(form.pairs[0][1] @ k11.conj()) == pytest.approx(1.0)
    assert abs(form.pairs[1][1] @ k00.conj()) == pytest.approx(1.0)


def test_spectral_decompose_degenerate():
    shape = QuditShape(2, 1)
    form = spectral_decompose(DensityMatrix(shape, np.eye(2, dtype=complex) / 2))
    assert form.rank == 2
    np.testing.assert_allclose(form.weights, [0.5, 0.5])
    u, v = form.pairs[0][1], form.pairs[1][1]
    assert abs(u @ v.conj()) < 1e-12  # any orthonormal pair is fine


def test_spectral_reconstruction_roundtrip(rng):
    for _ in range(20):
        shape = QuditShape(2, int(rng.integers(1, 4)))
        rho = random_density(rng, shape, int(rng.integers(1, shape.dim + 1)))
        form = spectral_decompose(rho)
        assert reconstruct(form).distance(rho) <= shape.tol().eq_tol
        # eigenkets are mutually orthonormal
        for i in range(form.rank):
            for j in range(form.rank):
                ip = form.pairs[i][1] @ form.pairs[j][1].conj()
                assert abs(ip - (1.0 if i == j else 0.0)) < 1e-10


def test_purity_detects_rank_one(rng):
    shape = QuditShape(2, 2)
    for _ in range(10):
        v = rng.standard_normal(4) + 1j * rng.standard_normal(4)
        rho = density_from_ket(pure_ket(v / np.linalg.norm(v), shape))
        validate(rho.mat, shape)  # normalized kets always produce valid states
        assert purity(rho) == pytest.approx(1.0)
    mixed = random_density(rng, shape, 3)
    assert purity(mixed) < 1.0 - 1e-6


def test_scalar_state():
    one = scalar_state(2)
    assert one.length == 0
    assert one.dim == 1
    np.testing.assert_array_equal(one.mat, [[1.0]])


def test_state_file_roundtrip(tmp_path, rng):
    shape = QuditShape(2, 2)
    rho = random_density(rng, shape, 2)
    path = tmp_path / "state.json"
    save_state(rho, path)
    again = load_state(path)
    assert again.distance(rho) <= 1e-12
    assert again.shape == shape


def test_state_file_kinds(rng):
    shape = QuditShape(2, 1)
    pure = state_from_json_obj(
        {"level": 2, "length": 1, "kind": "pure", "ket": [[1.0, 0.0], [0.0, 0.0]]}
    )
    np.testing.assert_allclose(pure.mat, np.diag([1.0, 0.0]))
    spectral = state_from_json_obj(
        {
            "level": 2,
            "length": 1,
            "kind": "spectral",
            "pairs": [
                {"p": 0.25, "ket": [[1.0, 0.0], [0.0, 0.0]]},
                {"p": 0.75, "ket": [[0.0, 0.0], [1.0, 0.0]]},
            ],
        }
    )
    np.testing.assert_allclose(spectral.mat, np.diag([0.25, 0.75]))
    assert state_to_json_obj(spectral)["kind"] == "mixed"


def test_state_file_errors(tmp_path):
    with pytest.raises(ParseError, match="residual"):
        state_from_json_obj(
            {"level": 2, "length": 1, "kind": "mixed",
             "matrix": [[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]}
        )  # trace 2
    with pytest.raises(ParseError):
        state_from_json_obj({"level": 2, "length": 1, "kind": "what"})
    with pytest.raises(ParseError):
        state_from_json_obj({"kind": "pure"})
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ParseError):
        load_state(bad)
