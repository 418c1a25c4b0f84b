import numpy as np
import pytest

from core.errors import ValidationError
from core.spin import (
    IDENTITY,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    BlochState,
    Unitary2,
    bloch_vector,
    compose,
    expectation,
    rotation,
)


def test_quarter_turn_about_z_moves_x_to_y():
    u = rotation([0, 0, 1], np.pi / 2)
    assert bloch_vector(BlochState.along("x"), u) == pytest.approx([0.0, 1.0, 0.0], abs=1e-12)


def test_full_turn_is_minus_identity():
    u = rotation([0.6, 0.0, 0.8], 2 * np.pi)
    assert np.allclose(u.matrix, -IDENTITY, atol=1e-12)


def test_pi_rotation_about_x():
    u = rotation([1, 0, 0], np.pi)
    assert np.allclose(u.matrix, -1j * SIGMA_X, atol=1e-12)


@pytest.mark.parametrize("axis", [[1.0, 0.1, 0.0], [0.0, 0.0, 0.0], [2.0, 0.0, 0.0]])
def test_rotation_rejects_non_unit_axis(axis):
    with pytest.raises(ValidationError):
        rotation(axis, 1.0)


def test_rotation_rejects_non_finite_angle():
    with pytest.raises(ValidationError):
        rotation([0, 0, 1], np.inf)


def test_compose_puts_first_operator_rightmost():
    a = rotation([1, 0, 0], 0.3)
    b = rotation([0, 1, 0], 0.7)
    assert np.allclose(compose([a, b]).matrix, (b @ a).matrix)
    assert not np.allclose(compose([a, b]).matrix, (a @ b).matrix)


def test_compose_needs_operators():
    with pytest.raises(ValidationError):
        compose([])


def test_rotations_are_unitary_with_unit_determinant():
    rng = np.random.default_rng(3)
    for _ in range(20):
        n = rng.normal(size=3)
        u = rotation(n / np.linalg.norm(n), rng.uniform(-10, 10))
        assert u.is_unitary(1e-12)
        assert abs(u.det() - 1) < 1e-12


def test_pauli_coefficients_round_trip():
    u = Unitary2.from_pauli(0.5, 0.1j, -0.2, 0.3j)
    coefficients = [complex(c) for c in u.pauli_coefficients()]
    assert coefficients == pytest.approx([0.5, 0.1j, -0.2, 0.3j])


def test_global_phase_is_ignored():
    u = rotation([0, 1, 0], 1.1)
    assert u.equals_up_to_phase(np.exp(0.7j) * u.matrix)
    assert not u.equals_up_to_phase(rotation([0, 1, 0], 1.2), tol=1e-6)


def test_stacks_broadcast():
    angles = np.linspace(0, np.pi, 5)
    u = Unitary2(np.stack([rotation([0, 0, 1], a).matrix for a in angles]))
    assert u.batch_shape == (5,)
    values = expectation(BlochState.along("x"), u, "x")
    assert values == pytest.approx(np.cos(angles), abs=1e-12)


def test_identity_preserves_every_axis():
    for axis in "xyz":
        assert expectation(BlochState.along(axis), Unitary2.identity(), axis) == pytest.approx(1.0)


def test_bloch_state_requires_unit_vector():
    with pytest.raises(ValidationError):
        BlochState(np.array([1.0, 1.0, 0.0]))


def test_spin_operator_of_y_state():
    assert np.allclose(BlochState.along("y").spin_operator(), SIGMA_Y)
    assert np.allclose(BlochState.along("z").density_matrix(), (IDENTITY + SIGMA_Z) / 2)
