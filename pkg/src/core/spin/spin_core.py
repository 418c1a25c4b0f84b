"""
Exact SU(2) arithmetic for a single spin-1/2.

Operators are explicit 2x2 complex matrices. A Unitary2 may also carry a
stack of matrices with leading ensemble axes, shape (..., 2, 2); every
operation in this module broadcasts over those axes, which is how the
ensemble engine propagates thousands of spins at once.

Time ordering is fixed globally: compose() takes operators in the order
they act and returns the product with the first operator as the rightmost
factor.
"""

from dataclasses import dataclass
from typing import Literal, Sequence, Tuple, Union

import numpy as np

from ..errors import ValidationError

Axis = Literal["x", "y", "z"]

IDENTITY = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

PAULI = {"x": SIGMA_X, "y": SIGMA_Y, "z": SIGMA_Z}
AXIS_VECTORS = {
    "x": np.array([1.0, 0.0, 0.0]),
    "y": np.array([0.0, 1.0, 0.0]),
    "z": np.array([0.0, 0.0, 1.0]),
}

# |axis| must be 1 within this before a rotation is built
AXIS_NORM_TOLERANCE = 1e-9
STATE_NORM_TOLERANCE = 1e-12

ArrayLike = Union[float, complex, np.ndarray]


def _normalize_axis_name(axis: str) -> str:
    name = str(axis).lower()
    if name not in PAULI:
        raise ValidationError(f"unknown spin axis {axis!r}, expected one of x, y, z")
    return name


def axis_angle_matrix(nx: ArrayLike, ny: ArrayLike, nz: ArrayLike, angle: ArrayLike) -> np.ndarray:
    """Closed form cos(φ/2)·1 − i sin(φ/2)(n·σ), broadcast over array arguments.

    No validation is done here; callers are responsible for |n| = 1.
    """
    nx, ny, nz, angle = np.broadcast_arrays(
        np.asarray(nx, dtype=float),
        np.asarray(ny, dtype=float),
        np.asarray(nz, dtype=float),
        np.asarray(angle, dtype=float),
    )
    c = np.cos(angle / 2)
    s = np.sin(angle / 2)

    m = np.empty(c.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = c - 1j * s * nz
    m[..., 0, 1] = -1j * s * (nx - 1j * ny)
    m[..., 1, 0] = -1j * s * (nx + 1j * ny)
    m[..., 1, 1] = c + 1j * s * nz
    return m


def phase_aligned_distance(u: np.ndarray, v: np.ndarray) -> float:
    """Max elementwise |u − e^{iφ}v| with φ aligning the largest entry of v.

    Works on single matrices and on stacks; the phase is chosen per matrix.
    """
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    u, v = np.broadcast_arrays(u, v)

    flat_u = u.reshape(-1, 4)
    flat_v = v.reshape(-1, 4)
    rows = np.arange(flat_v.shape[0])
    pivot = np.argmax(np.abs(flat_v), axis=1)

    pu = flat_u[rows, pivot]
    pv = flat_v[rows, pivot]
    phase = np.ones_like(pv)
    usable = (np.abs(pu) > 0) & (np.abs(pv) > 0)
    phase[usable] = (pu[usable] / np.abs(pu[usable])) / (pv[usable] / np.abs(pv[usable]))

    diff = np.abs(flat_u - phase[:, None] * flat_v)
    return float(np.max(diff)) if diff.size else 0.0


@dataclass(frozen=True)
class Unitary2:
    """Evolution operator of one spin, or a stack of them.

    Attributes:
        matrix: complex array of shape (..., 2, 2)
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim < 2 or m.shape[-2:] != (2, 2):
            raise ValidationError(f"expected a (..., 2, 2) matrix, got shape {m.shape}")
        object.__setattr__(self, "matrix", m)

    @classmethod
    def identity(cls, batch_shape: Tuple[int, ...] = ()) -> "Unitary2":
        return cls(np.broadcast_to(IDENTITY, tuple(batch_shape) + (2, 2)).copy())

    @classmethod
    def from_pauli(cls, c0: ArrayLike, cx: ArrayLike, cy: ArrayLike, cz: ArrayLike) -> "Unitary2":
        """Build c0·1 + cx·σx + cy·σy + cz·σz (no unitarity check)."""
        c0, cx, cy, cz = np.broadcast_arrays(
            *(np.asarray(c, dtype=complex) for c in (c0, cx, cy, cz))
        )
        m = (
            c0[..., None, None] * IDENTITY
            + cx[..., None, None] * SIGMA_X
            + cy[..., None, None] * SIGMA_Y
            + cz[..., None, None] * SIGMA_Z
        )
        return cls(m)

    @property
    def batch_shape(self) -> Tuple[int, ...]:
        return self.matrix.shape[:-2]

    def __matmul__(self, other: "Unitary2") -> "Unitary2":
        return Unitary2(self.matrix @ other.matrix)

    def __mul__(self, scalar: complex) -> "Unitary2":
        return Unitary2(self.matrix * scalar)

    __rmul__ = __mul__

    def dagger(self) -> "Unitary2":
        return Unitary2(np.conj(np.swapaxes(self.matrix, -1, -2)))

    def det(self) -> np.ndarray:
        m = self.matrix
        return m[..., 0, 0] * m[..., 1, 1] - m[..., 0, 1] * m[..., 1, 0]

    def unitarity_defect(self) -> float:
        """Max elementwise |U†U − 1| over the whole stack."""
        product = self.dagger().matrix @ self.matrix
        return float(np.max(np.abs(product - IDENTITY)))

    def is_unitary(self, tol: float = 1e-12) -> bool:
        det_error = float(np.max(np.abs(np.abs(self.det()) - 1.0)))
        return self.unitarity_defect() <= tol and det_error <= tol

    def pauli_coefficients(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Coefficients (c0, cx, cy, cz) with U = c0·1 + Σ c_k σ_k."""
        m = self.matrix
        c0 = (m[..., 0, 0] + m[..., 1, 1]) / 2
        cx = (m[..., 0, 1] + m[..., 1, 0]) / 2
        cy = 1j * (m[..., 0, 1] - m[..., 1, 0]) / 2
        cz = (m[..., 0, 0] - m[..., 1, 1]) / 2
        return c0, cx, cy, cz

    def distance_up_to_phase(self, other: Union["Unitary2", np.ndarray]) -> float:
        other_matrix = other.matrix if isinstance(other, Unitary2) else other
        return phase_aligned_distance(self.matrix, other_matrix)

    def equals_up_to_phase(self, other: Union["Unitary2", np.ndarray], tol: float = 1e-12) -> bool:
        return self.distance_up_to_phase(other) <= tol


@dataclass(frozen=True)
class BlochState:
    """Pseudo-pure spin state given by its unit Bloch vector."""

    vector: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.vector, dtype=float)
        if v.shape != (3,):
            raise ValidationError(f"Bloch vector must have 3 components, got shape {v.shape}")
        norm = float(np.linalg.norm(v))
        if abs(norm - 1.0) > STATE_NORM_TOLERANCE:
            raise ValidationError(f"Bloch vector must be unit length, got norm {norm!r}")
        object.__setattr__(self, "vector", v)

    @classmethod
    def along(cls, axis: Axis) -> "BlochState":
        return cls(AXIS_VECTORS[_normalize_axis_name(axis)])

    def spin_operator(self) -> np.ndarray:
        """s·σ, the traceless part of 2ρ."""
        sx, sy, sz = self.vector
        return sx * SIGMA_X + sy * SIGMA_Y + sz * SIGMA_Z

    def density_matrix(self) -> np.ndarray:
        return (IDENTITY + self.spin_operator()) / 2


def rotation(axis: Sequence[float], angle: float) -> Unitary2:
    """exp[−iφ(S·n)] with S = σ/2.

    Args:
        axis: unit 3-vector n
        angle: rotation angle φ in radians

    Returns:
        The rotation operator

    Raises:
        ValidationError: if |n| differs from 1 by more than 1e-9 or φ is not finite
    """
    n = np.asarray(axis, dtype=float)
    if n.shape[-1:] != (3,):
        raise ValidationError(f"rotation axis must have 3 components, got shape {n.shape}")

    norm = np.linalg.norm(n, axis=-1)
    if np.any(np.abs(norm - 1.0) > AXIS_NORM_TOLERANCE):
        raise ValidationError(f"rotation axis must be a unit vector, got norm {norm!r}")

    phi = np.asarray(angle, dtype=float)
    if not np.all(np.isfinite(phi)):
        raise ValidationError(f"rotation angle must be finite, got {angle!r}")

    return Unitary2(axis_angle_matrix(n[..., 0], n[..., 1], n[..., 2], phi))


def compose(ops: Sequence[Unitary2]) -> Unitary2:
    """Time-ordered product; ops[0] acts first and ends up rightmost."""
    if len(ops) == 0:
        raise ValidationError("compose() needs at least one operator")

    result = ops[0]
    for op in ops[1:]:
        result = op @ result
    return result


def bloch_vector(state: BlochState, evolution: Unitary2) -> np.ndarray:
    """Bloch vector of U ρ U†, shape (..., 3)."""
    evolved = evolution.matrix @ state.spin_operator() @ evolution.dagger().matrix
    return np.stack(
        [np.real(np.trace(evolved @ PAULI[a], axis1=-2, axis2=-1)) / 2 for a in ("x", "y", "z")],
        axis=-1,
    )


def expectation(state: BlochState, evolution: Unitary2, axis: Axis) -> Union[float, np.ndarray]:
    """Tr[U ρ U† σ_α] for ρ = (1 + s·σ)/2.

    Returns a float for a single operator and an array for a stack.
    """
    sigma = PAULI[_normalize_axis_name(axis)]
    evolved = evolution.matrix @ state.spin_operator() @ evolution.dagger().matrix
    value = np.real(np.trace(evolved @ sigma, axis1=-2, axis2=-1)) / 2
    if np.ndim(value) == 0:
        return float(value)
    return value
