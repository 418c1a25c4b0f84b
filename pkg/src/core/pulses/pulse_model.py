"""
Imperfect π pulses, free evolution and the systematic error distributions.

Each π pulse is an instantaneous rotation with a systematic angle error and
a tilted axis:

    U_X = exp[−i(π + ε_x)(S·n)],  n = (√(1 − n_y² − n_z²), n_y, n_z)
    U_Y = exp[−i(π + ε_y)(S·m)],  m = (m_x, √(1 − m_x² − m_z²), m_z)

Between pulses the spin precesses in the static offset field B:
U_d(τ) = exp[−iBS^zτ].

The angle error ε and the axis tilt n_z come from the inhomogeneous drive
field across the sample. Both follow

    P(ε) = (1/2ε₀)[3(1 − ε/ε₀)]^{-1/2},  ε ∈ [−2ε₀, ε₀]

which is exactly the law of ε = ε₀(1 − 3l²) for a spatial coordinate l
uniform on [−1, 1]. The same scale-free shape is used for n_z with n₀.
All parameters may be plain floats or arrays; arrays describe a whole
ensemble and broadcast together.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Sequence, Union

import numpy as np

from ..errors import ValidationError
from ..spin.spin_core import Unitary2, axis_angle_matrix

ArrayLike = Union[float, np.ndarray]


class PulseAxis(str, Enum):
    """Nominal rotation axis of a π pulse."""

    X = "X"
    Y = "Y"
    Z = "Z"  # composite: π_X and π_Y back to back


class ErrorMode(str, Enum):
    """How ε and n_z are drawn for one ensemble member."""

    INDEPENDENT = "independent"
    CORRELATED_SPATIAL = "correlated_spatial"


class PiZOrder(str, Enum):
    """Time order of the two physical pulses of a composite π_Z."""

    XY = "xy"  # π_X first
    YX = "yx"


@dataclass(frozen=True)
class PulseErrorParams:
    """Magnitudes of the systematic pulse errors.

    Attributes:
        epsilon0: rotation-angle error scale in radians (signed)
        n0: axis-tilt-towards-z scale (signed, |n0| < 1)
        in_plane_mx: in-plane tilt m_x of every π_Y pulse
        in_plane_ny: in-plane tilt n_y of every π_X pulse
    """

    epsilon0: float = 0.3
    n0: float = -0.12
    in_plane_mx: float = 0.0
    in_plane_ny: float = 0.0

    def __post_init__(self):
        for name in ("epsilon0", "n0", "in_plane_mx", "in_plane_ny"):
            value = getattr(self, name)
            if not np.isfinite(value):
                raise ValidationError(f"{name} must be finite, got {value!r}")
        # the largest tilt drawn is −2·n0
        if abs(2 * self.n0) >= 1 or abs(self.in_plane_mx) >= 1 or abs(self.in_plane_ny) >= 1:
            raise ValidationError(
                f"axis tilts must keep the rotation axis real: n0={self.n0}, "
                f"mx={self.in_plane_mx}, ny={self.in_plane_ny}"
            )

    @property
    def is_perfect(self) -> bool:
        return self.epsilon0 == 0 and self.n0 == 0 and self.in_plane_mx == 0 and self.in_plane_ny == 0

    def scaled(self, factor: float) -> "PulseErrorParams":
        """Same error shape with every magnitude multiplied by factor."""
        return replace(
            self,
            epsilon0=self.epsilon0 * factor,
            n0=self.n0 * factor,
            in_plane_mx=self.in_plane_mx * factor,
            in_plane_ny=self.in_plane_ny * factor,
        )


@dataclass(frozen=True)
class PulseErrorSample:
    """One realization of every systematic error parameter.

    Fields may be floats or broadcast-compatible arrays (one entry per
    ensemble member).
    """

    eps_x: ArrayLike = 0.0
    eps_y: ArrayLike = 0.0
    n_z: ArrayLike = 0.0
    m_z: ArrayLike = 0.0
    n_y: ArrayLike = 0.0
    m_x: ArrayLike = 0.0

    def __post_init__(self):
        if np.any(np.asarray(self.n_y) ** 2 + np.asarray(self.n_z) ** 2 >= 1):
            raise ValidationError("n_y² + n_z² must stay below 1")
        if np.any(np.asarray(self.m_x) ** 2 + np.asarray(self.m_z) ** 2 >= 1):
            raise ValidationError("m_x² + m_z² must stay below 1")

    @classmethod
    def zero(cls) -> "PulseErrorSample":
        return cls()

    @classmethod
    def correlated(cls, eps: ArrayLike, nz: ArrayLike, mx: ArrayLike = 0.0, ny: ArrayLike = 0.0) -> "PulseErrorSample":
        """Sample under the shared-error model: ε_y = ε_x and m_z = n_z."""
        return cls(eps_x=eps, eps_y=eps, n_z=nz, m_z=nz, n_y=ny, m_x=mx)

    def take(self, index) -> "PulseErrorSample":
        """Sub-ensemble selected by index (scalars are passed through)."""

        def pick(value):
            arr = np.asarray(value)
            return arr if arr.ndim == 0 else arr[index]

        return PulseErrorSample(*(pick(getattr(self, f)) for f in _SAMPLE_FIELDS))

    def scaled(self, factor: float) -> "PulseErrorSample":
        return PulseErrorSample(*(np.asarray(getattr(self, f)) * factor for f in _SAMPLE_FIELDS))


_SAMPLE_FIELDS = ("eps_x", "eps_y", "n_z", "m_z", "n_y", "m_x")


@dataclass(frozen=True)
class BathParams:
    """Static Gaussian offset field, B ~ N(0, b²).

    Attributes:
        b: standard deviation of B in rad per time unit
    """

    b: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.b) and self.b > 0):
            raise ValidationError(f"bath width b must be positive, got {self.b!r}")

    @property
    def t2_star(self) -> float:
        """Dephasing time T₂* = 1/b."""
        return 1.0 / self.b


def error_cdf(eps: ArrayLike, scale: float) -> np.ndarray:
    """F(ε) = 1 − √((1 − ε/scale)/3), the CDF of ε/scale."""
    if scale == 0:
        raise ValidationError("error CDF is undefined for scale 0")
    x = np.clip(np.asarray(eps, dtype=float) / scale, -2.0, 1.0)
    return 1.0 - np.sqrt((1.0 - x) / 3.0)


def error_inverse_cdf(p: ArrayLike, scale: float) -> Union[float, np.ndarray]:
    """scale·(1 − 3(1 − p)²); maps p ∈ [0, 1] onto the support.

    Raises:
        ValidationError: if any p lies outside [0, 1]
    """
    p_arr = np.asarray(p, dtype=float)
    if np.any((p_arr < 0) | (p_arr > 1)) or not np.all(np.isfinite(p_arr)):
        raise ValidationError(f"probability must lie in [0, 1], got {p!r}")
    value = scale * (1.0 - 3.0 * (1.0 - p_arr) ** 2)
    return float(value) if value.ndim == 0 else value


def error_from_spatial(l: ArrayLike, scale: float) -> Union[float, np.ndarray]:
    """Error at normalized sample position l ∈ [−1, 1]: scale·(1 − 3l²)."""
    value = scale * (1.0 - 3.0 * np.asarray(l, dtype=float) ** 2)
    return float(value) if np.ndim(value) == 0 else value


def draw_error_sample(
    params: PulseErrorParams,
    variates: Sequence[ArrayLike],
    mode: ErrorMode = ErrorMode.INDEPENDENT,
) -> PulseErrorSample:
    """Map two uniform variates (or quadrature coordinates) to an error sample.

    In independent mode ε_x and n_z each come from error_inverse_cdf with
    their own variate. In correlated_spatial mode only the first variate is
    used: it picks one position l = 2p − 1 that sets both errors.
    The shared-error model then fixes ε_y = ε_x, m_z = n_z and the in-plane
    tilts to their configured constants.
    """
    mode = ErrorMode(mode)
    p_eps, p_nz = variates

    if mode is ErrorMode.INDEPENDENT:
        eps = error_inverse_cdf(p_eps, params.epsilon0)
        nz = error_inverse_cdf(p_nz, params.n0)
    else:
        p = np.asarray(p_eps, dtype=float)
        if np.any((p < 0) | (p > 1)):
            raise ValidationError(f"probability must lie in [0, 1], got {p_eps!r}")
        l = 2.0 * p - 1.0
        eps = error_from_spatial(l, params.epsilon0)
        nz = error_from_spatial(l, params.n0)

    return PulseErrorSample.correlated(eps, nz, mx=params.in_plane_mx, ny=params.in_plane_ny)


def _pulse_matrix(nominal: PulseAxis, sample: PulseErrorSample) -> np.ndarray:
    if nominal is PulseAxis.X:
        ny, nz = np.asarray(sample.n_y, dtype=float), np.asarray(sample.n_z, dtype=float)
        rest = 1.0 - ny**2 - nz**2
        if np.any(rest <= 0):
            raise ValidationError("π_X axis tilt leaves no x component")
        return axis_angle_matrix(np.sqrt(rest), ny, nz, np.pi + np.asarray(sample.eps_x, dtype=float))

    mx, mz = np.asarray(sample.m_x, dtype=float), np.asarray(sample.m_z, dtype=float)
    rest = 1.0 - mx**2 - mz**2
    if np.any(rest <= 0):
        raise ValidationError("π_Y axis tilt leaves no y component")
    return axis_angle_matrix(mx, np.sqrt(rest), mz, np.pi + np.asarray(sample.eps_y, dtype=float))


def pulse_unitary(nominal: PulseAxis, sample: PulseErrorSample, pi_z_order: PiZOrder = PiZOrder.XY) -> Unitary2:
    """Operator of one imperfect π pulse about the nominal axis.

    A nominal Z pulse is expanded into its two physical pulses, both using
    the same error sample.
    """
    nominal = PulseAxis(nominal)
    if nominal is PulseAxis.Z:
        return composite_pi_z(sample, sample, pi_z_order)
    return Unitary2(_pulse_matrix(nominal, sample))


def composite_pi_z(
    sample_x: PulseErrorSample,
    sample_y: PulseErrorSample,
    order: PiZOrder = PiZOrder.XY,
) -> Unitary2:
    """π_Z realized as π_X and π_Y applied back to back with no delay."""
    ux = Unitary2(_pulse_matrix(PulseAxis.X, sample_x))
    uy = Unitary2(_pulse_matrix(PulseAxis.Y, sample_y))
    if PiZOrder(order) is PiZOrder.XY:
        return uy @ ux
    return ux @ uy


def free_evolution(B: ArrayLike, tau: float) -> Unitary2:
    """U_d(τ) = diag(e^{−iBτ/2}, e^{+iBτ/2}).

    Raises:
        ValidationError: for a negative delay
    """
    if tau < 0:
        raise ValidationError(f"delay must be non-negative, got {tau!r}")
    phase = np.exp(-0.5j * np.asarray(B, dtype=float) * tau)
    m = np.zeros(phase.shape + (2, 2), dtype=complex)
    m[..., 0, 0] = phase
    m[..., 1, 1] = np.conj(phase)
    return Unitary2(m)


def draw_bath_field(bath: BathParams, z: ArrayLike) -> Union[float, np.ndarray]:
    """B = b·z for a standard-normal variate or a Gauss–Hermite node z."""
    value = bath.b * np.asarray(z, dtype=float)
    return float(value) if value.ndim == 0 else value
