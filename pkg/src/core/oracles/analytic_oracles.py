"""
Closed-form perturbative operators and saturation values.

These expansions are independent of the exact simulator and are used to
cross-check it. Each operator is returned as Pauli coefficients
U ≈ c0·1 + cx·σx + cy·σy + cz·σz, valid up to the stated order in the pulse
errors. Overall signs such as −1 or (−1)ⁿ are kept even though comparisons
with the simulator are always phase-aligned.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate

from ..errors import ValidationError
from ..spin.spin_core import IDENTITY, SIGMA_X, SIGMA_Y, SIGMA_Z, Unitary2, phase_aligned_distance

# ⟨(1 − 3u²)²⟩ for u uniform on [0, 1]
SECOND_MOMENT_FACTOR = 0.8


@dataclass(frozen=True)
class PerturbativeOperator:
    """Truncated expansion c0·1 + Σ c_k σ_k.

    Attributes:
        c0, cx, cy, cz: complex Pauli coefficients
        order: expansion order in the pulse errors
        note: where the expansion is valid
    """

    c0: complex
    cx: complex
    cy: complex
    cz: complex
    order: int
    note: str = ""

    def matrix(self) -> np.ndarray:
        return self.c0 * IDENTITY + self.cx * SIGMA_X + self.cy * SIGMA_Y + self.cz * SIGMA_Z

    def unitarity_defect(self) -> float:
        m = self.matrix()
        return float(np.max(np.abs(m.conj().T @ m - IDENTITY)))

    def deviation(self, exact: Unitary2) -> float:
        """Phase-aligned max elementwise distance to an exact operator."""
        return phase_aligned_distance(exact.matrix, self.matrix())

    def rotation_vector(self) -> np.ndarray:
        """θ in U ∝ 1 − i(θ·σ), the first-order rotation generator."""
        if self.c0 == 0:
            raise ValidationError("operator has no identity component")
        return np.real(1j * np.array([self.cx, self.cy, self.cz]) / self.c0)

    def rotation_axis(self) -> np.ndarray:
        theta = self.rotation_vector()
        norm = np.linalg.norm(theta)
        if norm == 0:
            raise ValidationError("operator is the identity to this order")
        return theta / norm


def _half_count(level: int) -> int:
    if int(level) != level or level < 1:
        raise ValidationError(f"level must be a positive integer, got {level!r}")
    return (int(level) + 1) // 2


def udd2_angles(B: float, t: float, eps: float, nz: float):
    """(θ_x, θ_z) of the second-order UDD-2 operator."""
    theta_x = eps * math.cos(B * t / 4) + 2 * nz * math.sin(B * t / 4)
    theta_z = eps * nz * math.cos(B * t / 2) + (nz**2 - eps**2 / 4) * math.sin(B * t / 2)
    return theta_x, theta_z


def udd2_operator(B: float, t: float, eps: float, nz: float) -> PerturbativeOperator:
    """UDD-2 to second order: −[1 − θ_x²/2 − iθ_xσ_x − iθ_zσ_z] (n_y = 0)."""
    theta_x, theta_z = udd2_angles(B, t, eps, nz)
    return PerturbativeOperator(
        c0=-(1 - theta_x**2 / 2),
        cx=1j * theta_x,
        cy=0j,
        cz=1j * theta_z,
        order=2,
        note="UDD-2, n_y = 0",
    )


def udd3_angles(B: float, tau1: float, tau2: float, eps: float, nz: float):
    """(θ_n, η_n) of the first-order UDD-3 operator."""
    a, d = B * tau1, B * (tau2 - tau1)
    theta = (eps / 2) * (1 + 2 * math.cos(a) + math.cos(d)) + nz * (2 * math.sin(a) + math.sin(d))
    eta = -nz * (1 - 2 * math.cos(a) + math.cos(d)) - (eps / 2) * (2 * math.sin(a) - math.sin(d))
    return theta, eta


def udd3_operator(B: float, tau1: float, tau2: float, eps: float, nz: float) -> PerturbativeOperator:
    """UDD-3 to first order: 1 − iθ_nσ_x − iη_nσ_y.

    tau1 and tau2 are the first two inter-pulse delays; the schedule is
    D(τ₁) X D(τ₂) X D(τ₂) X D(τ₁) X.
    """
    theta, eta = udd3_angles(B, tau1, tau2, eps, nz)
    return PerturbativeOperator(c0=1 + 0j, cx=-1j * theta, cy=-1j * eta, cz=0j, order=1, note="UDD-3, n_y = 0")


def udd_t0_operator(level: int, eps: float) -> PerturbativeOperator:
    """UDD-ℓ with all delays zero: (−1)ⁿ(1 − inεσ_x), ℓ = 2n or 2n − 1."""
    n = _half_count(level)
    sign = (-1) ** n
    return PerturbativeOperator(
        c0=complex(sign), cx=-1j * n * eps * sign, cy=0j, cz=0j, order=1, note="t = 0, n_z = 0"
    )


def qdd_t0_operator(level: int, eps_x: float, eps_y: float) -> PerturbativeOperator:
    """QDD(XY)-ℓ with all delays zero.

    Even ℓ = 2n: 1 − in(ε_xσ_x + ε_yσ_y). Odd ℓ = 2n − 1: (−1)ⁿ(1 − inε_xσ_x).
    """
    n = _half_count(level)
    if level % 2 == 0:
        return PerturbativeOperator(
            c0=1 + 0j, cx=-1j * n * eps_x, cy=-1j * n * eps_y, cz=0j, order=1, note="t = 0, even level"
        )
    sign = (-1) ** n
    return PerturbativeOperator(
        c0=complex(sign), cx=-1j * n * eps_x * sign, cy=0j, cz=0j, order=1, note="t = 0, odd level"
    )


def qdd3_t0_second_order(eps_x: float, eps_y: float, nz: float) -> PerturbativeOperator:
    """Fourfold (π_Y⁴)-π_X unit of QDD-3 at t = 0, to second order.

    U = (1 − 2ε_x²) − 2iε_xσ_x − 2iε_x(2ε_y + n_z)σ_z with m_z = n_z and
    m_x = n_y = 0. The σ_z sign follows from U_X = exp[−i(π + ε_x)S·n].
    """
    return PerturbativeOperator(
        c0=1 - 2 * eps_x**2,
        cx=-2j * eps_x,
        cy=0j,
        cz=-2j * eps_x * (2 * eps_y + nz),
        order=2,
        note="QDD-3, t = 0, m_x = n_y = 0",
    )


def qddzy_odd_t0_operator(level: int, mx: float, ny: float) -> PerturbativeOperator:
    """QDD(ZY)-(2n − 1) at t = 0: (−1)ⁿ[1 + 2in(m_x + n_y)σ_z].

    Raises:
        ValidationError: for an even level
    """
    if level % 2 == 0:
        raise ValidationError(f"QDD(ZY) t = 0 expansion holds for odd levels only, got {level}")
    n = _half_count(level)
    sign = (-1) ** n
    return PerturbativeOperator(
        c0=complex(sign),
        cx=0j,
        cy=0j,
        cz=2j * n * (mx + ny) * sign,
        order=1,
        note="QDD(ZY) odd level, t = 0, ε and n_z errors cancel to first order",
    )


def error_second_moment(scale: float) -> float:
    """⟨ε²⟩ = 0.8·scale²."""
    return SECOND_MOMENT_FACTOR * scale**2


def error_moment(order: int, scale: float) -> float:
    """⟨ε^k⟩ by numerical integration over the spatial coordinate."""
    if order < 0:
        raise ValidationError(f"moment order must be non-negative, got {order}")
    value, _ = integrate.quad(lambda u: (scale * (1 - 3 * u**2)) ** order, 0.0, 1.0)
    return float(value)


def udd2_fy_saturation(eps0: float, n0: float) -> float:
    """Long-time UDD-2 F_y: 1 − 0.8(ε₀² + 4n₀²)."""
    return 1 - SECOND_MOMENT_FACTOR * (eps0**2 + 4 * n0**2)


def udd2_fy_stationary(eps0: float, n0: float) -> float:
    """1 − 2⟨θ_x²⟩ with ⟨cos²⟩ = ⟨sin²⟩ = 1/2 and vanishing cross terms."""
    return 1 - 2 * (error_second_moment(eps0) / 2 + 4 * error_second_moment(n0) / 2)


def udd2_fy_curve(b: float, t, eps0: float, n0: float):
    """Bath-averaged second-order UDD-2 F_y(t) for B ~ N(0, b²)."""
    decay = np.exp(-((b * np.asarray(t, dtype=float)) ** 2) / 8)
    value = 1 - 2 * (
        error_second_moment(eps0) * (1 + decay) / 2 + 4 * error_second_moment(n0) * (1 - decay) / 2
    )
    return float(value) if np.ndim(value) == 0 else value


def udd2_revival_fidelity(eps: float, chi):
    """Exact UDD-2 F_y for one field with n_z = 0, χ = Bt/4.

    F_y = 1 − 8q²(1 − q²), q = sin(ε/2)cos χ; 1 at χ = π/2, cos 2ε at χ = 0.
    """
    q = math.sin(eps / 2) * np.cos(np.asarray(chi, dtype=float))
    value = 1 - 8 * q**2 * (1 - q**2)
    return float(value) if np.ndim(value) == 0 else value


def udd3_fy_saturation(eps0: float, n0: float) -> float:
    """Long-time UDD-3 F_y: 1 − 5⟨n_z²⟩ − 7⟨ε²⟩/4."""
    return 1 - 5 * error_second_moment(n0) - 7 * error_second_moment(eps0) / 4


def _udd3_fy_from_squares(eps_sq: float, nz_sq: float, cos_sq_a: float, cos_sq_d: float) -> float:
    return 1 - 2 * (5 * nz_sq + eps_sq / 4 + (eps_sq / 4 - nz_sq) * (4 * cos_sq_a + cos_sq_d))


def udd3_fy_long_time(eps: float, nz: float, B: float, tau1: float, tau2: float) -> float:
    """UDD-3 F_y once first-power trig averages vanish, before the final averages."""
    return _udd3_fy_from_squares(
        eps**2, nz**2, math.cos(B * tau1) ** 2, math.cos(B * (tau2 - tau1)) ** 2
    )


def udd3_fy_stationary(eps0: float, n0: float) -> float:
    """udd3_fy_long_time averaged with ⟨cos²⟩ = 1/2 and the error moments."""
    return _udd3_fy_from_squares(error_second_moment(eps0), error_second_moment(n0), 0.5, 0.5)
