import numpy as np
import pytest

from core.errors import ValidationError
from core.oracles import (
    error_moment,
    error_second_moment,
    qdd3_t0_second_order,
    qdd_t0_operator,
    qddzy_odd_t0_operator,
    udd2_fy_curve,
    udd2_fy_saturation,
    udd2_fy_stationary,
    udd2_operator,
    udd3_fy_long_time,
    udd3_fy_saturation,
    udd3_fy_stationary,
    udd3_operator,
    udd_t0_operator,
)
from core.oracles.analytic_oracles import udd2_angles, udd3_angles
from core.reporting import convergence_slope, oracle_deviations
from core.ensemble import evolve_once
from core.pulses import PiZOrder, PulseAxis, PulseErrorSample
from core.sequences import build_qdd
from core.spin import IDENTITY


class TestUDD2:
    def test_no_errors_gives_minus_identity(self):
        assert np.allclose(udd2_operator(0.8, 3.0, 0.0, 0.0).matrix(), -IDENTITY)

    def test_angles(self):
        assert udd2_angles(0.0, 1.0, 0.01, 0.0) == pytest.approx((0.01, 0.0))
        theta_x, theta_z = udd2_angles(np.pi, 1.0, 0.01, 0.0)
        assert theta_z == pytest.approx(-2.5e-5)
        assert udd2_angles(2 * np.pi, 1.0, 0.01, 0.004)[0] == pytest.approx(0.008)

    def test_no_y_channel(self):
        assert udd2_operator(1.3, 2.0, 0.1, 0.05).cy == 0

    def test_unitary_to_third_order(self):
        defects = [udd2_operator(0.9, 2.0, 0.1 * s, 0.04 * s).unitarity_defect() for s in (1.0, 0.5)]
        assert defects[1] < defects[0] / 6


class TestUDD3:
    def test_no_errors_gives_identity(self):
        assert np.allclose(udd3_operator(1.0, 0.3, 0.7, 0.0, 0.0).matrix(), IDENTITY)

    def test_angles(self):
        assert udd3_angles(0.0, 1.0, 2.0, 0.01, 0.004) == pytest.approx((0.02, 0.0))
        assert udd3_angles(1.0, np.pi / 2, np.pi, 0.01, 0.0) == pytest.approx((0.005, -0.005))


class TestZeroTime:
    def test_udd(self):
        op = udd_t0_operator(2, 0.01)
        assert (op.c0, op.cx) == pytest.approx((-1, 0.01j))
        op = udd_t0_operator(20, 0.01)
        assert (op.c0, op.cx) == pytest.approx((1, -0.1j))
        assert np.allclose(abs(udd_t0_operator(7, 0.0).matrix()), IDENTITY)

    def test_qdd_even(self):
        op = qdd_t0_operator(4, 0.01, 0.01)
        assert (op.c0, op.cx, op.cy, op.cz) == pytest.approx((1, -0.02j, -0.02j, 0))

    def test_qdd_odd(self):
        op = qdd_t0_operator(3, 0.01, 0.05)
        assert (op.c0, op.cx, op.cy) == pytest.approx((1, -0.02j, 0))

    def test_qdd_even_rotates_about_diagonal(self):
        axis = qdd_t0_operator(4, 0.03, 0.03).rotation_axis()
        assert axis == pytest.approx([1 / np.sqrt(2), 1 / np.sqrt(2), 0.0])

    def test_qdd3_second_order(self):
        assert qdd3_t0_second_order(0.01, 0.01, 0.0).cz == pytest.approx(-4e-4j)
        assert qdd3_t0_second_order(0.01, 0.0, 0.004).cz == pytest.approx(-8e-5j)
        assert np.allclose(qdd3_t0_second_order(0.0, 0.02, 0.01).matrix(), IDENTITY)

    def test_qddzy_odd(self):
        assert np.allclose(qddzy_odd_t0_operator(3, 0.0, 0.0).matrix(), IDENTITY)
        op = qddzy_odd_t0_operator(3, 0.01, 0.0)
        assert (op.c0, op.cz) == pytest.approx((1, 0.04j))
        op = qddzy_odd_t0_operator(5, 0.0, 0.01)
        assert (op.c0, op.cz) == pytest.approx((-1, -0.06j))

    def test_qddzy_even_level_is_rejected(self):
        with pytest.raises(ValidationError):
            qddzy_odd_t0_operator(4, 0.01, 0.01)

    @pytest.mark.parametrize("level", [3, 5])
    @pytest.mark.parametrize("order", list(PiZOrder))
    def test_qddzy_odd_cancels_angle_and_tilt_errors(self, level, order):
        seq = build_qdd(level, 0.0, outer=PulseAxis.Z)
        ideal = qddzy_odd_t0_operator(level, 0.0, 0.0)

        def residual(s):
            sample = PulseErrorSample.correlated(0.05 * s, 0.02 * s)
            return ideal.deviation(evolve_once(seq, 0.0, sample, order))

        assert convergence_slope(residual) == pytest.approx(2.0, abs=0.3)


class TestSaturation:
    def test_values(self):
        assert udd2_fy_saturation(0.3, -0.12) == pytest.approx(0.88192)
        assert udd2_fy_saturation(0.0, 0.0) == 1
        assert udd2_fy_saturation(0.1, 0.0) == pytest.approx(0.992)
        assert udd3_fy_saturation(0.3, -0.12) == pytest.approx(0.8164)
        assert udd3_fy_saturation(0.2, 0.0) == pytest.approx(0.944)

    def test_moments(self):
        assert error_second_moment(0.3) == pytest.approx(0.072)
        assert error_second_moment(-0.12) == pytest.approx(0.01152)
        assert error_moment(2, 0.3) == pytest.approx(0.072, rel=1e-9)
        assert error_moment(1, 0.3) == pytest.approx(0.0, abs=1e-12)

    def test_stationary_averages_reproduce_saturation(self):
        rng = np.random.default_rng(1)
        for eps0, n0 in zip(rng.uniform(-0.4, 0.4, 10), rng.uniform(-0.2, 0.2, 10)):
            assert udd2_fy_stationary(eps0, n0) == pytest.approx(udd2_fy_saturation(eps0, n0), abs=1e-14)
            assert udd3_fy_stationary(eps0, n0) == pytest.approx(udd3_fy_saturation(eps0, n0), abs=1e-14)

    def test_udd3_long_time_at_quarter_phases(self):
        eps, nz = 0.1, 0.03
        value = udd3_fy_long_time(eps, nz, 1.0, np.pi / 4, np.pi / 2)
        assert value == pytest.approx(1 - 2 * (5 * nz**2 + eps**2 / 4 + (eps**2 / 4 - nz**2) * 2.5))

    def test_udd2_curve_limits(self):
        assert udd2_fy_curve(1.0, 0.0, 0.3, -0.12) == pytest.approx(1 - 2 * 0.072)
        assert udd2_fy_curve(1.0, 100.0, 0.3, -0.12) == pytest.approx(udd2_fy_saturation(0.3, -0.12))


@pytest.mark.parametrize("name", list(oracle_deviations()))
def test_oracle_converges_at_expected_order(name):
    order, deviation = oracle_deviations()[name]
    assert convergence_slope(deviation) == pytest.approx(order + 1, abs=0.3)
