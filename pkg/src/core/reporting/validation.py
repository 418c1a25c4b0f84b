"""
Acceptance suite behind the `validate` command.

Every check compares a simulator number against a closed-form value or a
qualitative property and is reported as one table row. Long-time tails are
measured on the grid b·t ∈ [40, 60].
"""

from dataclasses import dataclass, replace
from typing import Callable, List, Optional, Sequence

import numpy as np
from loguru import logger
from rich.console import Console
from rich.table import Table
from scipy import stats

from ..ensemble.ensemble_sim import AXES, EnsembleConfig, FidelityCurve, evolve_once, sweep
from ..oracles import analytic_oracles as oracles
from ..pulses.pulse_model import (
    PiZOrder,
    PulseAxis,
    PulseErrorParams,
    PulseErrorSample,
    error_cdf,
    error_inverse_cdf,
)
from ..pulses.quadrature import spatial_rule
from ..pulses.random_streams import draw_samples
from ..sequences.sequence_builder import Protocol, build_qdd, build_sequence, build_udd, expected_pulse_count, udd_times
from ..spin.spin_core import BlochState, expectation

SCALES = (1.0, 0.5, 0.25, 0.125)
SLOPE_TOLERANCE = 0.3
TAIL_MIN_BT = 40.0
TAIL_MAX_BT = 60.0
# "saturates at a similar value"
SIMILAR_TOLERANCE = 0.03


@dataclass
class ValidationCheck:
    """Outcome of one acceptance check."""

    name: str
    target: str
    computed: str
    passed: bool
    detail: str = ""


def convergence_slope(deviation: Callable[[float], float], scales: Sequence[float] = SCALES) -> float:
    """Log-log slope of oracle deviation against error scale."""
    s = np.asarray(scales, dtype=float)
    d = np.array([deviation(x) for x in s])
    if np.any(d <= 0):
        raise ValueError("deviation vanished; slope undefined")
    slope, _ = np.polyfit(np.log(s), np.log(d), 1)
    return float(slope)


def oracle_deviations() -> dict:
    """Deviation functions of each perturbative operator, keyed by name.

    Each value is (expected order, deviation(scale)).
    """
    B, t = 0.7, 3.1
    eps, nz = 0.05, 0.02

    udd2 = build_udd(2, t)
    udd3 = build_udd(3, t)
    times3 = udd_times(3, t)
    tau1, tau2 = times3[0], times3[1] - times3[0]
    udd20_t0 = build_udd(20, 0.0)
    qdd3_t0 = build_qdd(3, 0.0)
    qdd4_t0 = build_qdd(4, 0.0)
    zy3_t0 = build_qdd(3, 0.0, outer=PulseAxis.Z)

    def sample(e=0.0, n=0.0, ey=None, mx=0.0, ny=0.0):
        return PulseErrorSample(eps_x=e, eps_y=e if ey is None else ey, n_z=n, m_z=n, n_y=ny, m_x=mx)

    deviations = {
        "UDD-2 operator": (2, lambda s: oracles.udd2_operator(B, t, eps * s, nz * s).deviation(
            evolve_once(udd2, B, sample(eps * s, nz * s)))),
        "UDD-3 operator": (1, lambda s: oracles.udd3_operator(B, tau1, tau2, eps * s, nz * s).deviation(
            evolve_once(udd3, B, sample(eps * s, nz * s)))),
        "UDD-20 t=0 operator": (1, lambda s: oracles.udd_t0_operator(20, 0.01 * s).deviation(
            evolve_once(udd20_t0, 0.0, sample(0.01 * s)))),
        "QDD-4 t=0 operator": (1, lambda s: oracles.qdd_t0_operator(4, eps * s, eps * s).deviation(
            evolve_once(qdd4_t0, 0.0, sample(eps * s)))),
        "QDD-3 t=0 operator": (1, lambda s: oracles.qdd_t0_operator(3, eps * s, eps * s).deviation(
            evolve_once(qdd3_t0, 0.0, sample(eps * s)))),
        "QDD-3 t=0 second order": (2, lambda s: oracles.qdd3_t0_second_order(eps * s, 0.03 * s, nz * s).deviation(
            evolve_once(qdd3_t0, 0.0, sample(eps * s, nz * s, ey=0.03 * s)))),
        "QDD(ZY)-3 t=0 operator": (1, lambda s: oracles.qddzy_odd_t0_operator(3, 0.02 * s, 0.01 * s).deviation(
            evolve_once(zy3_t0, 0.0, sample(mx=0.02 * s, ny=0.01 * s)))),
    }

    # ε and n_z cancel at first order for odd ZY levels: the residual about ±1 is second order
    for level in (3, 5):
        zy_t0 = build_qdd(level, 0.0, outer=PulseAxis.Z)
        ideal = oracles.qddzy_odd_t0_operator(level, 0.0, 0.0)
        for order in PiZOrder:
            deviations[f"QDD(ZY)-{level} t=0 ε,n_z residual ({order.value})"] = (
                1,
                lambda s, seq=zy_t0, op=ideal, o=order: op.deviation(
                    evolve_once(seq, 0.0, sample(eps * s, nz * s), o)),
            )
    return deviations


def _fmt(value: float) -> str:
    return f"{value:.6g}"


class Validator:
    """Runs the acceptance suite for one ensemble configuration."""

    def __init__(self, config: EnsembleConfig):
        self.config = config
        self.b = config.bath.b
        self.checks: List[ValidationCheck] = []

    def _add(self, name: str, target: str, computed: str, passed: bool, detail: str = ""):
        check = ValidationCheck(name=name, target=target, computed=computed, passed=bool(passed), detail=detail)
        self.checks.append(check)
        log = logger.debug if check.passed else logger.warning
        log(f"{'PASS' if check.passed else 'FAIL'} {name}: target {target}, computed {computed}")

    def _tail_grid(self) -> List[float]:
        return list(np.linspace(TAIL_MIN_BT, TAIL_MAX_BT, 10) / self.b)

    def _curve(self, protocol: Protocol, level: int, times: Optional[List[float]] = None,
               config: Optional[EnsembleConfig] = None) -> FidelityCurve:
        return sweep(protocol, level, times if times is not None else self._tail_grid(), config or self.config)

    def check_structure(self):
        cases = [(Protocol.UDD, 2, 2), (Protocol.UDD, 3, 4), (Protocol.UDD, 19, 20), (Protocol.UDD, 20, 20),
                 (Protocol.QDD, 3, 20), (Protocol.QDD, 4, 24), (Protocol.QDD_ZY, 2, 8), (Protocol.QDD_ZY, 3, 20),
                 (Protocol.QDD_ZY, 4, 24), (Protocol.QDD_ZY, 5, 42)]
        for protocol, level, count in cases:
            built = build_sequence(protocol, level, 1.0).pulse_count
            passed = built == count == expected_pulse_count(protocol, level)
            self._add(f"{protocol.value.upper()}-{level} pulse count", str(count), str(built), passed)

    def check_moments(self):
        eps0 = self.config.errors.epsilon0 or 0.3
        u, w = spatial_rule(16)
        eps = eps0 * (1 - 3 * u**2)
        ratio = float(np.dot(w, eps**2)) / eps0**2
        self._add("<eps^2>/eps0^2", "0.8 ± 0.5%", _fmt(ratio), abs(ratio - 0.8) <= 0.004)

        numeric = oracles.error_moment(2, eps0) / eps0**2
        self._add("<eps^2>/eps0^2 (integrated)", "0.8 ± 0.5%", _fmt(numeric), abs(numeric - 0.8) <= 0.004)

        p_eps, _, _ = draw_samples(self.config.seed, 0, 200_000)
        draws = error_inverse_cdf(p_eps, eps0)
        mean, stderr = float(draws.mean()), float(draws.std(ddof=1) / np.sqrt(draws.size))
        self._add("<eps> (Monte Carlo)", "0 ± 3 s.e.", f"{mean:.3g} ± {stderr:.2g}", abs(mean) < 3 * stderr)

        ks = stats.kstest(draws / eps0, lambda x: error_cdf(x, 1.0))
        self._add("eps draws vs CDF (KS)", "p > 1e-3", f"D={ks.statistic:.2e}, p={ks.pvalue:.2g}", ks.pvalue > 1e-3)

        lo, hi = error_inverse_cdf(0.0, eps0), error_inverse_cdf(1.0, eps0)
        self._add("support endpoints", f"[{_fmt(-2 * eps0)}, {_fmt(eps0)}]", f"[{_fmt(lo)}, {_fmt(hi)}]",
                  np.isclose(lo, -2 * eps0) and np.isclose(hi, eps0))

    def check_refocusing(self, max_level: int = 6):
        perfect = replace(self.config, errors=PulseErrorParams(0.0, 0.0), nodes_eps=2, nodes_nz=2)
        times = [1.0 / self.b, 50.0 / self.b]
        worst = 0.0
        for protocol in Protocol:
            for level in range(1, max_level + 1):
                curve = self._curve(protocol, level, times, perfect)
                for axis in AXES:
                    worst = max(worst, float(np.max(np.abs(curve.column(axis) - 1.0))))
        self._add("perfect-pulse refocusing", "1 ± 1e-9", f"max dev {worst:.2e}", worst <= 1e-9)

    def check_udd2(self):
        eps0, n0 = self.config.errors.epsilon0, self.config.errors.n0
        grid = list(np.linspace(0.0, TAIL_MAX_BT, 31)[1:] / self.b)
        curve = self._curve(Protocol.UDD, 2, grid)
        tail = curve.tail_saturation(self.b, TAIL_MIN_BT)
        target = oracles.udd2_fy_saturation(eps0, n0)
        for axis in ("y", "z"):
            value = tail.mean[axis]
            self._add(f"UDD-2 F_{axis} saturation", f"{_fmt(target)} ± 0.01", _fmt(value), abs(value - target) <= 0.01)
        fx_min = float(curve.column("x").min())
        self._add("UDD-2 F_x at all t", ">= 0.99", _fmt(fx_min), fx_min >= 0.99)

        closed = oracles.udd2_fy_curve(self.b, curve.times, eps0, n0)
        gap = float(np.max(np.abs(curve.column("y") - closed)))
        band = 0.005 if abs(eps0) <= 0.2 else 0.01
        self._add("UDD-2 F_y full curve", f"± {band}", f"max dev {gap:.2e}", gap <= band)
        return curve

    def check_udd3(self):
        eps0, n0 = self.config.errors.epsilon0, self.config.errors.n0
        tail = self._curve(Protocol.UDD, 3).tail_saturation(self.b, TAIL_MIN_BT)
        target = oracles.udd3_fy_saturation(eps0, n0)
        fx, fy, fz = tail.mean["x"], tail.mean["y"], tail.mean["z"]
        self._add("UDD-3 F_y saturation", f"{_fmt(target)} ± 0.01", _fmt(fy), abs(fy - target) <= 0.01)
        self._add("UDD-3 F_x close to F_y", f"± {SIMILAR_TOLERANCE}", f"{_fmt(fx)} vs {_fmt(fy)}",
                  abs(fx - fy) <= SIMILAR_TOLERANCE)
        self._add("UDD-3 F_z below F_y", "F_z < F_y", f"{_fmt(fz)} < {_fmt(fy)}", fz < fy)

    def check_accumulation(self, udd2_curve: FidelityCurve):
        for level in (19, 20):
            row = self._curve(Protocol.UDD, level, [0.0]).at_zero()
            self._add(f"UDD-{level} F_x(0)", ">= 0.95", _fmt(row.f_x), row.f_x >= 0.95)
            self._add(f"UDD-{level} F_y(0), F_z(0)", "<= 0.15", f"{_fmt(row.f_y)}, {_fmt(row.f_z)}",
                      row.f_y <= 0.15 and row.f_z <= 0.15)

        # pointwise on the UDD-2 tail times
        times = udd2_curve.tail_saturation(self.b, TAIL_MIN_BT).times
        udd2 = {r.t: r for r in udd2_curve.rows}
        udd20 = self._curve(Protocol.UDD, 20, list(times))
        for axis in AXES:
            excess = max(r.get(axis) - udd2[r.t].get(axis) for r in udd20.rows if r.t in times)
            self._add(f"UDD-20 F_{axis} below UDD-2 on tail", "max excess <= 0", f"{excess:.3g}", excess <= 0)

    def check_qdd(self):
        small = replace(self.config, errors=PulseErrorParams(epsilon0=0.001, n0=-0.0004))
        row = self._curve(Protocol.QDD, 4, [0.0], small).at_zero()
        self._add("QDD-4 F_x(0) = F_y(0)", "± 1e-6", f"{abs(row.f_x - row.f_y):.2e}", abs(row.f_x - row.f_y) <= 1e-6)

        xy = self._curve(Protocol.QDD, 3).tail_saturation(self.b, TAIL_MIN_BT)
        zy = self._curve(Protocol.QDD_ZY, 3).tail_saturation(self.b, TAIL_MIN_BT)
        for axis in AXES:
            self._add(f"QDD(ZY)-3 F_{axis} tail above QDD-3", f"> {_fmt(xy.mean[axis])}", _fmt(zy.mean[axis]),
                      zy.mean[axis] > xy.mean[axis])

        xy2 = self._curve(Protocol.QDD, 2).tail_saturation(self.b, TAIL_MIN_BT)
        zy2 = self._curve(Protocol.QDD_ZY, 2).tail_saturation(self.b, TAIL_MIN_BT)
        better = [axis for axis in AXES if zy2.mean[axis] > xy2.mean[axis]]
        self._add("QDD(ZY)-2 no uniform gain over QDD-2", "not every axis above",
                  f"above on {','.join(better) or 'none'}", len(better) < len(AXES))

        # which π_Z order reproduces the odd-level improvement on every axis
        reproducing = []
        for order in PiZOrder:
            if order is self.config.pi_z_order:
                tail = zy
            else:
                tail = self._curve(Protocol.QDD_ZY, 3, config=replace(self.config, pi_z_order=order)).tail_saturation(
                    self.b, TAIL_MIN_BT)
            detail = ", ".join(f"F_{axis}={_fmt(tail.mean[axis])}" for axis in AXES)
            logger.info(f"QDD(ZY)-3 tail with π_Z order {order.value}: {detail}")
            if all(tail.mean[axis] > xy.mean[axis] for axis in AXES):
                reproducing.append(order.value)
        self._add("QDD(ZY)-3 π_Z order comparison", "some order above QDD-3 on every axis",
                  ", ".join(reproducing) or "none", bool(reproducing))

        reduced = replace(self.config, errors=self.config.errors.scaled(0.1))
        zy0 = self._curve(Protocol.QDD_ZY, 3, [0.0], reduced).at_zero()
        xy0 = self._curve(Protocol.QDD, 3, [0.0], reduced).at_zero()
        worst = min(zy0.f_x, zy0.f_y, zy0.f_z)
        self._add("QDD(ZY)-3 F(0), errors / 10", ">= 0.999", _fmt(worst), worst >= 0.999 and zy0.f_y > xy0.f_y)

    def check_oracles(self):
        for name, (order, deviation) in oracle_deviations().items():
            slope = convergence_slope(deviation)
            self._add(f"{name} convergence", f"slope {order + 1} ± {SLOPE_TOLERANCE}", f"{slope:.3f}",
                      abs(slope - (order + 1)) <= SLOPE_TOLERANCE)

        eps0, n0 = self.config.errors.epsilon0, self.config.errors.n0
        for name, a, b in (
            ("UDD-2 stationary average", oracles.udd2_fy_stationary(eps0, n0), oracles.udd2_fy_saturation(eps0, n0)),
            ("UDD-3 stationary average", oracles.udd3_fy_stationary(eps0, n0), oracles.udd3_fy_saturation(eps0, n0)),
        ):
            self._add(name, _fmt(b), _fmt(a), abs(a - b) <= 1e-12)

    def check_revival(self):
        eps = self.config.errors.epsilon0 or 0.3
        B = 1.0
        state = BlochState.along("y")
        sample = PulseErrorSample.correlated(eps, 0.0)

        def fy(chi: float) -> float:
            return expectation(state, evolve_once(build_udd(2, 4 * chi / B), B, sample), "y")

        peak, trough = fy(np.pi / 2), fy(0.0)
        chis = np.linspace(0.0, np.pi, 41)
        lowest = min(fy(c) for c in chis)
        self._add("UDD-2 revival maximum", "1 ± 1e-9", _fmt(peak), abs(peak - 1) <= 1e-9)
        self._add("UDD-2 revival minimum at Bt = 0", _fmt(np.cos(2 * eps)), _fmt(trough),
                  abs(trough - np.cos(2 * eps)) <= 1e-9 and trough <= lowest + 1e-12)

    def run(self) -> List[ValidationCheck]:
        """Run every check; a perfect-pulse config runs the smoke subset only."""
        self.checks = []
        self.check_structure()
        self.check_refocusing()
        if self.config.errors.is_perfect:
            logger.info("Perfect pulses configured: running smoke checks only")
            return self.checks

        self.check_moments()
        udd2 = self.check_udd2()
        self.check_udd3()
        self.check_accumulation(udd2)
        self.check_qdd()
        self.check_oracles()
        self.check_revival()
        return self.checks


def render_report(checks: Sequence[ValidationCheck], console: Optional[Console] = None) -> Table:
    """Print the check table and return it."""
    table = Table(title="Validation")
    table.add_column("Check")
    table.add_column("Target")
    table.add_column("Computed")
    table.add_column("Result")
    for check in checks:
        result = "[green]PASS[/green]" if check.passed else "[red]FAIL[/red]"
        table.add_row(check.name, check.target, check.computed, result)
    (console or Console()).print(table)
    return table
