"""
Ensemble propagation and fidelity curves.

Every ensemble member is a pair (B, error sample). The error sample is
systematic: one draw is reused by every pulse of the sequence. Members are
laid out either on a product quadrature grid (bath nodes × spatial nodes)
or as Monte Carlo draws from the counter-based streams, then propagated in
fixed-size chunks. Chunk results are merged in chunk order, so the reported
numbers do not depend on the worker count.
"""

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import yaml
from loguru import logger

from ..errors import SimulationError, ValidationError
from ..pulses.pulse_model import (
    BathParams,
    ErrorMode,
    PiZOrder,
    PulseErrorParams,
    PulseErrorSample,
    draw_bath_field,
    draw_error_sample,
    pulse_unitary,
)
from ..pulses.quadrature import BATH_RULES, bath_nodes, spatial_rule
from ..pulses.random_streams import draw_samples
from ..sequences.sequence_builder import Delay, Protocol, PulseSequence, build_sequence
from ..spin.spin_core import BlochState, Unitary2, expectation

AXES = ("x", "y", "z")

UNITARITY_TOLERANCE = 1e-10
FIDELITY_EXCURSION = 1e-9
LARGE_ENSEMBLE = 2_000_000


class Method(str, Enum):
    QUADRATURE = "quadrature"
    MONTE_CARLO = "monte_carlo"


@dataclass(frozen=True)
class EnsembleConfig:
    """Everything needed to average a sequence over the ensemble.

    Attributes:
        bath: static offset field distribution
        errors: pulse error magnitudes
        method: quadrature or monte_carlo
        nodes_b: bath nodes (minimum, the auto rule may use more)
        nodes_eps: spatial nodes for ε (and for both errors in correlated mode)
        nodes_nz: spatial nodes for n_z
        n_samples: Monte Carlo sample count
        seed: Monte Carlo stream key
        error_mode: independent or correlated_spatial
        bath_rule: auto, hermite or uniform
        pi_z_order: time order inside a composite π_Z
        chunk_size: members propagated together
        workers: threads used for chunks
    """

    bath: BathParams = field(default_factory=BathParams)
    errors: PulseErrorParams = field(default_factory=PulseErrorParams)
    method: Method = Method.QUADRATURE
    nodes_b: int = 32
    nodes_eps: int = 16
    nodes_nz: int = 16
    n_samples: int = 100_000
    seed: int = 0
    error_mode: ErrorMode = ErrorMode.INDEPENDENT
    bath_rule: str = "auto"
    pi_z_order: PiZOrder = PiZOrder.XY
    chunk_size: int = 65_536
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "error_mode", ErrorMode(self.error_mode))
        object.__setattr__(self, "pi_z_order", PiZOrder(self.pi_z_order))

        for name in ("nodes_b", "nodes_eps", "nodes_nz"):
            if getattr(self, name) < 2:
                raise ValidationError(f"{name} must be at least 2, got {getattr(self, name)}")
        if self.n_samples < 1:
            raise ValidationError(f"n_samples must be at least 1, got {self.n_samples}")
        if self.chunk_size < 1 or self.workers < 1:
            raise ValidationError("chunk_size and workers must be positive")
        if self.bath_rule not in BATH_RULES:
            raise ValidationError(f"unknown bath rule {self.bath_rule!r}, expected one of {BATH_RULES}")

    def to_dict(self) -> dict:
        data = asdict(self)
        for key in ("method", "error_mode", "pi_z_order"):
            data[key] = getattr(self, key).value
        return data

    def digest(self) -> str:
        """SHA-256 of the canonical YAML rendering (worker count excluded)."""
        data = self.to_dict()
        data.pop("workers")
        canonical = yaml.safe_dump(data, sort_keys=True)
        return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


@dataclass
class Members:
    """Flat arrays describing the ensemble at one total time."""

    b_field: np.ndarray
    sample: PulseErrorSample
    weights: np.ndarray
    bath_rule: str = "monte_carlo"

    @property
    def size(self) -> int:
        return int(self.b_field.size)

    def chunk(self, start: int, stop: int) -> "Members":
        index = slice(start, stop)
        return Members(
            b_field=self.b_field[index],
            sample=self.sample.take(index),
            weights=self.weights[index],
            bath_rule=self.bath_rule,
        )


@dataclass(frozen=True)
class EnsembleAverage:
    """Ensemble-averaged fidelities for all three initial states."""

    fidelities: Dict[str, float]
    stderr: Dict[str, float]
    members: int
    bath_rule: str

    def __getitem__(self, axis: str) -> float:
        return self.fidelities[axis.lower()]


def _quadrature_members(total_time: float, config: EnsembleConfig) -> Members:
    b_nodes, b_weights, rule = bath_nodes(config.bath, config.nodes_b, total_time, config.bath_rule)

    u_eps, w_eps = spatial_rule(config.nodes_eps)
    if config.error_mode is ErrorMode.CORRELATED_SPATIAL:
        # |l| = u fixes both errors
        p_eps = (1.0 + u_eps) / 2.0
        p_nz = p_eps
        w_err = w_eps
    else:
        u_nz, w_nz = spatial_rule(config.nodes_nz)
        uu_eps, uu_nz = np.meshgrid(u_eps, u_nz, indexing="ij")
        p_eps, p_nz = 1.0 - uu_eps.ravel(), 1.0 - uu_nz.ravel()
        w_err = np.outer(w_eps, w_nz).ravel()

    sample = draw_error_sample(config.errors, (p_eps, p_nz), config.error_mode)

    n_err = w_err.size
    field_grid = np.repeat(b_nodes, n_err)
    weights = np.outer(b_weights, w_err).ravel()
    tiled = PulseErrorSample(
        *(np.tile(np.broadcast_to(np.asarray(getattr(sample, f), dtype=float), (n_err,)), b_nodes.size)
          for f in ("eps_x", "eps_y", "n_z", "m_z", "n_y", "m_x"))
    )
    return Members(b_field=field_grid, sample=tiled, weights=weights, bath_rule=rule)


def _monte_carlo_members(start: int, stop: int, config: EnsembleConfig) -> Members:
    p_eps, p_nz, z = draw_samples(config.seed, start, stop)
    sample = draw_error_sample(config.errors, (p_eps, p_nz), config.error_mode)
    n = stop - start
    sample = PulseErrorSample(
        *(np.broadcast_to(np.asarray(getattr(sample, f), dtype=float), (n,)).copy()
          for f in ("eps_x", "eps_y", "n_z", "m_z", "n_y", "m_x"))
    )
    return Members(
        b_field=np.asarray(draw_bath_field(config.bath, z), dtype=float).reshape(n),
        sample=sample,
        weights=np.full(n, 1.0 / config.n_samples),
    )


def evolve_once(
    seq: PulseSequence,
    B: Union[float, np.ndarray],
    sample: PulseErrorSample,
    pi_z_order: PiZOrder = PiZOrder.XY,
) -> Unitary2:
    """Time-ordered product of the sequence for one field and error sample.

    B and the sample fields may be arrays; the result is then a stack of
    operators, one per ensemble member. Zero-length delays are identities.

    Raises:
        SimulationError: if the product drifts from unitarity by more than 1e-10
    """
    field_values = np.asarray(B, dtype=float)
    batch_shape = np.broadcast_shapes(
        field_values.shape, *(np.shape(getattr(sample, f)) for f in ("eps_x", "eps_y", "n_z", "m_z", "n_y", "m_x"))
    )
    field_values = np.broadcast_to(field_values, batch_shape)

    pulses = {axis: pulse_unitary(axis, sample, pi_z_order).matrix for axis in {p.axis for p in seq.pulses}}

    u = np.broadcast_to(np.eye(2, dtype=complex), batch_shape + (2, 2)).copy()
    for event in seq.events:
        if isinstance(event, Delay):
            if event.duration == 0:
                continue
            phase = np.exp(-0.5j * field_values * event.duration)
            u[..., 0, :] *= phase[..., None]
            u[..., 1, :] *= np.conj(phase)[..., None]
        else:
            u = np.matmul(pulses[event.axis], u)

    result = Unitary2(u)
    defect = result.unitarity_defect() if u.size else 0.0
    if defect > UNITARITY_TOLERANCE:
        raise SimulationError(f"evolution lost unitarity: defect {defect:.3e} after {seq.pulse_count} pulses")
    return result


def _chunk_sums(seq: PulseSequence, members: Members, pi_z_order: PiZOrder) -> np.ndarray:
    """Weighted sums of F_α and of F_α² for one chunk, shape (2, 3)."""
    u = evolve_once(seq, members.b_field, members.sample, pi_z_order)
    sums = np.empty((2, 3))
    for k, axis in enumerate(AXES):
        values = np.asarray(expectation(BlochState.along(axis), u, axis))
        sums[0, k] = np.dot(members.weights, values)
        sums[1, k] = np.dot(members.weights, values**2)
    return sums


def _check_excursion(fidelities: Dict[str, float], seq: PulseSequence):
    for axis, value in fidelities.items():
        if abs(value) > 1.0 + FIDELITY_EXCURSION:
            raise SimulationError(
                f"F_{axis} = {value!r} leaves [-1, 1] for {seq.protocol.value}-{seq.level} at t={seq.total_time}"
            )


def ensemble_average(seq: PulseSequence, config: EnsembleConfig) -> EnsembleAverage:
    """Average all three fidelities over the ensemble in one propagation.

    Monte Carlo results carry standard errors; quadrature errors are
    reported as zero.
    """
    if config.method is Method.QUADRATURE:
        members = _quadrature_members(seq.total_time, config)
        total = members.size
        rule = members.bath_rule

        def load(start: int, stop: int) -> Members:
            return members.chunk(start, stop)

    else:
        total = config.n_samples
        rule = "monte_carlo"

        def load(start: int, stop: int) -> Members:
            return _monte_carlo_members(start, stop, config)

    if total > LARGE_ENSEMBLE:
        logger.warning(f"Large ensemble: {total} members per time point")

    bounds = [(start, min(start + config.chunk_size, total)) for start in range(0, total, config.chunk_size)]

    def work(span: Tuple[int, int]) -> np.ndarray:
        return _chunk_sums(seq, load(*span), config.pi_z_order)

    if config.workers > 1 and len(bounds) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            partials = list(pool.map(work, bounds))
    else:
        partials = [work(span) for span in bounds]

    sums = np.zeros((2, 3))
    for part in partials:
        sums += part

    fidelities = {axis: float(sums[0, k]) for k, axis in enumerate(AXES)}
    if config.method is Method.MONTE_CARLO and total > 1:
        variance = np.maximum(sums[1] - sums[0] ** 2, 0.0) * total / (total - 1)
        stderr = {axis: float(np.sqrt(variance[k] / total)) for k, axis in enumerate(AXES)}
    else:
        stderr = {axis: 0.0 for axis in AXES}

    _check_excursion(fidelities, seq)
    logger.debug(
        f"{seq.protocol.value}-{seq.level} t={seq.total_time:.6g}: {total} members ({rule}), "
        + ", ".join(f"F_{a}={fidelities[a]:.6f}" for a in AXES)
    )
    return EnsembleAverage(fidelities=fidelities, stderr=stderr, members=total, bath_rule=rule)


def fidelity_at(seq: PulseSequence, axis: str, config: EnsembleConfig) -> float:
    """F_α = ⟨½ Re Tr(U σ_α U† σ_α)⟩ over the ensemble."""
    axis = axis.lower()
    if axis not in AXES:
        raise ValidationError(f"unknown axis {axis!r}")
    return ensemble_average(seq, config)[axis]


@dataclass(frozen=True)
class CurveRow:
    t: float
    f_x: float
    f_y: float
    f_z: float

    def get(self, axis: str) -> float:
        return getattr(self, f"f_{axis.lower()}")


@dataclass(frozen=True)
class TailSaturation:
    """Mean and spread of each fidelity over the flat long-time tail."""

    mean: Dict[str, float]
    spread: Dict[str, float]
    times: Tuple[float, ...]


@dataclass
class FidelityCurve:
    """Fidelity versus total time for all three initial states."""

    protocol: Protocol
    level: int
    rows: List[CurveRow]
    config_digest: str = ""
    metadata: dict = field(default_factory=dict)

    @property
    def times(self) -> np.ndarray:
        return np.array([r.t for r in self.rows])

    def column(self, axis: str) -> np.ndarray:
        return np.array([r.get(axis) for r in self.rows])

    def at_zero(self) -> CurveRow:
        if not self.rows or self.rows[0].t != 0:
            raise ValidationError("curve has no t=0 row")
        return self.rows[0]

    def tail_saturation(self, b: float, min_bt: float = 40.0, count: int = 10) -> TailSaturation:
        """Average over the `count` largest times with b·t ≥ min_bt.

        Raises:
            ValidationError: if no grid time reaches min_bt
        """
        tail = [r for r in self.rows if b * r.t >= min_bt][-count:]
        if not tail:
            raise ValidationError(f"no grid times with b·t >= {min_bt}")

        mean, spread = {}, {}
        for axis in AXES:
            values = np.array([r.get(axis) for r in tail])
            mean[axis] = float(values.mean())
            spread[axis] = float(values.max() - values.min())
        return TailSaturation(mean=mean, spread=spread, times=tuple(r.t for r in tail))


def _check_times(times: Sequence[float]) -> List[float]:
    grid = [float(t) for t in times]
    if any(not np.isfinite(t) or t < 0 for t in grid):
        raise ValidationError("times must be finite and non-negative")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValidationError("times must be strictly increasing")
    if not grid or grid[0] != 0.0:
        grid.insert(0, 0.0)
    return grid


def sweep(
    protocol: Union[Protocol, str],
    level: int,
    times: Sequence[float],
    config: EnsembleConfig,
    sequence: Optional[PulseSequence] = None,
) -> FidelityCurve:
    """Fidelity curve over a time grid; a t=0 row is always present.

    The schedule is built once and stretched to every grid time.
    """
    protocol = Protocol(protocol)
    grid = _check_times(times)
    base = sequence if sequence is not None else build_sequence(protocol, level, 1.0)

    logger.info(
        f"Sweeping {protocol.value.upper()}-{level} ({base.pulse_count} pulses) over {len(grid)} times, "
        f"method={config.method.value}"
    )

    rows = []
    for t in grid:
        avg = ensemble_average(base.at_time(t), config)
        rows.append(CurveRow(t=t, f_x=avg["x"], f_y=avg["y"], f_z=avg["z"]))

    return FidelityCurve(protocol=protocol, level=level, rows=rows, config_digest=config.digest())
