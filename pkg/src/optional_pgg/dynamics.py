"""Replicator-mutator dynamics on the cooperation/defection/abstention simplex.

The vector field couples the closed-form payoffs with symmetric mutation
flow.  Integration uses an embedded Dormand-Prince 5(4) pair with adaptive
steps; after every accepted step the state is clamped to the non-negative
cone and renormalized, which only corrects roundoff because the field is
tangent to the simplex.  The module also exposes the two-variable reduction
(cooperator share among participants, non-participant fraction), the
conserved quantity of the zero-influence regime, and a tail-window
classifier for long-run behavior.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from . import _kernels
from ._kernels import field_kernel, gap_kernel
from .game import GameParams, SimplexState

REGIME_FIXED_POINT = "fixed_point"
REGIME_CYCLE = "cycle_or_heteroclinic"
REGIME_BOUNDARY = "boundary_absorbed"
REGIME_INCONCLUSIVE = "inconclusive"


class IntegrationError(RuntimeError):
    """Raised when the adaptive stepper cannot finish the requested span."""

    def __init__(self, message: str, t_reached: float, partial: "Trajectory | None" = None):
        super().__init__(f"{message} (time reached: {t_reached:.6g})")
        self.t_reached = t_reached
        self.partial = partial


@dataclass(frozen=True)
class IntegrationControls:
    """Tolerances and output cadence for :func:`integrate`."""

    rel_tol: float = 1e-8
    abs_tol: float = 1e-10
    max_step: float = math.inf
    first_step: float = 1e-4
    record_every: int = 1
    record_from: float = 0.0
    max_steps: int = 20_000_000

    def __post_init__(self) -> None:
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_step <= 0 or self.first_step <= 0:
            raise ValueError("step bounds must be positive")
        if self.record_every < 1:
            raise ValueError("record_every must be >= 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")


@dataclass
class Trajectory:
    """Time-stamped solution samples of one integration run."""

    times: np.ndarray
    states: np.ndarray
    params: GameParams
    n_steps: int = 0
    min_component: float = 0.0

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states, dtype=float)
        if self.states.ndim != 2 or self.states.shape[1] != 3:
            raise ValueError("states must have shape (n, 3)")
        if self.times.shape[0] != self.states.shape[0]:
            raise ValueError("times and states must have matching lengths")
        if self.times.size > 1 and not np.all(np.diff(self.times) > 0):
            raise ValueError("times must be strictly increasing")
        if self.states.size:
            if np.max(np.abs(self.states.sum(axis=1) - 1.0)) > 1e-9:
                raise ValueError("a stored state violates the simplex constraint")
            if self.states.min() < -1e-9:
                raise ValueError("a stored state has a negative component")

    @property
    def final_state(self) -> SimplexState:
        x, y, z = self.states[-1]
        return SimplexState(x, y, z)


def vector_field(params: GameParams, state: SimplexState) -> tuple[float, float, float]:
    """Growth rates (dx/dt, dy/dt, dz/dt) of the three strategy fractions.

    Each strategy grows with its payoff advantage over the population mean;
    mutation moves a fraction mu away from every strategy and redistributes
    it evenly over the other two.  The three rates sum to zero.
    """
    return field_kernel(
        params.group_size, params.enhancement, params.alpha, params.beta, params.mu,
        state.x, state.y, state.z,
    )


def integrate(
    params: GameParams,
    initial: SimplexState,
    t_max: float,
    controls: IntegrationControls | None = None,
) -> Trajectory:
    """Integrate the dynamics from ``initial`` over [0, t_max].

    Raises :class:`IntegrationError` when the step size underflows or the
    step budget is exhausted; the partial trajectory recorded so far is
    attached to the exception.
    """
    if t_max <= 0:
        raise ValueError(f"t_max must be positive, got {t_max}")
    controls = controls or IntegrationControls()

    m, r = params.group_size, params.enhancement
    alpha, beta, mu = params.alpha, params.beta, params.mu
    record_from = min(controls.record_from, t_max)

    chunks: list[np.ndarray] = []
    capacity = 1 << 16
    out = np.empty((capacity, 4))
    out_pos = 0
    if record_from <= 0.0:
        out[0] = (0.0, initial.x, initial.y, initial.z)
        out_pos = 1

    t, x, y, z = 0.0, initial.x, initial.y, initial.z
    h = min(controls.first_step, controls.max_step, t_max)
    step_count = 0
    steps_left = controls.max_steps
    min_component = min(x, y, z)

    while True:
        (status, t, x, y, z, h, out_pos, step_count, steps_left, min_component) = _kernels.rk45_kernel(
            m, r, alpha, beta, mu,
            t, x, y, z, t_max, h,
            controls.rel_tol, controls.abs_tol, controls.max_step,
            record_from, controls.record_every, step_count,
            out, out_pos, steps_left, min_component,
        )
        if status == _kernels.STATUS_DONE:
            chunks.append(out[:out_pos].copy())
            break
        if status == _kernels.STATUS_BUFFER_FULL:
            # The kernel stopped right before writing the current sample.
            chunks.append(out[:out_pos].copy())
            capacity *= 2
            out = np.empty((capacity, 4))
            out[0] = (t, x, y, z)
            out_pos = 1
            continue
        chunks.append(out[:out_pos].copy())
        partial = _assemble(chunks, params, step_count, min_component)
        if status == _kernels.STATUS_STEP_UNDERFLOW:
            raise IntegrationError("step size underflow: tolerance cannot be met", t, partial)
        raise IntegrationError("step budget exhausted before reaching t_max", t, partial)

    return _assemble(chunks, params, step_count, min_component)


def _assemble(chunks, params, n_steps, min_component) -> Trajectory:
    data = np.concatenate(chunks) if chunks else np.empty((0, 4))
    return Trajectory(
        times=data[:, 0],
        states=data[:, 1:4],
        params=params,
        n_steps=n_steps,
        min_component=min_component,
    )


def write_trajectory_csv(traj: Trajectory, destination) -> None:
    """Write ``t,x,y,z`` rows at 17 significant digits."""
    own = isinstance(destination, (str, bytes)) or hasattr(destination, "__fspath__")
    handle = open(destination, "w") if own else destination
    try:
        handle.write("t,x,y,z\n")
        for t, (x, y, z) in zip(traj.times, traj.states):
            handle.write(f"{t:.17g},{x:.17g},{y:.17g},{z:.17g}\n")
    finally:
        if own:
            handle.close()


# ---------------------------------------------------------------------------
# Reduced two-variable dynamics and its conserved quantity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ReducedState:
    """Cooperator share among participants (f) and non-participant fraction (z)."""

    f: float
    z: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.f <= 1.0 or not 0.0 <= self.z <= 1.0:
            raise ValueError(f"reduced coordinates must lie in [0, 1], got ({self.f}, {self.z})")


@dataclass(frozen=True)
class HamiltonianValue:
    """Value of the conserved quantity of the zero-influence flow."""

    h: float


def to_reduced(state: SimplexState) -> ReducedState:
    """Project a simplex state to (participant cooperator share, abstainer fraction)."""
    participants = state.x + state.y
    if participants <= 0.0:
        raise ValueError("reduced coordinates are undefined without participants")
    return ReducedState(f=state.x / participants, z=state.z)


def reduced_field(params: GameParams, rs: ReducedState) -> tuple[float, float]:
    """Selection rates (df/dt, dz/dt) of the two-variable reduction.

    Valid in the interior of the unit square; mutation is ignored (the
    reduction assumes mu = 0).  The z-rate is the one consistent with the
    full simplex dynamics: the influence term enters as beta * z / (1 - z).
    """
    f, z = rs.f, rs.z
    if not (0.0 < f < 1.0 and 0.0 < z < 1.0):
        raise ValueError(f"reduced field needs an interior point, got ({f}, {z})")
    m, r = params.group_size, params.enhancement
    df = -f * (1.0 - f) * gap_kernel(m, r, z)
    dz = z * (1.0 - z) * (1.0 - z ** (m - 1)) * (
        params.alpha - (r - 1.0) * f - params.beta * z / (1.0 - z)
    )
    return df, dz


def _gap_over_boundary_factor(m: int, r: float, s: float) -> float:
    return gap_kernel(m, r, s) / (s * (1.0 - s) * (1.0 - s ** (m - 1)))


def hamiltonian(params: GameParams, rs: ReducedState) -> HamiltonianValue:
    """Conserved quantity of the reduced flow when beta = 0 and mu = 0.

    H(f, z) = U(z) + W(f) with W in closed form and U integrated numerically
    from the fixed reference point z = 1/2, so H is defined up to an
    additive constant.  Level sets of H are the orbits of the reduced flow,
    hence H is constant along trajectories; conservation requires
    2 < r < group_size and alpha < r - 1.
    """
    m, r = params.group_size, params.enhancement
    if params.beta != 0.0:
        raise ValueError("the conserved quantity exists only for beta = 0")
    if params.mu != 0.0:
        raise ValueError("the conserved quantity exists only for mu = 0")
    if not 2.0 < r < m:
        raise ValueError(f"requires 2 < r < group_size, got r={r}")
    if not params.alpha < r - 1.0:
        raise ValueError(f"requires alpha < r - 1, got alpha={params.alpha}")
    f, z = rs.f, rs.z
    if not (0.0 < f < 1.0 and 0.0 < z < 1.0):
        raise ValueError(f"interior point required, got ({f}, {z})")
    u_part, _ = quad(
        lambda s: _gap_over_boundary_factor(m, r, s), 0.5, z,
        epsabs=1e-13, epsrel=1e-12, limit=200,
    )
    w_part = params.alpha * math.log(f) + (r - 1.0 - params.alpha) * math.log(1.0 - f)
    return HamiltonianValue(h=u_part + w_part)


# ---------------------------------------------------------------------------
# Long-run classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClassifierControls:
    """Thresholds for the tail-window regime classifier."""

    tail_fraction: float = 0.2
    fixed_point_tol: float = 1e-7
    boundary_tol: float = 1e-9
    min_cycle_amplitude: float = 1e-5
    decay_ratio: float = 0.6
    min_crossings: int = 4


@dataclass(frozen=True)
class Classification:
    """Regime label plus the tail-averaged cooperation fraction."""

    regime: str
    f_c: float
    tail_variation: float
    amp_first_half: float
    amp_second_half: float
    crossings: int


def classify_long_run(traj: Trajectory, controls: ClassifierControls | None = None) -> Classification:
    """Label the long-run behavior from the trajectory tail.

    The tail window is the final ``tail_fraction`` share of the run.
    Checked in order: persistent boundary contact, stationarity, and
    non-decaying oscillation of the cooperator fraction; trajectories
    matching none of them are reported inconclusive rather than guessed.
    F_C is the time average of x over the tail (trapezoidal in t).
    """
    controls = controls or ClassifierControls()
    times = traj.times
    states = traj.states
    if times.size == 0:
        raise ValueError("trajectory has no recorded samples")
    t_end = times[-1]
    tail_start = (1.0 - controls.tail_fraction) * t_end
    mask = times >= tail_start - 1e-12 * max(1.0, t_end)
    t_tail = times[mask]
    x_tail = states[mask, 0]
    tail = states[mask]
    if t_tail.size == 0:
        raise ValueError("tail window contains no samples")

    if t_tail.size == 1:
        f_c = float(x_tail[0])
    else:
        f_c = float(np.trapezoid(x_tail, t_tail) / (t_tail[-1] - t_tail[0]))

    variation = float((tail.max(axis=0) - tail.min(axis=0)).max())
    amp = float(x_tail.max() - x_tail.min())

    mid = 0.5 * (t_tail[0] + t_tail[-1])
    first = x_tail[t_tail <= mid]
    second = x_tail[t_tail > mid]
    amp1 = float(first.max() - first.min()) if first.size else 0.0
    amp2 = float(second.max() - second.min()) if second.size else 0.0
    centered = x_tail - x_tail.mean()
    signs = np.sign(centered[np.abs(centered) > 0])
    crossings = int(np.count_nonzero(np.diff(signs) != 0)) if signs.size else 0

    if float(tail.min(axis=1).max()) < controls.boundary_tol:
        regime = REGIME_BOUNDARY
    elif variation < controls.fixed_point_tol:
        regime = REGIME_FIXED_POINT
    elif (
        crossings >= controls.min_crossings
        and amp2 >= controls.decay_ratio * amp1
        and amp2 >= controls.min_cycle_amplitude
    ):
        regime = REGIME_CYCLE
    else:
        regime = REGIME_INCONCLUSIVE

    return Classification(
        regime=regime,
        f_c=f_c,
        tail_variation=variation,
        amp_first_half=amp1,
        amp_second_half=amp2,
        crossings=crossings,
    )
