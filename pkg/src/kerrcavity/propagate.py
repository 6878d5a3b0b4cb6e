"""Fixed-step numerical propagation in the truncated Fock basis.

Three independent routes to the same physics live here: classical RK4 on
the Schrödinger equation for an arbitrary (time-dependent) Hermitian
generator, RK4 on the Wei-Norman coefficient ODEs, and a first-order
split-step realization of the su(1,1) product propagator.  Agreement
between them (and with the closed forms in ``analytic``) is the artifact's
main cross-validation.

No renormalization is ever applied during integration; norm drift is kept
as a free accuracy diagnostic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fock import (
    DenseOperator,
    FockVector,
    apply_pair_annihilation_exp,
    apply_pair_creation_exp,
)
from .model import ModelParams, drive_function

__all__ = [
    "TimeGrid",
    "TimeSeries",
    "Trajectory",
    "ConvergenceReport",
    "DivergenceError",
    "GeneratorError",
    "integrate_schrodinger",
    "riccati_integrate",
    "stepped_su11_propagator",
    "truncation_convergence",
    "photon_number_series",
    "norm_series",
    "stability_limited_dt",
]

GRID_RTOL = 1e-12
HERMITICITY_RTOL = 1e-12
CONVERGENCE_SUP = 1e-8
RICCATI_BLOWUP = 1e6

# |lambda| dt must stay inside the RK4 imaginary-axis stability interval
# (2*sqrt(2)); keep a safety margin.
RK4_STABILITY_MARGIN = 2.5


class DivergenceError(RuntimeError):
    """Amplitudes left the finite range; carries the offending step."""


class GeneratorError(ValueError):
    """Generator produced a non-Hermitian matrix at a sampled time."""


@dataclass(frozen=True)
class TimeGrid:
    """Uniform integration grid with an observable-sampling stride."""

    t_start: float
    t_end: float
    dt: float
    sample_stride: int = 1

    def __post_init__(self):
        if not self.t_end > self.t_start:
            raise ValueError("t_end must exceed t_start")
        if not 0 < self.dt <= (self.t_end - self.t_start):
            raise ValueError("dt must be positive and at most the span")
        if self.sample_stride < 1:
            raise ValueError("sample_stride must be >= 1")
        span = self.t_end - self.t_start
        steps = round(span / self.dt)
        if steps < 1 or abs(steps * self.dt - span) > GRID_RTOL * span:
            raise ValueError(
                "span must be an integer multiple of dt"
                f" (span={span}, dt={self.dt})"
            )
        object.__setattr__(self, "_n_steps", steps)

    @property
    def n_steps(self) -> int:
        return self._n_steps

    def time_at(self, step: int) -> float:
        return self.t_start + step * self.dt

    def sample_steps(self) -> list[int]:
        steps = list(range(0, self.n_steps + 1, self.sample_stride))
        if steps[-1] != self.n_steps:
            steps.append(self.n_steps)
        return steps


@dataclass(frozen=True)
class TimeSeries:
    """Sampled scalar observable with a label."""

    times: np.ndarray
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        times = np.asarray(self.times, dtype=np.float64)
        values = np.asarray(self.values)
        if times.shape != (values.shape[0],):
            raise ValueError("times and values must have equal length")
        if times.size > 1 and not np.all(np.diff(times) > 0):
            raise ValueError("times must be strictly increasing")
        times.setflags(write=False)
        values.setflags(write=False)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "values", values)

    def __len__(self) -> int:
        return self.times.size


@dataclass(frozen=True)
class Trajectory:
    """Sampled state trajectory: times[k] pairs with states[k]."""

    times: np.ndarray
    states: np.ndarray  # (n_samples, dim) complex

    def __post_init__(self):
        object.__setattr__(self, "times",
                           np.asarray(self.times, dtype=np.float64))
        object.__setattr__(self, "states",
                           np.asarray(self.states, dtype=np.complex128))

    @property
    def dim(self) -> int:
        return self.states.shape[1]

    def final_state(self) -> FockVector:
        return FockVector(self.states[-1])


GeneratorLike = Callable[[float], np.ndarray] | DenseOperator | np.ndarray


class _MatrixAction:
    """Adapter giving every generator form a matvec(t, psi, out) interface."""

    def __init__(self, generator: GeneratorLike):
        if hasattr(generator, "matvec") and hasattr(generator, "matrix"):
            self._action = generator
            self._of_t = None
        elif isinstance(generator, DenseOperator):
            self._action = None
            mat = generator.entries
            self._of_t = lambda t: mat
        elif isinstance(generator, np.ndarray):
            self._action = None
            mat = np.asarray(generator, dtype=np.complex128)
            self._of_t = lambda t: mat
        else:
            self._action = None
            self._of_t = generator
        self._cache_t: float | None = None
        self._cache: np.ndarray | None = None

    def matvec(self, t: float, psi: np.ndarray, out: np.ndarray) -> np.ndarray:
        if self._action is not None:
            return self._action.matvec(t, psi, out)
        if self._cache_t != t:
            # builder closures may reuse a buffer; consecutive equal-t calls
            # (the two RK4 midpoint stages) reuse the cached reference
            self._cache = np.asarray(self._of_t(t))
            self._cache_t = t
        return np.matmul(self._cache, psi, out=out)

    def matrix(self, t: float) -> np.ndarray:
        if self._action is not None:
            return np.asarray(self._action.matrix(t))
        return np.asarray(self._of_t(t))


def _check_hermitian(mat: np.ndarray, t: float) -> None:
    scale = np.max(np.abs(mat))
    if scale == 0.0:
        return
    resid = np.max(np.abs(mat - mat.conj().T))
    if resid > HERMITICITY_RTOL * scale:
        raise GeneratorError(
            f"generator non-Hermitian at t={t:.6g}:"
            f" residual {resid:.3g} (scale {scale:.3g})"
        )


def integrate_schrodinger(generator: GeneratorLike, state0: FockVector,
                          grid: TimeGrid,
                          check_generator: bool = True) -> Trajectory:
    """Classical RK4 on d|psi>/dt = -i H(t) |psi> with fixed step.

    The generator is re-evaluated at t, t + dt/2 and t + dt each step (the
    midpoint matrix is shared by the two inner stages).  States are recorded
    every ``sample_stride`` steps; the final step is always included.
    Hermiticity of the generator and finiteness of the state are verified at
    sampled times only, to keep the per-step cost at four matrix-vector
    products.

    Raises
    ------
    DivergenceError
        If amplitudes become non-finite; the message names the step.
    GeneratorError
        If a sampled generator matrix fails the Hermiticity check.
    """
    action = _MatrixAction(generator)
    dim = state0.dim
    dt = grid.dt
    psi = state0.amplitudes.astype(np.complex128).copy()

    sample_at = grid.sample_steps()
    sample_set = set(sample_at)
    times = np.array([grid.time_at(s) for s in sample_at])
    states = np.empty((len(sample_at), dim), dtype=np.complex128)

    if check_generator:
        _check_hermitian(action.matrix(grid.t_start), grid.t_start)
    states[0] = psi
    out_idx = 1

    k1 = np.empty(dim, np.complex128)
    k2 = np.empty(dim, np.complex128)
    k3 = np.empty(dim, np.complex128)
    k4 = np.empty(dim, np.complex128)

    # overflow is handled explicitly by the divergence check at samples
    with np.errstate(over="ignore", invalid="ignore"):
        for step in range(grid.n_steps):
            t = grid.time_at(step)
            t_mid = t + 0.5 * dt
            t_end = t + dt
            action.matvec(t, psi, k1)
            k1 *= -1j
            action.matvec(t_mid, psi + (0.5 * dt) * k1, k2)
            k2 *= -1j
            action.matvec(t_mid, psi + (0.5 * dt) * k2, k3)
            k3 *= -1j
            action.matvec(t_end, psi + dt * k3, k4)
            k4 *= -1j
            psi += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)

            done = step + 1
            if done in sample_set:
                if not np.all(np.isfinite(psi)):
                    raise DivergenceError(
                        f"non-finite amplitudes at step {done}"
                        f" (t={grid.time_at(done):.6g})"
                    )
                if check_generator:
                    _check_hermitian(action.matrix(t_end), t_end)
                states[out_idx] = psi
                out_idx += 1

    return Trajectory(times, states)


def riccati_integrate(p: ModelParams, grid: TimeGrid
                      ) -> tuple[TimeSeries, TimeSeries, TimeSeries]:
    """RK4 integration of the Wei-Norman coefficient system.

    alpha' = -i [f - K alpha + f* alpha²]   (Riccati equation)
    beta'  = -i [-K + 2 f* alpha]
    gamma' = -i f* e^{beta}

    starting from alpha = beta = gamma = 0, which requires the grid to
    start at t = 0.  Returns the three sampled trajectories.
    """
    if abs(grid.t_start) > 0.0:
        raise ValueError("Wei-Norman initial conditions require t_start = 0")
    kerr = p.kerr

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        alpha, beta, _ = y
        f = drive_function(p, t)
        fc = np.conj(f)
        return np.array([
            -1j * (f - kerr * alpha + fc * alpha * alpha),
            -1j * (-kerr + 2.0 * fc * alpha),
            -1j * fc * np.exp(beta),
        ])

    dt = grid.dt
    y = np.zeros(3, dtype=np.complex128)
    sample_at = grid.sample_steps()
    sample_set = set(sample_at)
    times = np.array([grid.time_at(s) for s in sample_at])
    values = np.empty((len(sample_at), 3), dtype=np.complex128)
    values[0] = y
    out_idx = 1

    for step in range(grid.n_steps):
        t = grid.time_at(step)
        k1 = rhs(t, y)
        k2 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k1)
        k3 = rhs(t + 0.5 * dt, y + (0.5 * dt) * k2)
        k4 = rhs(t + dt, y + dt * k3)
        y = y + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        if abs(y[0]) > RICCATI_BLOWUP:
            raise DivergenceError(
                f"|alpha| = {abs(y[0]):.3g} at t = {grid.time_at(step + 1):.6g}"
            )
        if step + 1 in sample_set:
            values[out_idx] = y
            out_idx += 1

    return tuple(
        TimeSeries(times, values[:, i].copy(), label)
        for i, label in enumerate(("alpha", "beta", "gamma"))
    )


def stepped_su11_propagator(p: ModelParams, grid: TimeGrid,
                            state0: FockVector) -> Trajectory:
    """Split-step product propagator for the su(1,1) interaction generator.

    Each step applies, right to left,

        e^{-i dt f*(t_l) L-}  then  e^{i dt K L0}  then  e^{-i dt f(t_l) L+},

    a first-order realization of the short-time factorized evolution
    operator.  The pair exponentials are the same finite series used by the
    analytic propagator; the L0 factor is an exact diagonal phase.
    """
    if state0.dim != p.dim:
        raise ValueError(
            f"dimension mismatch: params {p.dim}, state {state0.dim}"
        )
    dim = p.dim
    dt = grid.dt
    n = np.arange(dim, dtype=np.float64)
    # L0 = (n + 1/2)/2 on the diagonal
    l0_phase = np.exp(1j * dt * p.kerr * 0.5 * (n + 0.5))

    psi = state0.amplitudes.astype(np.complex128).copy()
    sample_at = grid.sample_steps()
    sample_set = set(sample_at)
    times = np.array([grid.time_at(s) for s in sample_at])
    states = np.empty((len(sample_at), dim), dtype=np.complex128)
    states[0] = psi
    out_idx = 1

    for step in range(grid.n_steps):
        f = drive_function(p, grid.time_at(step))
        # L- = a²/2 and L+ = a†²/2
        psi = apply_pair_annihilation_exp(psi, -0.5j * dt * np.conj(f))
        psi *= l0_phase
        psi = apply_pair_creation_exp(psi, -0.5j * dt * f)
        if step + 1 in sample_set:
            if not np.all(np.isfinite(psi)):
                raise DivergenceError(
                    f"non-finite amplitudes at step {step + 1}"
                    f" (t={grid.time_at(step + 1):.6g})"
                )
            states[out_idx] = psi
            out_idx += 1

    return Trajectory(times, states)


def photon_number_series(traj: Trajectory) -> TimeSeries:
    """<a†a> at every sample; exactly real by construction."""
    if traj.states.shape[0] == 0:
        raise ValueError("trajectory is empty")
    n = np.arange(traj.dim, dtype=np.float64)
    values = np.abs(traj.states) ** 2 @ n
    return TimeSeries(traj.times, values, "n_mean")


def norm_series(traj: Trajectory) -> TimeSeries:
    """State norm at every sample (integrator drift diagnostic)."""
    values = np.linalg.norm(traj.states, axis=1)
    return TimeSeries(traj.times, values, "norm")


@dataclass(frozen=True)
class ConvergenceReport:
    """Truncation ladder: sup-norm <N> deviation of each dim vs the largest."""

    dims: tuple[int, ...]
    sup_deviation: tuple[float, ...]  # vs the largest dim; last entry is 0
    converged: bool
    threshold: float = CONVERGENCE_SUP

    def __str__(self):
        lines = [
            f"  dim {d:5d}: sup|<N> - <N>_{self.dims[-1]}| = {s:.3e}"
            for d, s in zip(self.dims, self.sup_deviation)
        ]
        status = "converged" if self.converged else "NOT converged"
        return (f"truncation ladder ({status} at {self.threshold:.0e}):\n"
                + "\n".join(lines))


def truncation_convergence(
    make_run: Callable[[int], tuple[GeneratorLike, FockVector]],
    grid: TimeGrid,
    dims: Sequence[int],
    threshold: float = CONVERGENCE_SUP,
) -> ConvergenceReport:
    """Repeat a run over increasing truncation dimensions.

    ``make_run(dim)`` must return the (generator, initial state) pair for
    that dimension.  The run is declared converged when the final doubling
    (second-largest vs largest dim) changes the photon-number series by
    less than ``threshold`` in sup norm.
    """
    dims = tuple(sorted(dims))
    if len(dims) < 2:
        raise ValueError("need at least two dims")
    series = []
    for dim in dims:
        generator, state0 = make_run(dim)
        traj = integrate_schrodinger(generator, state0, grid)
        series.append(photon_number_series(traj).values)
    ref = series[-1]
    sups = tuple(float(np.max(np.abs(s - ref))) for s in series)
    return ConvergenceReport(dims, sups, sups[-2] < threshold, threshold)


def stability_limited_dt(p: ModelParams, dim: int, dt_request: float) -> float:
    """Largest dt of the form dt_request / 2^m inside the RK4 stability disc.

    Classical RK4 is stable on the imaginary axis only for |lambda| dt
    below 2*sqrt(2); the spectral radius of the lab-frame generator grows
    like w0 dim + (K/2) dim², so large-K or large-dim runs must shrink the
    step.  Unoccupied top modes still amplify roundoff exponentially when
    the bound is violated, so this is a hard requirement, not an accuracy
    tuning knob.
    """
    n_top = dim - 1
    omega_max = p.omega0 * (1.0 + p.epsilon)
    lam = (omega_max * n_top + 0.5 * p.kerr * n_top * (n_top - 1)
           + 2.0 * p.g * dim)
    dt = dt_request
    while lam * dt > RK4_STABILITY_MARGIN:
        dt *= 0.5
    return dt
