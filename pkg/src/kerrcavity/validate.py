"""Invariant and acceptance checks shared by the CLI and the test suite.

Every check returns a :class:`CheckResult` with a measured detail string,
so the ``validate`` subcommand prints one line per check and the pytest
acceptance module asserts the same facts.  Heavy preset integrations are
computed once per process and memoized; ``warm_cache`` distributes them
over a small process pool.

Three checks carry validation targets that measurement shows to be
physically unattainable as stated (the pinned dim-256 empty-cavity
tolerance, the 50% saturation drop for the smallest Kerr values inside
the t <= 60 window, and truncation convergence of the exponential-growth
runs at desk-scale dimensions).  They are implemented faithfully, fail
honestly, and the README records the measured analysis.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.signal import savgol_filter

from .analytic import (
    classify_regime,
    displacement_factorization_check,
    kerr_evolved_coherent,
    phi_coeffs,
    su11_eigenvalue,
    vacuum_photon_number,
    wei_norman_coeffs,
    yurke_stoler_state,
)
from .fock import coherent_state, fidelity, vacuum_state
from .model import (
    ModelParams,
    full_hamiltonian_builder,
    hamiltonian_interaction_tilde,
    hamiltonian_rwa,
    interaction_exact_builder,
)
from .propagate import (
    TimeGrid,
    integrate_schrodinger,
    norm_series,
    photon_number_series,
    riccati_integrate,
    stability_limited_dt,
    stepped_su11_propagator,
)
from .runs import PRESETS, default_dim, PRESET_DT, PRESET_STRIDE, PRESET_TMAX

__all__ = [
    "CheckResult",
    "run_checks",
    "preset_series",
    "warm_cache",
    "preset_plan",
    "moving_average_valid",
    "detrended_band_amplitude",
    "FIG1_KERR",
    "FIG2_KERR",
]

FIG1_KERR = PRESETS["figure1"]["kerr"]
FIG2_KERR = PRESETS["figure2"]["kerr"]

MICRO_PERIOD = math.pi / 2.0  # one cycle of the 4 w0 micro-oscillation


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def status_line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] {self.name}: {self.detail}"


# ---------------------------------------------------------------------------
# signal helpers

def moving_average_valid(times: np.ndarray, values: np.ndarray,
                         period: float) -> tuple[np.ndarray, np.ndarray]:
    """Centered moving average over one period; only fully-covered samples.

    Returns the trimmed time axis and the averaged values.  Applying the
    same filter to both curves of a comparison cancels the curvature bias
    (P²/24) f'' that a one-sided comparison would count as disagreement.
    """
    dt = float(times[1] - times[0])
    half = int(round(period / (2.0 * dt)))
    if half < 1 or 2 * half + 1 > len(values):
        raise ValueError("period does not fit the sampled series")
    kernel = np.full(2 * half + 1, 1.0 / (2 * half + 1))
    smooth = np.convolve(values, kernel, mode="valid")
    return times[half:len(times) - half], smooth


def detrended_band_amplitude(times: np.ndarray, values: np.ndarray,
                             omegas: np.ndarray, order: int = 6,
                             window: float = MICRO_PERIOD) -> np.ndarray:
    """Hann-windowed demodulation amplitude after local-polynomial detrend.

    A Savitzky-Golay fit (exact on smooth secular trends) is subtracted
    first so that slow growth does not leak into the oscillation bands;
    half a fit window is trimmed from each edge.
    """
    dt = float(times[1] - times[0])
    win = int(round(window / dt)) | 1
    trend = savgol_filter(values, win, order)
    resid = values - trend
    h = win // 2
    t, d = times[h:len(times) - h], resid[h:len(resid) - h]
    w = np.hanning(len(t))
    wsum = float(np.sum(w))
    return np.array(
        [2.0 * abs(np.sum(w * d * np.exp(-1j * om * t))) / wsum
         for om in omegas])


# ---------------------------------------------------------------------------
# preset-run cache

_CACHE: dict = {}


def _compute_series(figure: str, kerr: float, method: str,
                    dim: int) -> tuple[np.ndarray, np.ndarray]:
    """(times, <N> values) of one preset series at an explicit dimension."""
    p = ModelParams(1.0, 0.1, kerr, dim)
    dt = stability_limited_dt(p, dim, PRESET_DT)
    factor = int(round(PRESET_DT / dt))
    grid = TimeGrid(0.0, PRESET_TMAX, dt, PRESET_STRIDE * factor)
    state0 = vacuum_state(dim)
    if method == "full":
        traj = integrate_schrodinger(full_hamiltonian_builder(p), state0,
                                     grid, check_generator=False)
    elif method == "rwa":
        traj = integrate_schrodinger(hamiltonian_rwa(p), state0, grid,
                                     check_generator=False)
    else:
        raise ValueError(f"unexpected preset method {method!r}")
    ns = photon_number_series(traj)
    return ns.times, ns.values


def preset_series(figure: str, kerr: float, method: str,
                  doubled: bool = False) -> tuple[np.ndarray, np.ndarray]:
    """Cached preset series at the declared (or doubled) dimension."""
    dim = default_dim(1.0, 0.1, kerr, PRESET_TMAX)
    if doubled:
        dim *= 2
    key = (figure, kerr, method, dim)
    if key not in _CACHE:
        _CACHE[key] = _compute_series(figure, kerr, method, dim)
    return _CACHE[key]


def preset_plan(include_doubled: bool = True) -> list[tuple]:
    """All (figure, kerr, method, doubled) series the slow checks consume."""
    plan = []
    for figure in ("figure1", "figure2"):
        for kerr in PRESETS[figure]["kerr"]:
            for method in PRESETS[figure]["methods"]:
                if method == "analytic":
                    continue
                plan.append((figure, kerr, method, False))
                if include_doubled:
                    plan.append((figure, kerr, method, True))
    return plan


def _cache_worker(args):
    figure, kerr, method, doubled = args
    dim = default_dim(1.0, 0.1, kerr, PRESET_TMAX)
    if doubled:
        dim *= 2
    times, values = _compute_series(figure, kerr, method, dim)
    return (figure, kerr, method, dim), times, values


def warm_cache(plan: list[tuple] | None = None, workers: int = 2) -> None:
    """Fill the preset cache, distributing runs over a process pool."""
    if plan is None:
        plan = preset_plan()
    todo = []
    for figure, kerr, method, doubled in plan:
        dim = default_dim(1.0, 0.1, kerr, PRESET_TMAX)
        if doubled:
            dim *= 2
        if (figure, kerr, method, dim) not in _CACHE:
            todo.append((figure, kerr, method, doubled))
    if not todo:
        return
    if workers > 1 and len(todo) > 1:
        # biggest dimensions first so the pool tail stays short
        todo.sort(key=lambda job: -default_dim(1.0, 0.1, job[1], PRESET_TMAX))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for key, times, values in pool.map(_cache_worker, todo):
                _CACHE[key] = (times, values)
    else:
        for job in todo:
            key, times, values = _cache_worker(job)
            _CACHE[key] = (times, values)


# ---------------------------------------------------------------------------
# fast checks

def check_ladder_algebra() -> CheckResult:
    from .fock import build_annihilation

    dim = 64
    a = build_annihilation(dim).entries
    adag = a.conj().T
    comm = a @ adag - adag @ a
    resid = float(np.max(np.abs(np.diag(comm)[: dim - 1] - 1.0)))
    n_op = adag @ a
    kerr_resid = float(np.max(np.abs(adag @ adag @ a @ a
                                     - (n_op @ n_op - n_op))))
    ok = resid <= 1e-12 and kerr_resid <= 1e-12 * dim * dim
    return CheckResult("ladder-algebra", ok,
                       f"[a,a†]-1 residual {resid:.2e},"
                       f" a†²a² identity residual {kerr_resid:.2e}")


def check_coherent_states() -> CheckResult:
    st = coherent_state(1.0, 30)
    norm_err = abs(st.norm() - 1.0)
    n_err = abs(st.photon_number() - 1.0)
    fid = fidelity(coherent_state(1.0, 30), coherent_state(-1.0, 30))
    fid_err = abs(fid - math.exp(-4.0))
    ok = norm_err <= 1e-12 and n_err <= 1e-10 and fid_err <= 1e-12
    return CheckResult("coherent-states", ok,
                       f"norm err {norm_err:.2e}, <N> err {n_err:.2e},"
                       f" overlap err {fid_err:.2e}")


def check_squeeze_law() -> CheckResult:
    from .analytic import empty_cavity_squeeze_check

    errs = [abs(empty_cavity_squeeze_check(0.5, 64) - math.sinh(0.5) ** 2),
            abs(empty_cavity_squeeze_check(1.0, 128) - math.sinh(1.0) ** 2)]
    ok = errs[0] <= 1e-8 and errs[1] <= 1e-8
    return CheckResult("bogoliubov-squeeze-law", ok,
                       f"r=0.5@64 err {errs[0]:.2e}, r=1@128 err {errs[1]:.2e}")


def check_hamiltonian_invariants() -> CheckResult:
    from .model import hamiltonian_full, squeezing_rate

    p = ModelParams(1.0, 0.1, 0.3, 32)
    herm = 0.0
    period_resid = 0.0
    for t in (0.0, 0.37, 1.9, 5.0):
        for mode in ("exact", "approximate"):
            h = hamiltonian_full(p, t, mode)
            herm = max(herm, h.hermiticity_residual())
            h2 = hamiltonian_full(p, t + math.pi / p.omega0, mode)
            period_resid = max(period_resid,
                               float(np.max(np.abs(h.entries - h2.entries))))
    chi_gap = max(abs(squeezing_rate(p, t, "exact")
                      - squeezing_rate(p, t, "approximate"))
                  for t in np.linspace(0.0, 2 * math.pi, 2001))
    bound = p.epsilon ** 2 * p.omega0 / 2
    ok = herm <= 1e-12 and period_resid <= 1e-12 and chi_gap <= bound
    return CheckResult("hamiltonian-invariants", ok,
                       f"hermiticity {herm:.2e}, periodicity {period_resid:.2e},"
                       f" chi modes gap {chi_gap:.2e} <= {bound:.2e}")


def check_three_regimes() -> CheckResult:
    # acceptance criterion 2: K=0 monotone convex, critical g²t²,
    # trigonometric peak 1/3 and zeros m pi/eta
    p0 = ModelParams(1.0, 0.1, 0.0, 2)
    ts = np.linspace(0.0, 40.0, 2001)
    n0 = np.array([vacuum_photon_number(p0, float(t)) for t in ts])
    monotone = bool(np.all(np.diff(n0) > 0))
    convex = bool(np.all(np.diff(n0, 2) > -1e-15))

    pc = ModelParams(1.0, 0.1, 0.1, 2)
    crit_err = max(abs(vacuum_photon_number(pc, t) - pc.g ** 2 * t * t)
                   for t in (0.5, 10.0, 20.0))

    pt = ModelParams(1.0, 0.1, 0.2, 2)
    eta = classify_regime(pt).eta
    peak_err = abs(vacuum_photon_number(pt, math.pi / (2 * eta)) - 1.0 / 3.0)
    zero_max = max(vacuum_photon_number(pt, m * math.pi / eta)
                   for m in (1, 2, 3))
    ok = (monotone and convex and crit_err <= 1e-12 * 0.25
          and peak_err <= 1e-12 and zero_max <= 1e-10)
    return CheckResult("three-regimes", ok,
                       f"K=0 monotone/convex {monotone}/{convex}, critical"
                       f" err {crit_err:.2e}, peak err {peak_err:.2e},"
                       f" zeros max {zero_max:.2e}")


def check_riccati_oracle() -> CheckResult:
    # acceptance criterion 5: closed forms vs integrated ODE system
    sup = 0.0
    for kerr in FIG1_KERR:
        p = ModelParams(1.0, 0.1, kerr, 2)
        grid = TimeGrid(0.0, 20.0, 1e-3, 200)
        alpha, beta, gamma = riccati_integrate(p, grid)
        for i, t in enumerate(alpha.times):
            w = wei_norman_coeffs(p, float(t))
            sup = max(sup, abs(alpha.values[i] - w.alpha),
                      abs(beta.values[i] - w.beta),
                      abs(gamma.values[i] - w.gamma))
    p = ModelParams(1.0, 0.1, 0.2, 2)
    errs = []
    for dt in (4e-2, 2e-2):
        grid = TimeGrid(0.0, 20.0, dt, int(round(20.0 / dt)))
        alpha, _, _ = riccati_integrate(p, grid)
        errs.append(abs(alpha.values[-1] - wei_norman_coeffs(p, 20.0).alpha))
    ratio = errs[0] / errs[1]
    ok = sup <= 1e-8 and 12.0 <= ratio <= 20.0
    return CheckResult("riccati-oracle", ok,
                       f"sup dev {sup:.2e} <= 1e-8, halving ratio {ratio:.1f}")


def check_phi_identities() -> CheckResult:
    # acceptance criterion 6 at 100 seeded random points
    rng = np.random.default_rng(20160316)
    worst_conj = worst_imag = worst_phi4 = 0.0
    for _ in range(100):
        kerr = float(rng.uniform(0.0, 0.5))
        t = float(rng.uniform(0.0, 20.0))
        p = ModelParams(1.0, 0.1, kerr, 2)
        w = wei_norman_coeffs(p, t)
        exp_neg_beta = np.exp(-w.beta)
        phi2 = 1.0 - 2.0 * w.alpha * w.gamma * exp_neg_beta
        phi4 = -w.alpha * w.gamma * exp_neg_beta
        phi = phi_coeffs(p, t)
        worst_conj = max(worst_conj, abs(phi.phi1 - np.conj(phi.phi3))
                         / (1.0 + abs(phi.phi1)))
        worst_imag = max(worst_imag, abs(phi2.imag), abs(phi4.imag))
        worst_phi4 = max(worst_phi4,
                         abs(phi.phi4 - vacuum_photon_number(p, t)))
    ok = worst_conj <= 1e-10 and worst_imag <= 1e-10 and worst_phi4 <= 1e-10
    return CheckResult("phi-hermiticity", ok,
                       f"|phi1-phi3*| {worst_conj:.2e}, imag {worst_imag:.2e},"
                       f" phi4 vs law {worst_phi4:.2e}")


def check_kerr_cat() -> CheckResult:
    # acceptance criterion 7
    kerr = 0.5
    cat = kerr_evolved_coherent(1.0, kerr, math.pi / kerr, 30)
    fid_cat = fidelity(cat, yurke_stoler_state(1.0, 30))
    revived = kerr_evolved_coherent(1.0, kerr, 2 * math.pi / kerr, 30)
    fid_rev = fidelity(revived, coherent_state(1.0, 30))
    ok = fid_cat >= 1.0 - 1e-10 and fid_rev >= 1.0 - 1e-12
    return CheckResult("kerr-cat-state", ok,
                       f"cat fidelity 1-{1.0 - fid_cat:.2e},"
                       f" revival 1-{1.0 - fid_rev:.2e}")


def check_su11_spectrum() -> CheckResult:
    # acceptance criterion 8
    p = ModelParams(1.0, 0.1, 0.5, 256)
    h = hamiltonian_interaction_tilde(p, 0.0).entries
    evals = np.sort(np.linalg.eigvalsh(h))[::-1]
    eig_err = max(abs(evals[n] - su11_eigenvalue(p, n)) for n in range(5))
    resid = max(displacement_factorization_check(p, t, 256, n_max=64)
                for t in (0.0, 1.0))
    ok = eig_err <= 1e-6 and resid <= 1e-6
    return CheckResult("su11-spectrum", ok,
                       f"eigenvalue err {eig_err:.2e},"
                       f" displacement residual {resid:.2e}")


def check_factorized_propagator() -> CheckResult:
    from .analytic import apply_factorized_propagator

    worst = 0.0
    worst_norm = 0.0
    for kerr in FIG1_KERR:
        p = ModelParams(1.0, 0.1, kerr, 96)
        out = apply_factorized_propagator(p, 12.0, vacuum_state(96))
        worst = max(worst, abs(out.photon_number() - phi_coeffs(p, 12.0).phi4))
        worst_norm = max(worst_norm, abs(out.norm() - 1.0))
    ok = worst <= 1e-8 and worst_norm <= 1e-6
    return CheckResult("factorized-propagator", ok,
                       f"<N> vs phi4 {worst:.2e}, norm dev {worst_norm:.2e}")


def check_method_equivalence() -> CheckResult:
    # RK4 on the interaction generator, split-step su(1,1) and the analytic
    # law agree; first-order splitting constant measured at ~2e-4 for the
    # strongest-growth set at dt = 1e-3
    worst = 0.0
    for kerr in (0.0, 0.2, 0.5):
        p = ModelParams(1.0, 0.1, kerr, 64)
        grid = TimeGrid(0.0, 20.0, 1e-3, 200)
        stepped = photon_number_series(
            stepped_su11_propagator(p, grid, vacuum_state(64)))
        rk4 = photon_number_series(integrate_schrodinger(
            lambda t, _p=p: hamiltonian_interaction_tilde(_p, t).entries,
            vacuum_state(64), grid, check_generator=False))
        analytic = np.array([vacuum_photon_number(p, float(t))
                             for t in stepped.times])
        worst = max(worst,
                    float(np.max(np.abs(stepped.values - rk4.values))),
                    float(np.max(np.abs(rk4.values - analytic))),
                    float(np.max(np.abs(stepped.values - analytic))))
    ok = worst <= 2.5e-4
    return CheckResult("method-equivalence", ok,
                       f"max pairwise <N> deviation {worst:.2e} <= 2.5e-4")


def check_frame_equivalence() -> CheckResult:
    p = ModelParams(1.0, 0.1, 0.2, 64)
    grid = TimeGrid(0.0, 10.0, 1e-3, 100)
    lab = photon_number_series(integrate_schrodinger(
        full_hamiltonian_builder(p), vacuum_state(64), grid,
        check_generator=False))
    rot = photon_number_series(integrate_schrodinger(
        interaction_exact_builder(p), vacuum_state(64), grid,
        check_generator=False))
    dev = float(np.max(np.abs(lab.values - rot.values)))
    return CheckResult("frame-equivalence", dev <= 1e-6,
                       f"lab vs interaction frame <N> dev {dev:.2e}")


def check_norm_drift() -> CheckResult:
    worst = 0.0
    for kerr, dim in ((0.0, 64), (0.2, 64), (0.5, 48)):
        p = ModelParams(1.0, 0.1, kerr, dim)
        dt = stability_limited_dt(p, dim, 1e-3)
        grid = TimeGrid(0.0, 40.0, dt, 1000)
        traj = integrate_schrodinger(full_hamiltonian_builder(p),
                                     vacuum_state(dim), grid,
                                     check_generator=False)
        worst = max(worst,
                    float(np.max(np.abs(norm_series(traj).values - 1.0))))
    return CheckResult("rk4-norm-drift", worst < 1e-7,
                       f"max drift over t<=40: {worst:.2e}")


# ---------------------------------------------------------------------------
# slow checks (acceptance criteria backed by long integrations)

def check_empty_cavity_pinned() -> CheckResult:
    """Criterion 1 exactly as pinned: dim=256, t in [0, 40], rel err 1e-6.

    Known-unattainable target: the dim-256 truncation floor is ~5e-5
    relative at t = 40 (squeezed occupation reaches <N> ~ 13, whose Fock
    tail passes n = 256); no integrator can beat it.  Kept faithful and
    failing; see the README defect notes.
    """
    p = ModelParams(1.0, 0.1, 0.0, 256)
    grid = TimeGrid(0.0, 40.0, 1e-3, 100)
    ns = photon_number_series(integrate_schrodinger(
        hamiltonian_rwa(p), vacuum_state(256), grid, check_generator=False))
    exact = np.sinh(0.05 * ns.times) ** 2
    rel = float(np.max(np.abs(ns.values[1:] - exact[1:]) / exact[1:]))
    return CheckResult("empty-cavity-rwa-dim256-pinned", rel <= 1e-6,
                       f"max rel err {rel:.2e} (tolerance 1e-6; truncation"
                       " floor of the pinned dim, see notes)")


def check_empty_cavity_dim512() -> CheckResult:
    """Same law at dim 512: the 1e-6 tolerance is met with margin."""
    p = ModelParams(1.0, 0.1, 0.0, 512)
    grid = TimeGrid(0.0, 40.0, 1e-3, 100)
    ns = photon_number_series(integrate_schrodinger(
        hamiltonian_rwa(p), vacuum_state(512), grid, check_generator=False))
    exact = np.sinh(0.05 * ns.times) ** 2
    rel = float(np.max(np.abs(ns.values[1:] - exact[1:]) / exact[1:]))
    return CheckResult("empty-cavity-rwa-dim512", rel <= 1e-6,
                       f"max rel err {rel:.2e} <= 1e-6")


def _short_time_deviation(kerr: float) -> tuple[float, float]:
    """Max relative gap between filtered full <N> and the closed-form law
    on the early interval (law <= 0.05 and t <= T_K/10)."""
    p = ModelParams(1.0, 0.1, kerr, 64)
    dt = stability_limited_dt(p, 64, 1e-3)
    eta = classify_regime(p).eta
    amp = (p.g / eta) ** 2
    t_level = (math.inf if amp <= 0.05
               else math.asin(math.sqrt(0.05 / amp)) / eta)
    t_hi = min(2 * math.pi / kerr / 10.0, t_level)
    tmax = math.ceil((t_hi + MICRO_PERIOD) / dt) * dt
    stride = max(1, int(round(0.01 / dt)))
    grid = TimeGrid(0.0, tmax, dt, stride)
    ns = photon_number_series(integrate_schrodinger(
        full_hamiltonian_builder(p), vacuum_state(64), grid,
        check_generator=False))
    law = np.array([vacuum_photon_number(p, float(t)) for t in ns.times])
    t_f, num_f = moving_average_valid(ns.times, ns.values, MICRO_PERIOD)
    _, law_f = moving_average_valid(ns.times, law, MICRO_PERIOD)
    sel = t_f <= t_hi
    rel = np.abs(num_f[sel] - law_f[sel]) / law_f[sel]
    return float(np.max(rel)), t_hi


def check_short_time_agreement() -> CheckResult:
    """Criterion 3: filtered full-Hamiltonian <N> within 15% of the law."""
    details = []
    worst = 0.0
    for kerr in FIG1_KERR[1:]:
        rel, t_hi = _short_time_deviation(kerr)
        worst = max(worst, rel)
        details.append(f"K={kerr}: {100 * rel:.1f}% (t<={t_hi:.2f})")
    return CheckResult("short-time-agreement", worst <= 0.15,
                       "; ".join(details))


def check_micro_oscillations() -> CheckResult:
    """Criterion 4: 4 w0 line present in full-vs-RWA, absent in RWA."""
    p = ModelParams(1.0, 0.1, 0.0, 256)
    grid = TimeGrid(0.0, 20.0, 1e-3, 10)
    full = photon_number_series(integrate_schrodinger(
        full_hamiltonian_builder(p), vacuum_state(256), grid,
        check_generator=False))
    rwa = photon_number_series(integrate_schrodinger(
        hamiltonian_rwa(p), vacuum_state(256), grid, check_generator=False))
    omegas = np.arange(0.5, 8.0, 0.025)
    spec_diff = detrended_band_amplitude(full.times,
                                         full.values - rwa.values, omegas)
    peak_omega = float(omegas[int(np.argmax(spec_diff))])
    band = (omegas >= 3.6) & (omegas <= 4.4)
    rwa_band = float(np.max(detrended_band_amplitude(
        rwa.times, rwa.values, omegas[band])))
    ok = 3.6 <= peak_omega <= 4.4 and rwa_band <= 1e-8
    return CheckResult("rwa-micro-oscillations", ok,
                       f"difference peak at omega={peak_omega:.3f},"
                       f" rwa band amplitude {rwa_band:.2e} <= 1e-8")


def check_saturation_phenomenology() -> CheckResult:
    """Criterion 9 on the figure-2 preset, faithful to the stated window.

    Known-unattainable target for the smallest K: the saturation time
    scale diverges as K -> 0, so for the smallest values the turnover
    lies beyond t = 60 and the 50% decrease cannot occur inside the
    window.  Measured drops are reported per K; see the README notes.
    """
    period = MICRO_PERIOD
    details = []
    ok = True
    for kerr in FIG2_KERR:
        times, values = preset_series("figure2", kerr, "full")
        t_f, smooth = moving_average_valid(times, values, period)
        if kerr == 0.0:
            monotone = bool(np.all(np.diff(smooth) > -1e-12))
            ok &= monotone
            details.append(f"K=0 monotone:{monotone}")
            continue
        imax = int(np.argmax(smooth))
        peak = float(smooth[imax])
        trough = float(np.min(smooth[imax:]))
        drop = 1.0 - trough / peak
        ok &= drop >= 0.5
        details.append(f"K={kerr}: peak {peak:.3g}@t={t_f[imax]:.0f},"
                       f" drop {100 * drop:.0f}%")
    freq = []
    for kerr in (0.25, 0.45):
        times, values = preset_series("figure2", kerr, "full")
        t_f, smooth = moving_average_valid(times, values, period)
        omegas = np.arange(0.02, 1.5, 0.005)
        spectrum = detrended_band_amplitude(t_f, smooth, omegas, order=2,
                                        window=10.0)
        freq.append(float(omegas[int(np.argmax(spectrum))]))
    ok &= freq[1] > freq[0]
    details.append(f"osc freq 0.25/0.45: {freq[0]:.3f}/{freq[1]:.3f}")
    return CheckResult("saturation-phenomenology", bool(ok),
                       "; ".join(details))


def check_dim_doubling() -> CheckResult:
    """Criterion 10 (convergence half) on every reported numeric series.

    Bounded (trigonometric and Kerr-saturated) runs are converged well
    below 1e-8, and every K > 0 run qualifies; the K = 0 exponential-growth
    runs cannot converge at any desk-scale dimension by t = 60
    (documented defect) and report their measured doubling gaps.
    """
    details = []
    ok = True
    for figure, kerr, method, doubled in preset_plan(include_doubled=False):
        _, base = preset_series(figure, kerr, method)
        _, double = preset_series(figure, kerr, method, doubled=True)
        gap = float(np.max(np.abs(base - double)))
        converged = gap < 1e-8
        ok &= converged
        tag = f"{figure}/K={kerr}/{method}"
        details.append(f"{tag}: {gap:.1e}")
    return CheckResult("dim-doubling-convergence", bool(ok),
                       "; ".join(details))


def check_preset_determinism() -> CheckResult:
    """Criterion 10 (determinism half): repeated preset runs byte-identical."""
    import tempfile
    from pathlib import Path

    from .runs import RunConfig, run

    with tempfile.TemporaryDirectory() as tmp:
        texts = []
        for i in (0, 1):
            path = Path(tmp) / f"fig1_{i}.csv"
            config = RunConfig(
                params=ModelParams(1.0, 0.1, 0.0, 128),
                grid=TimeGrid(0.0, PRESET_TMAX, PRESET_DT, PRESET_STRIDE),
                methods=("analytic", "full"),
                output_path=str(path),
                preset="figure1",
            )
            run(config)
            texts.append(path.read_bytes())
    identical = texts[0] == texts[1]
    return CheckResult("preset-determinism", identical,
                       f"figure1 CSV byte-identical across runs: {identical}")


FAST_CHECKS: list[Callable[[], CheckResult]] = [
    check_ladder_algebra,
    check_coherent_states,
    check_squeeze_law,
    check_hamiltonian_invariants,
    check_three_regimes,
    check_riccati_oracle,
    check_phi_identities,
    check_kerr_cat,
    check_su11_spectrum,
    check_factorized_propagator,
    check_method_equivalence,
    check_frame_equivalence,
    check_norm_drift,
]

SLOW_CHECKS: list[Callable[[], CheckResult]] = [
    check_empty_cavity_pinned,
    check_empty_cavity_dim512,
    check_short_time_agreement,
    check_micro_oscillations,
    check_saturation_phenomenology,
    check_dim_doubling,
    check_preset_determinism,
]


def run_checks(quick: bool = False, workers: int = 2) -> list[CheckResult]:
    """Execute the validation suite; quick mode skips long integrations."""
    results = [fn() for fn in FAST_CHECKS]
    if not quick:
        warm_cache(workers=workers)
        results.extend(fn() for fn in SLOW_CHECKS)
    return results
