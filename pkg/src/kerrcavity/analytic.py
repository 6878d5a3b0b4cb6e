"""Closed-form results: factorized evolution, photon law, su(1,1) spectrum.

The interaction-picture generator -K L0 + f(t) L+ + f*(t) L- closes on the
su(1,1) algebra, so its evolution operator factorizes into a product of
single-generator exponentials whose coefficients alpha(t), beta(t), gamma(t)
solve a Riccati system with known solutions.  The sign of g² - (K/2)²
separates three regimes: hyperbolic (exponential vacuum photon growth),
critical (t² growth) and trigonometric (bounded oscillation).  Everything
here is a pure function of ModelParams; the numerical propagators in
``propagate`` cross-validate each formula.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fock import (
    DenseOperator,
    FockVector,
    NORMALIZED_ATOL,
    apply_pair_annihilation_exp,
    apply_pair_creation_exp,
    build_annihilation,
    coherent_state,
)
from .model import ModelParams, drive_function, su11_generators

__all__ = [
    "Regime",
    "WeiNormanCoeffs",
    "PhiCoeffs",
    "RegimeError",
    "PoleError",
    "classify_regime",
    "wei_norman_coeffs",
    "phi_coeffs",
    "vacuum_photon_number",
    "empty_cavity_squeeze_check",
    "kerr_evolved_coherent",
    "yurke_stoler_state",
    "apply_factorized_propagator",
    "heisenberg_number_matrix",
    "su11_eigenvalue",
    "displacement_factorization_check",
]

CRITICAL_RTOL = 1e-12
POLE_ATOL = 1e-14

HYPERBOLIC = "hyperbolic"
CRITICAL = "critical"
TRIGONOMETRIC = "trigonometric"


class RegimeError(ValueError):
    """Operation not defined in the current parameter regime."""


class PoleError(ArithmeticError):
    """Closed-form denominator collapsed at the reported time."""


@dataclass(frozen=True)
class Regime:
    """Regime tag plus the associated rate eta = sqrt(|g² - (K/2)²|)."""

    tag: str
    eta: float


@dataclass(frozen=True)
class WeiNormanCoeffs:
    """Factorization coefficients (alpha, beta, gamma) at time t.

    All three vanish at t = 0; |alpha| < 1 is required whenever the
    factorized propagator is applied.
    """

    alpha: complex
    beta: complex
    gamma: complex
    t: float


@dataclass(frozen=True)
class PhiCoeffs:
    """Coefficients of the Heisenberg-picture number operator.

    N(t) = phi1 a†² + phi2 a†a + phi3 a² + phi4.  Hermiticity demands
    phi1 = conj(phi3) and real phi2, phi4; the constructor enforces both to
    1e-10 and phi4 >= 0 (it is a vacuum expectation of a number operator).
    """

    phi1: complex
    phi2: float
    phi3: complex
    phi4: float

    def __post_init__(self):
        if abs(self.phi1 - np.conj(self.phi3)) > 1e-10 * (1.0 + abs(self.phi1)):
            raise ValueError("phi1 != conj(phi3) beyond tolerance")
        if self.phi4 < 0:
            raise ValueError(f"phi4 must be >= 0, got {self.phi4}")


def classify_regime(p: ModelParams) -> Regime:
    """Decide hyperbolic (K/2 < g), critical (K/2 = g) or trigonometric.

    The critical branch triggers on |g² - (K/2)²| below 1e-12 relative to
    the larger scale, where the explicit t² limit formulas replace the
    0/0-prone generic expressions.
    """
    g = p.g
    half_k = 0.5 * p.kerr
    # product form avoids cancellation when g and K/2 are close
    disc = (g - half_k) * (g + half_k)
    scale = max(g * g, half_k * half_k, 1e-30)
    if abs(disc) <= CRITICAL_RTOL * scale:
        return Regime(CRITICAL, math.sqrt(abs(disc)))
    if half_k < g:
        return Regime(HYPERBOLIC, math.sqrt(disc))
    return Regime(TRIGONOMETRIC, math.sqrt(-disc))


def _unwrapped_phase(u: float, ratio: float) -> float:
    """Continuous phase of eta*cos(u) + i*(K/2)*sin(u) along u = t*eta.

    The trajectory winds around the origin once per 2pi of u and crosses
    each multiple of pi/2 together with u, so the branch is fixed by
    theta = m*pi + atan(ratio * tan(u - m*pi)) with m = round(u / pi) and
    ratio = (K/2)/eta >= 1.  Exact for every t, no grid needed.
    """
    m = math.floor(u / math.pi + 0.5)
    r = u - m * math.pi
    return m * math.pi + math.atan(ratio * math.tan(r))


def wei_norman_coeffs(p: ModelParams, t: float) -> WeiNormanCoeffs:
    """Closed-form alpha, beta, gamma of the factorized evolution operator.

    Hyperbolic regime:

        alpha = g e^{i2Kt} sinh(t eta) / D,   D = eta cosh + i(K/2) sinh,
        beta  = i2Kt + 2 ln eta - 2 ln D,
        gamma = -g sinh(t eta) / D,

    with hyperbolic functions replaced by trigonometric ones (and eta by
    eta-tilde) when K/2 > g, and the analytic eta -> 0 limit on the
    critical separatrix.  The complex logarithm is taken on the branch that
    is continuous in t with beta(0) = 0.
    """
    g = p.g
    half_k = 0.5 * p.kerr
    regime = classify_regime(p)
    eta = regime.eta
    phase = cmath.exp(2j * p.kerr * t)

    if regime.tag == CRITICAL:
        denom = 1.0 + 1j * half_k * t
        alpha = g * t * phase / denom
        beta = 2j * p.kerr * t - 2.0 * cmath.log(denom)
        gamma = -g * t / denom
        return WeiNormanCoeffs(alpha, beta, gamma, t)

    if regime.tag == HYPERBOLIC:
        s, c = math.sinh(t * eta), math.cosh(t * eta)
        denom = eta * c + 1j * half_k * s
        # Re(denom) = eta*cosh > 0: the principal log is already the
        # continuous branch
        log_denom = cmath.log(denom)
    else:
        s, c = math.sin(t * eta), math.cos(t * eta)
        denom = eta * c + 1j * half_k * s
        if abs(denom) < POLE_ATOL:
            raise PoleError(
                f"closed-form denominator ~ {abs(denom):.3g} at t = {t}"
            )
        log_denom = complex(math.log(abs(denom)),
                            _unwrapped_phase(t * eta, half_k / eta))

    alpha = g * phase * s / denom
    beta = 2j * p.kerr * t + 2.0 * math.log(eta) - 2.0 * log_denom
    gamma = -g * s / denom
    return WeiNormanCoeffs(alpha, beta, gamma, t)


def phi_coeffs(p: ModelParams, t: float) -> PhiCoeffs:
    """Phi coefficients of the Heisenberg number operator.

    phi1 = alpha e^{-beta}, phi2 = 1 - 2 alpha gamma e^{-beta},
    phi3 = alpha gamma² e^{-beta} - gamma, phi4 = -alpha gamma e^{-beta}.
    """
    w = wei_norman_coeffs(p, t)
    exp_neg_beta = cmath.exp(-w.beta)
    ag = w.alpha * w.gamma * exp_neg_beta
    phi1 = w.alpha * exp_neg_beta
    phi2 = 1.0 - 2.0 * ag
    phi3 = w.alpha * w.gamma ** 2 * exp_neg_beta - w.gamma
    phi4 = -ag
    for name, value in (("phi2", phi2), ("phi4", phi4)):
        if abs(value.imag) > 1e-10:
            raise ValueError(f"{name} acquired imaginary part {value.imag:.3g}")
    return PhiCoeffs(phi1, phi2.real, phi3, max(phi4.real, 0.0))


def vacuum_photon_number(p: ModelParams, t: float) -> float:
    """Average photon number generated from vacuum at time t.

    (g²/eta²) sinh²(t eta) below the separatrix, g² t² on it, and
    (g²/eta²) sin²(t eta) above it; reduces to the empty-cavity law
    sinh²(g t) when K = 0 and equals phi4 wherever both are defined.
    """
    g = p.g
    regime = classify_regime(p)
    if regime.tag == CRITICAL:
        return g * g * t * t
    ratio = g / regime.eta
    if regime.tag == HYPERBOLIC:
        return (ratio * math.sinh(t * regime.eta)) ** 2
    return (ratio * math.sin(t * regime.eta)) ** 2


def empty_cavity_squeeze_check(r: float, dim: int) -> float:
    """Vacuum photon number under a Bogoliubov transform of strength r.

    Conjugates the number operator by the matrix exponential of
    (r/2)(a†² - a²) on the truncated space and returns <0|a†(t)a(t)|0>,
    which must reproduce sinh²(r) up to truncation.
    """
    if r < 0:
        raise ValueError(f"squeezing parameter must be >= 0, got {r}")
    a = build_annihilation(dim).entries
    adag = a.conj().T
    gen = 0.5 * r * (adag @ adag - a @ a)
    s = expm(gen)
    n_heis = s.conj().T @ (adag @ a) @ s
    return float(np.real(n_heis[0, 0]))


def kerr_evolved_coherent(z: complex, kerr: float, t: float,
                          dim: int) -> FockVector:
    """Coherent state |z> after pure Kerr evolution for time t.

    The generator (K/2) a†²a² is diagonal with eigenvalues (K/2) n(n-1), so
    each amplitude only acquires the phase e^{-i(K/2)t n(n-1)}.  The state
    revives exactly at t = 2pi/K and forms an equal two-component cat at
    t = pi/K.
    """
    base = coherent_state(z, dim)
    n = np.arange(dim, dtype=np.float64)
    phases = np.exp(-0.5j * kerr * t * n * (n - 1.0))
    return FockVector(base.amplitudes * phases, normalized=base.normalized)


def yurke_stoler_state(z: complex, dim: int) -> FockVector:
    """The cat state e^{-i pi/4}(|iz> + i|-iz>)/sqrt(2).

    Built by explicit superposition of the two coherent branches; serves as
    the independent oracle for Kerr evolution at half the revival time.
    """
    plus = coherent_state(1j * z, dim).amplitudes
    minus = coherent_state(-1j * z, dim).amplitudes
    amps = cmath.exp(-0.25j * math.pi) * (plus + 1j * minus) / math.sqrt(2.0)
    norm = float(np.linalg.norm(amps))
    return FockVector(amps, normalized=abs(norm - 1.0) <= NORMALIZED_ATOL)


def apply_factorized_propagator(p: ModelParams, t: float,
                                state: FockVector) -> FockVector:
    """Evolve a state with the analytic factorized evolution operator.

    Applies, right to left: e^{(gamma/2) a²}, the diagonal e^{(beta/2) n},
    e^{(alpha/2) a†²}, the frame phases e^{-i w0 t n - i(K/2) t n²} and the
    global scalar e^{beta/4 - iKt/4}.  The two-photon exponentials are
    finite series on the truncated space.
    """
    if state.dim != p.dim:
        raise ValueError(
            f"dimension mismatch: params {p.dim}, state {state.dim}"
        )
    w = wei_norman_coeffs(p, t)
    if abs(w.alpha) >= 1.0:
        raise RegimeError(
            f"|alpha| = {abs(w.alpha):.6g} >= 1 at t = {t}: factorized"
            " series does not converge"
        )
    n = np.arange(p.dim, dtype=np.float64)
    psi = apply_pair_annihilation_exp(state.amplitudes, 0.5 * w.gamma)
    psi = psi * np.exp(0.5 * w.beta * n)
    psi = apply_pair_creation_exp(psi, 0.5 * w.alpha)
    psi = psi * np.exp(-1j * t * (p.omega0 * n + 0.5 * p.kerr * n ** 2))
    psi = psi * cmath.exp(0.25 * w.beta - 0.25j * p.kerr * t)
    norm = float(np.linalg.norm(psi))
    return FockVector(psi, normalized=abs(norm - 1.0) <= NORMALIZED_ATOL)


def heisenberg_number_matrix(p: ModelParams, t: float) -> DenseOperator:
    """Heisenberg-picture number operator phi1 a†² + phi2 a†a + phi3 a² + phi4."""
    phi = phi_coeffs(p, t)
    a = build_annihilation(p.dim).entries
    adag = a.conj().T
    n_op = adag @ a
    mat = (phi.phi1 * (adag @ adag) + phi.phi2 * n_op + phi.phi3 * (a @ a)
           + phi.phi4 * np.eye(p.dim, dtype=np.complex128))
    return DenseOperator(mat, hermitian=True)


def _displacement_magnitude(p: ModelParams) -> float:
    """|zeta| from tanh(2|zeta|) = 2g/K, defined only above the separatrix."""
    regime = classify_regime(p)
    if regime.tag != TRIGONOMETRIC:
        raise RegimeError(
            "displacement diagonalization requires K/2 > g"
            f" (regime is {regime.tag})"
        )
    if p.kerr == 0.0:
        return 0.0
    return 0.5 * math.atanh(2.0 * p.g / p.kerr)


def su11_eigenvalue(p: ModelParams, n: int) -> float:
    """n-th eigenvalue -eta~ (n + 1/2) of the interaction generator.

    The spectrum is equally spaced with gap eta~ = sqrt((K/2)² - g²); the
    diagonalizing displacement exists only in the trigonometric regime.
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    _displacement_magnitude(p)  # raises RegimeError outside trigonometric
    regime = classify_regime(p)
    return -regime.eta * (n + 0.5)


def displacement_factorization_check(p: ModelParams, t: float, dim: int,
                                     n_max: int | None = None) -> float:
    """Residual of the displacement-operator identities on the low basis.

    Builds D = exp(zeta L+(t) - zeta* L-(t)) with tanh(2|zeta|) = 2g/K and
    arg zeta = 2Kt - pi/2, both directly and as the three-factor product
    exp(tau L+) exp(-2 ln cosh|zeta| L0) exp(-tau* L-), tau =
    (zeta/|zeta|) tanh|zeta|, and checks D H_I D† against the diagonal
    -sqrt(K² - 4g²) L0.  Both residuals are max-norms over the leading
    n_max x n_max block (default dim/2), where truncation corruption from
    the top of the basis cannot reach; the larger of the two is returned.
    """
    if n_max is None:
        n_max = dim // 2
    mag = _displacement_magnitude(p)
    l0, lplus, lminus = su11_generators(dim, p.kerr, t)
    if mag == 0.0:
        zeta = 0.0j
        direct = np.eye(dim, dtype=np.complex128)
        factored = direct
    else:
        # the su(1,1) adjoint action fixes the phase half a turn below
        # the naive +pi/2 convention; verified against the dense
        # eigendecomposition in the tests
        phase = cmath.exp(1j * (2.0 * p.kerr * t - 0.5 * math.pi))
        zeta = mag * phase
        direct = expm(zeta * lplus - np.conj(zeta) * lminus)
        tau = phase * math.tanh(mag)
        n = np.arange(dim, dtype=np.float64)
        middle = np.diag(np.power(math.cosh(mag), -(n + 0.5))
                         ).astype(np.complex128)
        factored = expm(tau * lplus) @ middle @ expm(-np.conj(tau) * lminus)
    resid_a = float(np.max(np.abs((direct - factored)[:n_max, :n_max])))

    f = drive_function(p, t)
    h_int = -p.kerr * l0 + f * lplus + np.conj(f) * lminus
    target = -math.sqrt(p.kerr ** 2 - 4.0 * p.g ** 2) * l0
    transformed = direct @ h_int @ direct.conj().T
    resid_b = float(np.max(np.abs((transformed - target)[:n_max, :n_max])))
    return max(resid_a, resid_b)
