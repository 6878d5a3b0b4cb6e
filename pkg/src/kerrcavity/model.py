"""Physical parameters and Hamiltonian builders.

The cavity frequency is modulated as w(t) = w0 (1 + eps sin(2 w0 t)); the
squeezing rate chi(t) = (1/4w) dw/dt drives pair creation, and the Kerr
medium adds the diagonal (K/2) a†²a².  All builders are pure functions of
immutable ``ModelParams`` and return Hermitian ``DenseOperator`` values.

Two families of generators are provided:

* lab frame: the full time-dependent Hamiltonian, with ``mode`` selecting
  the exact chi(t) or its leading-order approximation (g cos 2w0t), and the
  time-independent generator obtained after the rotating-wave approximation;
* interaction frame: the su(1,1) form -K L0 + f(t) L+ + f*(t) L-, either
  with the time-independent generators (tilde form) or with the exact
  number-phase dressed generators obtained by frame conjugation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .fock import DenseOperator, build_annihilation

__all__ = [
    "ModelParams",
    "ChiMode",
    "instantaneous_frequency",
    "squeezing_rate",
    "drive_function",
    "hamiltonian_full",
    "hamiltonian_rwa",
    "hamiltonian_interaction_tilde",
    "hamiltonian_interaction_exact",
    "full_hamiltonian_builder",
    "interaction_exact_builder",
    "su11_generators",
]

ChiMode = Literal["exact", "approximate"]


@dataclass(frozen=True)
class ModelParams:
    """Cavity and medium parameters in natural units (w0 sets the scale).

    Attributes
    ----------
    omega0 : float
        Base cavity frequency, > 0 (rad/time).
    epsilon : float
        Dimensionless modulation amplitude, 0 <= epsilon < 1.
    kerr : float
        Kerr frequency shift per photon K >= 0 (rad/time).
    dim : int
        Fock-space truncation dimension, >= 2.
    """

    omega0: float
    epsilon: float
    kerr: float
    dim: int

    def __post_init__(self):
        if not self.omega0 > 0:
            raise ValueError(f"omega0 must be > 0, got {self.omega0}")
        if not 0.0 <= self.epsilon < 1.0:
            raise ValueError(f"epsilon must be in [0, 1), got {self.epsilon}")
        if self.kerr < 0:
            raise ValueError(f"kerr must be >= 0, got {self.kerr}")
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")

    @property
    def g(self) -> float:
        """Parametric drive strength g = eps * w0 / 2."""
        return self.epsilon * self.omega0 / 2.0


def instantaneous_frequency(p: ModelParams, t: float) -> float:
    """w(t) = w0 (1 + eps sin(2 w0 t))."""
    return p.omega0 * (1.0 + p.epsilon * math.sin(2.0 * p.omega0 * t))


def squeezing_rate(p: ModelParams, t: float, mode: ChiMode = "exact") -> float:
    """Pair-creation rate chi(t).

    ``exact`` evaluates (1/4w) dw/dt = eps w0² cos(2 w0 t) / (2 w(t));
    ``approximate`` drops the O(eps²) denominator correction and returns
    (eps w0 / 2) cos(2 w0 t).
    """
    c = math.cos(2.0 * p.omega0 * t)
    if mode == "approximate":
        return 0.5 * p.epsilon * p.omega0 * c
    if mode == "exact":
        w = instantaneous_frequency(p, t)
        if w == 0.0:
            raise ZeroDivisionError("instantaneous frequency vanished")
        return p.epsilon * p.omega0 ** 2 * c / (2.0 * w)
    raise ValueError(f"unknown chi mode {mode!r}")


def drive_function(p: ModelParams, t: float) -> complex:
    """Interaction-picture drive f(t) = i g e^{i 2 K t}."""
    return 1j * p.g * np.exp(2j * p.kerr * t)


@dataclass(frozen=True)
class _OperatorParts:
    """Cached component matrices shared by the Hamiltonian builders."""

    number: np.ndarray
    squeeze: np.ndarray      # i (a†² - a²), Hermitian
    kerr_diag: np.ndarray    # a†²a² = n(n-1) on the diagonal
    n_diag: np.ndarray       # integer diagonal, float


def _parts(dim: int) -> _OperatorParts:
    a = build_annihilation(dim).entries
    adag = a.conj().T
    n_diag = np.arange(dim, dtype=np.float64)
    squeeze = 1j * (adag @ adag - a @ a)
    return _OperatorParts(
        number=np.diag(n_diag).astype(np.complex128),
        squeeze=squeeze,
        kerr_diag=np.diag(n_diag * (n_diag - 1.0)).astype(np.complex128),
        n_diag=n_diag,
    )


def hamiltonian_full(p: ModelParams, t: float,
                     mode: ChiMode = "exact") -> DenseOperator:
    """Full lab-frame Hamiltonian w(t) a†a + i chi(t)(a†² - a²) + (K/2) a†²a²."""
    parts = _parts(p.dim)
    mat = (instantaneous_frequency(p, t) * parts.number
           + squeezing_rate(p, t, mode) * parts.squeeze
           + 0.5 * p.kerr * parts.kerr_diag)
    return DenseOperator(mat, hermitian=True)


def hamiltonian_rwa(p: ModelParams) -> DenseOperator:
    """Time-independent generator after the rotating-wave approximation.

    (i eps w0 / 4)(a†² - a²) + (K/2) a†²a², the dashed-curve generator used
    for comparison runs against the full Hamiltonian.
    """
    parts = _parts(p.dim)
    mat = (0.25 * p.epsilon * p.omega0 * parts.squeeze
           + 0.5 * p.kerr * parts.kerr_diag)
    return DenseOperator(mat, hermitian=True)


def su11_generators(dim: int, kerr: float = 0.0, t: float = 0.0):
    """Matrices (L0, L+, L-) of the su(1,1) realization.

    L0 = (a†a + 1/2)/2 is time independent.  For kerr*t == 0 this returns
    the time-independent pair L± = a†²/2, a²/2; otherwise L± carry the
    number-dressed phases e^{±i 2Kt a†a}.
    """
    a = build_annihilation(dim).entries
    adag = a.conj().T
    n_diag = np.arange(dim, dtype=np.float64)
    l0 = np.diag(0.5 * (n_diag + 0.5)).astype(np.complex128)
    lplus = 0.5 * (adag @ adag)
    if kerr * t != 0.0:
        phases = np.exp(2j * kerr * t * n_diag)
        lplus = lplus * phases[np.newaxis, :]
    lminus = lplus.conj().T
    return l0, lplus, lminus


def hamiltonian_interaction_tilde(p: ModelParams, t: float) -> DenseOperator:
    """Interaction-picture generator -K L0 + f(t) L+ + f*(t) L-.

    Uses the time-independent su(1,1) generators; the constant K/4 term is
    excluded here and reappears only as the global phase of the analytic
    evolution operator.
    """
    l0, lplus, lminus = su11_generators(p.dim)
    f = drive_function(p, t)
    mat = -p.kerr * l0 + f * lplus + np.conj(f) * lminus
    return DenseOperator(mat, hermitian=True)


def hamiltonian_interaction_exact(p: ModelParams, t: float,
                                  mode: ChiMode = "exact") -> DenseOperator:
    """Exact interaction-frame transform of the full Hamiltonian.

    Conjugates hamiltonian_full by the diagonal frame unitary
    V(t) = e^{-i w0 t a†a} e^{-i (K/2) t (a†a)²} and subtracts the frame
    derivative.  Evolution under this generator reproduces the lab-frame
    <a†a>(t) exactly (the number operator commutes with V), which makes it
    the reference for frame-equivalence checks; no rotating-wave or
    small-modulation approximation is applied.
    """
    parts = _parts(p.dim)
    n = parts.n_diag
    frame = p.omega0 * n + 0.5 * p.kerr * n ** 2
    phases = np.exp(-1j * t * frame)
    h_lab = hamiltonian_full(p, t, mode).entries
    mat = (phases.conj()[:, None] * h_lab * phases[None, :]
           - np.diag(frame).astype(np.complex128))
    return DenseOperator(mat, hermitian=True)


class FullHamiltonianAction:
    """Matrix-free action of the full Hamiltonian, psi -> H(t) psi.

    The time dependence lives in two scalars (w(t) on the number diagonal,
    chi(t) on the pair terms), so one static squeeze matvec plus an O(dim)
    diagonal multiply replaces a full matrix rebuild per RK4 stage.  Each
    instance owns its scratch buffer: create one per integration run.
    """

    def __init__(self, p: ModelParams, mode: ChiMode = "exact"):
        self.params = p
        self.mode = mode
        parts = _parts(p.dim)
        self._squeeze = parts.squeeze
        self._n = parts.n_diag
        self._kerr_diag = 0.5 * p.kerr * self._n * (self._n - 1.0)
        self._buf = np.empty(p.dim, dtype=np.complex128)

    @property
    def dim(self) -> int:
        return self.params.dim

    def matvec(self, t: float, psi: np.ndarray, out: np.ndarray) -> np.ndarray:
        np.matmul(self._squeeze, psi, out=out)
        out *= squeezing_rate(self.params, t, self.mode)
        np.multiply(psi, self._kerr_diag
                    + instantaneous_frequency(self.params, t) * self._n,
                    out=self._buf)
        out += self._buf
        return out

    def matrix(self, t: float) -> np.ndarray:
        return hamiltonian_full(self.params, t, self.mode).entries


def full_hamiltonian_builder(p: ModelParams,
                             mode: ChiMode = "exact") -> FullHamiltonianAction:
    """Matrix-free generator for integrate_schrodinger (one per run)."""
    return FullHamiltonianAction(p, mode)


class InteractionExactAction:
    """Matrix-free action of the exact interaction-frame generator.

    psi -> V†(t) H(t) V(t) psi - frame psi with V diagonal, realized as a
    phase dressing around the lab-frame action.
    """

    def __init__(self, p: ModelParams, mode: ChiMode = "exact"):
        self.params = p
        self._lab = FullHamiltonianAction(p, mode)
        n = _parts(p.dim).n_diag
        self._frame = p.omega0 * n + 0.5 * p.kerr * n ** 2

    @property
    def dim(self) -> int:
        return self.params.dim

    def matvec(self, t: float, psi: np.ndarray, out: np.ndarray) -> np.ndarray:
        phases = np.exp(-1j * t * self._frame)
        self._lab.matvec(t, phases * psi, out)
        out *= phases.conj()
        out -= self._frame * psi
        return out

    def matrix(self, t: float) -> np.ndarray:
        return hamiltonian_interaction_exact(self.params, t,
                                             self._lab.mode).entries


def interaction_exact_builder(p: ModelParams,
                              mode: ChiMode = "exact") -> InteractionExactAction:
    """Matrix-free generator for the exact interaction frame (one per run)."""
    return InteractionExactAction(p, mode)
