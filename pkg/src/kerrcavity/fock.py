"""Truncated Fock-space states and operators.

Everything downstream (Hamiltonians, propagators, closed-form checks) is
built on the two value types defined here: a complex amplitude vector over
number states |0>..|dim-1> and a dense dim x dim complex matrix.  Both are
immutable after construction and safe to share between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "FockVector",
    "DenseOperator",
    "build_annihilation",
    "build_creation",
    "build_number",
    "coherent_state",
    "fock_state",
    "vacuum_state",
    "expectation",
    "fidelity",
    "apply_pair_creation_exp",
    "apply_pair_annihilation_exp",
]

NORMALIZED_ATOL = 1e-10
HERMITIAN_RTOL = 1e-12

# Stop a nilpotent exponential series once a term is this small relative to
# the accumulated result.
SERIES_TERM_RATIO = 1e-16


def _as_readonly(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.complex128)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class FockVector:
    """State vector in the truncated number basis.

    ``amplitudes[n]`` is the probability amplitude of |n>.  A vector flagged
    ``normalized`` must satisfy ``|norm - 1| <= 1e-10`` at creation time;
    under-truncated states are simply left unflagged.
    """

    amplitudes: np.ndarray
    normalized: bool = False
    dim: int = field(init=False)

    def __post_init__(self):
        amps = _as_readonly(np.atleast_1d(self.amplitudes))
        if amps.ndim != 1 or amps.size < 1:
            raise ValueError("amplitudes must be a nonempty 1-d array")
        if not np.all(np.isfinite(amps)):
            raise ValueError("amplitudes must be finite")
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "dim", amps.size)
        if self.normalized and abs(self.norm() - 1.0) > NORMALIZED_ATOL:
            raise ValueError(
                f"state flagged normalized has norm {self.norm():.15g}"
            )

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def photon_number(self) -> float:
        """<a†a> of the state (real by construction)."""
        n = np.arange(self.dim)
        return float(np.real(np.sum(n * np.abs(self.amplitudes) ** 2)))


@dataclass(frozen=True)
class DenseOperator:
    """Dense complex matrix on the truncated space.

    ``hermitian=True`` asserts (and verifies) that the matrix equals its
    conjugate transpose within 1e-12 relative to its largest entry.
    """

    entries: np.ndarray
    hermitian: bool = False
    dim: int = field(init=False)

    def __post_init__(self):
        mat = _as_readonly(np.atleast_2d(self.entries))
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not np.all(np.isfinite(mat)):
            raise ValueError("entries must be finite")
        object.__setattr__(self, "entries", mat)
        object.__setattr__(self, "dim", mat.shape[0])
        if self.hermitian:
            scale = np.max(np.abs(mat))
            if scale > 0:
                resid = np.max(np.abs(mat - mat.conj().T))
                if resid > HERMITIAN_RTOL * scale:
                    raise ValueError(
                        f"operator flagged Hermitian has residual {resid:.3g}"
                        f" (scale {scale:.3g})"
                    )

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def __matmul__(self, other):
        if isinstance(other, DenseOperator):
            return DenseOperator(self.entries @ other.entries)
        return NotImplemented


def build_annihilation(dim: int) -> DenseOperator:
    """Bosonic annihilation operator a with entries a[n, n+1] = sqrt(n+1).

    The creation operator is its conjugate transpose; composite operators
    (a†a, a†², a², a†²a², ...) are matrix products of this result.
    """
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    mat = np.zeros((dim, dim), dtype=np.complex128)
    ns = np.arange(dim - 1)
    mat[ns, ns + 1] = np.sqrt(ns + 1.0)
    return DenseOperator(mat)


def build_creation(dim: int) -> DenseOperator:
    return DenseOperator(build_annihilation(dim).entries.conj().T)


def build_number(dim: int) -> DenseOperator:
    """Diagonal number operator a†a."""
    if dim < 2:
        raise ValueError(f"dim must be >= 2, got {dim}")
    return DenseOperator(np.diag(np.arange(dim, dtype=np.complex128)),
                         hermitian=True)


def vacuum_state(dim: int) -> FockVector:
    return fock_state(0, dim)


def fock_state(n: int, dim: int) -> FockVector:
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    if not 0 <= n < dim:
        raise ValueError(f"n={n} outside truncated basis of dim {dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[n] = 1.0
    return FockVector(amps, normalized=True)


def coherent_state(z: complex, dim: int) -> FockVector:
    """Coherent state |z> with amplitudes e^{-|z|²/2} zⁿ/sqrt(n!).

    Amplitudes are produced by the multiplicative recurrence
    c_n = c_{n-1} z / sqrt(n), which avoids factorial overflow.  The result
    is flagged normalized only when the truncated norm is within 1e-10 of
    one; the caller is responsible for choosing dim >> |z|².
    """
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    amps = np.empty(dim, dtype=np.complex128)
    amps[0] = math.exp(-0.5 * abs(z) ** 2)
    for n in range(1, dim):
        amps[n] = amps[n - 1] * z / math.sqrt(n)
    norm = float(np.linalg.norm(amps))
    return FockVector(amps, normalized=abs(norm - 1.0) <= NORMALIZED_ATOL)


def expectation(op: DenseOperator, state: FockVector) -> complex:
    """<state| op |state>."""
    if op.dim != state.dim:
        raise ValueError(
            f"dimension mismatch: operator {op.dim}, state {state.dim}"
        )
    psi = state.amplitudes
    return complex(np.vdot(psi, op.entries @ psi))


def fidelity(u: FockVector, v: FockVector) -> float:
    """|<u|v>|² for two normalized states."""
    if u.dim != v.dim:
        raise ValueError(f"dimension mismatch: {u.dim} vs {v.dim}")
    return float(abs(np.vdot(u.amplitudes, v.amplitudes)) ** 2)


def apply_pair_creation_exp(psi: np.ndarray, coeff: complex) -> np.ndarray:
    """Apply e^{coeff · a†²} to a raw amplitude vector.

    The truncated a†² is nilpotent, so the power series terminates; it is
    summed term by term (each term an O(dim) index shift) and stopped once a
    term falls below 1e-16 of the accumulated sum.  Exact on the truncated
    space up to roundoff, O(dim²) worst case.
    """
    dim = psi.size
    sqrt_n = np.sqrt(np.arange(dim, dtype=np.float64))
    out = psi.astype(np.complex128).copy()
    term = psi.astype(np.complex128).copy()
    max_terms = dim // 2 + 2
    for k in range(1, max_terms):
        shifted = np.zeros(dim, dtype=np.complex128)
        # a†² |n> = sqrt((n+1)(n+2)) |n+2>, top two components fall off
        shifted[2:] = term[:-2] * (sqrt_n[1:dim - 1] * sqrt_n[2:])
        term = shifted * (coeff / k)
        out += term
        norm_t = np.linalg.norm(term)
        if norm_t <= SERIES_TERM_RATIO * np.linalg.norm(out) or norm_t == 0.0:
            break
    return out


def apply_pair_annihilation_exp(psi: np.ndarray, coeff: complex) -> np.ndarray:
    """Apply e^{coeff · a²} to a raw amplitude vector (finite series)."""
    dim = psi.size
    sqrt_n = np.sqrt(np.arange(dim, dtype=np.float64))
    out = psi.astype(np.complex128).copy()
    term = psi.astype(np.complex128).copy()
    max_terms = dim // 2 + 2
    for k in range(1, max_terms):
        shifted = np.zeros(dim, dtype=np.complex128)
        # a² |n> = sqrt(n(n-1)) |n-2>
        shifted[:-2] = term[2:] * (sqrt_n[2:] * sqrt_n[1:dim - 1])
        term = shifted * (coeff / k)
        out += term
        norm_t = np.linalg.norm(term)
        if norm_t <= SERIES_TERM_RATIO * np.linalg.norm(out) or norm_t == 0.0:
            break
    return out
