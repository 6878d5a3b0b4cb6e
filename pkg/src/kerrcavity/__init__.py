"""Photon generation from vacuum in a frequency-modulated Kerr cavity.

Closed-form evolution (Wei-Norman factorization on the su(1,1) algebra,
three-regime vacuum photon law, Kerr cat states) cross-validated against
truncated Fock-space numerics (RK4 Schrödinger integration, split-step
su(1,1) propagation, truncation ladders).
"""

__version__ = "0.1.0"

from .fock import (
    DenseOperator,
    FockVector,
    build_annihilation,
    build_creation,
    build_number,
    coherent_state,
    expectation,
    fidelity,
    fock_state,
    vacuum_state,
)
from .model import (
    ModelParams,
    drive_function,
    hamiltonian_full,
    hamiltonian_interaction_exact,
    hamiltonian_interaction_tilde,
    hamiltonian_rwa,
    instantaneous_frequency,
    squeezing_rate,
)
from .analytic import (
    PhiCoeffs,
    PoleError,
    Regime,
    RegimeError,
    WeiNormanCoeffs,
    apply_factorized_propagator,
    classify_regime,
    displacement_factorization_check,
    empty_cavity_squeeze_check,
    heisenberg_number_matrix,
    kerr_evolved_coherent,
    phi_coeffs,
    su11_eigenvalue,
    vacuum_photon_number,
    yurke_stoler_state,
)
from .propagate import (
    ConvergenceReport,
    DivergenceError,
    GeneratorError,
    TimeGrid,
    TimeSeries,
    Trajectory,
    integrate_schrodinger,
    norm_series,
    photon_number_series,
    riccati_integrate,
    stepped_su11_propagator,
    truncation_convergence,
)

__all__ = [name for name in dir() if not name.startswith("_")]
