"""Parameters and Hamiltonian builders."""

import math

import numpy as np
import pytest

from kerrcavity.fock import build_annihilation, build_number
from kerrcavity.model import (
    ModelParams,
    drive_function,
    full_hamiltonian_builder,
    hamiltonian_full,
    hamiltonian_interaction_exact,
    hamiltonian_interaction_tilde,
    hamiltonian_rwa,
    instantaneous_frequency,
    squeezing_rate,
    su11_generators,
)


@pytest.fixture
def params():
    return ModelParams(omega0=1.0, epsilon=0.1, kerr=0.2, dim=16)


class TestModelParams:
    @pytest.mark.parametrize("kwargs", [
        dict(omega0=0.0, epsilon=0.1, kerr=0.0, dim=8),
        dict(omega0=-1.0, epsilon=0.1, kerr=0.0, dim=8),
        dict(omega0=1.0, epsilon=1.0, kerr=0.0, dim=8),
        dict(omega0=1.0, epsilon=-0.1, kerr=0.0, dim=8),
        dict(omega0=1.0, epsilon=0.1, kerr=-0.2, dim=8),
        dict(omega0=1.0, epsilon=0.1, kerr=0.0, dim=1),
    ])
    def test_invalid_params_rejected(self, kwargs):
        with pytest.raises(ValueError):
            ModelParams(**kwargs)

    def test_drive_strength(self):
        p = ModelParams(2.0, 0.25, 0.0, 8)
        assert p.g == 2.0 * 0.25 / 2.0


class TestFrequencyAndRate:
    def test_frequency_at_zero(self, params):
        assert instantaneous_frequency(params, 0.0) == params.omega0

    def test_frequency_without_modulation(self):
        p = ModelParams(1.3, 0.0, 0.0, 8)
        for t in (0.0, 0.7, 31.4):
            assert instantaneous_frequency(p, t) == p.omega0

    def test_frequency_peak(self):
        p = ModelParams(1.0, 0.1, 0.0, 8)
        assert instantaneous_frequency(p, math.pi / 4) == pytest.approx(1.1)

    def test_rate_at_zero_both_modes(self):
        p = ModelParams(1.0, 0.1, 0.0, 8)
        assert squeezing_rate(p, 0.0, "exact") == pytest.approx(0.05)
        assert squeezing_rate(p, 0.0, "approximate") == pytest.approx(0.05)

    def test_rate_vanishes_without_modulation(self):
        p = ModelParams(1.0, 0.0, 0.0, 8)
        for t in np.linspace(0.0, 10.0, 50):
            assert squeezing_rate(p, t) == 0.0

    def test_exact_approx_difference_bound(self):
        # first-order expansion bound eps² w0 / 2, checked by dense sampling
        p = ModelParams(1.0, 0.1, 0.0, 8)
        ts = np.linspace(0.0, 2.0 * math.pi, 4001)
        diff = max(abs(squeezing_rate(p, t, "exact")
                       - squeezing_rate(p, t, "approximate")) for t in ts)
        assert diff <= p.epsilon ** 2 * p.omega0 / 2


class TestHamiltonianFull:
    def test_static_cavity_is_diagonal(self):
        p = ModelParams(1.0, 0.0, 0.0, 8)
        h = hamiltonian_full(p, 0.3).entries
        assert np.max(np.abs(h - np.diag(np.arange(8.0)))) < 1e-15

    def test_kerr_diagonal(self):
        p = ModelParams(1.0, 0.0, 0.5, 8)
        h = hamiltonian_full(p, 0.0).entries
        n = np.arange(8.0)
        assert np.max(np.abs(np.diag(h) - (n + 0.25 * n * (n - 1)))) < 1e-14

    @pytest.mark.parametrize("mode", ["exact", "approximate"])
    def test_hermiticity(self, params, mode):
        for t in (0.0, 0.42, 7.0):
            h = hamiltonian_full(params, t, mode)
            assert h.hermiticity_residual() <= 1e-12 * np.max(np.abs(h.entries))

    @pytest.mark.parametrize("mode", ["exact", "approximate"])
    def test_periodicity(self, params, mode):
        # both w(t) and chi(t) have period pi/w0
        period = math.pi / params.omega0
        for t in (0.17, 1.9):
            h1 = hamiltonian_full(params, t, mode).entries
            h2 = hamiltonian_full(params, t + period, mode).entries
            assert np.max(np.abs(h1 - h2)) < 1e-12

    def test_builder_matches_public_matrix(self, params):
        build = full_hamiltonian_builder(params)
        psi = np.exp(1j * np.arange(params.dim)) / math.sqrt(params.dim)
        out = np.empty(params.dim, complex)
        for t in (0.0, 0.9, 3.3):
            direct = hamiltonian_full(params, t).entries @ psi
            assert np.max(np.abs(build.matvec(t, psi, out) - direct)) < 1e-13


class TestHamiltonianRwa:
    def test_pure_kerr_when_undriven(self):
        p = ModelParams(1.0, 0.0, 0.4, 8)
        h = hamiltonian_rwa(p).entries
        n = np.arange(8.0)
        assert np.max(np.abs(h - np.diag(0.2 * n * (n - 1)))) < 1e-15

    def test_pair_creation_entries(self):
        p = ModelParams(1.0, 0.1, 0.0, 8)
        h = hamiltonian_rwa(p).entries
        for n in range(6):
            expected = 1j * 0.025 * math.sqrt((n + 1) * (n + 2))
            assert h[n + 2, n] == pytest.approx(expected, abs=1e-15)
            assert h[n, n + 2] == pytest.approx(np.conj(expected), abs=1e-15)

    def test_trace_is_kerr_only(self):
        p = ModelParams(1.0, 0.1, 0.3, 12)
        n = np.arange(12.0)
        expected = np.sum(0.15 * n * (n - 1))
        assert np.trace(hamiltonian_rwa(p).entries) == pytest.approx(expected)


class TestDriveFunction:
    def test_initial_value(self, params):
        assert drive_function(params, 0.0) == pytest.approx(1j * params.g)

    def test_constant_without_kerr(self):
        p = ModelParams(1.0, 0.1, 0.0, 8)
        for t in (0.0, 1.0, 5.5):
            assert drive_function(p, t) == pytest.approx(1j * 0.05)

    def test_unit_modulus_phase(self, params):
        for t in np.linspace(0, 12, 25):
            assert abs(drive_function(params, t)) == pytest.approx(params.g)


class TestInteractionGenerators:
    def test_tilde_without_kerr(self):
        p = ModelParams(1.0, 0.1, 0.0, 10)
        a = build_annihilation(10).entries
        adag = a.conj().T
        expected = 1j * 0.025 * (adag @ adag - a @ a)
        h = hamiltonian_interaction_tilde(p, 0.0).entries
        assert np.max(np.abs(h - expected)) < 1e-15

    def test_tilde_diagonal(self, params):
        h = hamiltonian_interaction_tilde(params, 1.3).entries
        n = np.arange(params.dim)
        expected = -0.5 * params.kerr * (n + 0.5)
        assert np.max(np.abs(np.diag(h) - expected)) < 1e-14

    def test_tilde_hermitian(self, params):
        for t in (0.0, 0.8, 4.0):
            h = hamiltonian_interaction_tilde(params, t)
            assert h.hermiticity_residual() <= 1e-12 * np.max(np.abs(h.entries))

    def test_exact_interaction_hermitian(self, params):
        for t in (0.0, 0.8, 4.0):
            h = hamiltonian_interaction_exact(params, t)
            assert h.hermiticity_residual() <= 1e-12 * np.max(np.abs(h.entries))

    def test_exact_interaction_is_frame_conjugation(self, params):
        # defining property: V†(t) H(t) V(t) - frame derivative, with
        # V = exp(-i t (w0 n + (K/2) n²)) diagonal
        n = np.arange(params.dim, dtype=float)
        frame = params.omega0 * n + 0.5 * params.kerr * n ** 2
        for t in (0.0, 0.6, 2.9):
            v = np.diag(np.exp(-1j * t * frame))
            expected = (v.conj().T @ hamiltonian_full(params, t).entries @ v
                        - np.diag(frame))
            got = hamiltonian_interaction_exact(params, t).entries
            assert np.max(np.abs(got - expected)) < 1e-13

    def test_su11_commutators(self):
        # [L-, L+] = 2 L0 and [L0, L±] = ±L± hold with and without phases
        for kerr, t in ((0.0, 0.0), (0.3, 1.7)):
            l0, lp, lm = su11_generators(32, kerr, t)
            low = np.s_[:16, :16]  # top rows carry truncation artifacts
            assert np.max(np.abs((lm @ lp - lp @ lm - 2 * l0)[low])) < 1e-12
            assert np.max(np.abs((l0 @ lp - lp @ l0 - lp)[low])) < 1e-12
            assert np.max(np.abs((l0 @ lm - lm @ l0 + lm)[low])) < 1e-12
