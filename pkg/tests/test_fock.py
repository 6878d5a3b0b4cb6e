"""Fock-space states, operators, inner products."""

import math

import numpy as np
import pytest
from scipy.linalg import expm

from kerrcavity.fock import (
    DenseOperator,
    FockVector,
    apply_pair_annihilation_exp,
    apply_pair_creation_exp,
    build_annihilation,
    build_creation,
    build_number,
    coherent_state,
    expectation,
    fidelity,
    fock_state,
    vacuum_state,
)


class TestLadderOperators:
    def test_annihilation_entries_dim3(self):
        a = build_annihilation(3).entries
        assert a[0, 1] == pytest.approx(1.0)
        assert a[1, 2] == pytest.approx(math.sqrt(2))
        mask = np.ones((3, 3), bool)
        mask[0, 1] = mask[1, 2] = False
        assert np.all(a[mask] == 0)

    def test_annihilation_kills_vacuum(self):
        a = build_annihilation(16).entries
        assert np.all(a @ vacuum_state(16).amplitudes == 0)

    def test_commutator_truncation_artifact_dim8(self):
        a = build_annihilation(8).entries
        adag = a.conj().T
        comm = a @ adag - adag @ a
        expected = np.diag([1, 1, 1, 1, 1, 1, 1, -7]).astype(complex)
        assert np.max(np.abs(comm - expected)) < 1e-12

    def test_commutator_is_identity_below_top(self):
        dim = 40
        a = build_annihilation(dim).entries
        comm = a @ a.conj().T - a.conj().T @ a
        assert np.max(np.abs(np.diag(comm)[: dim - 1] - 1.0)) < 1e-12

    def test_kerr_operator_identity(self):
        # a†²a² = (a†a)² - a†a exactly (integer-weighted entries)
        dim = 24
        a = build_annihilation(dim).entries
        adag = a.conj().T
        n_op = adag @ a
        lhs = adag @ adag @ a @ a
        rhs = n_op @ n_op - n_op
        scale = np.max(np.abs(rhs))
        assert np.max(np.abs(lhs - rhs)) < 1e-12 * scale

    def test_invalid_dim_raises(self):
        with pytest.raises(ValueError):
            build_annihilation(1)
        with pytest.raises(ValueError):
            build_number(0)

    def test_creation_is_adjoint(self):
        a = build_annihilation(9)
        assert np.array_equal(build_creation(9).entries, a.entries.conj().T)


class TestValueTypes:
    def test_normalized_flag_enforced(self):
        with pytest.raises(ValueError):
            FockVector(np.array([1.0, 1.0]), normalized=True)

    def test_nonfinite_amplitudes_rejected(self):
        with pytest.raises(ValueError):
            FockVector(np.array([np.nan, 0.0]))

    def test_hermitian_flag_enforced(self):
        mat = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
        with pytest.raises(ValueError):
            DenseOperator(mat, hermitian=True)

    def test_immutability(self):
        v = vacuum_state(4)
        with pytest.raises(ValueError):
            v.amplitudes[0] = 0.0


class TestCoherentState:
    def test_zero_amplitude_is_vacuum(self):
        st = coherent_state(0.0, 12)
        assert st.amplitudes[0] == pytest.approx(1.0)
        assert np.all(st.amplitudes[1:] == 0)
        assert st.normalized

    def test_norm_converged_at_dim30(self):
        st = coherent_state(1.0, 30)
        assert abs(st.norm() - 1.0) <= 1e-12
        assert st.normalized

    def test_mean_photon_number(self):
        # <N> = |z|² for coherent states; brute-force sum of n |c_n|²
        st = coherent_state(1.0, 30)
        brute = sum(n * abs(st.amplitudes[n]) ** 2 for n in range(30))
        assert abs(brute - 1.0) <= 1e-10
        assert abs(st.photon_number() - brute) <= 1e-14

    def test_under_truncated_state_unflagged(self):
        st = coherent_state(3.0, 8)
        assert not st.normalized

    def test_eigenrelation(self):
        # ||(a - z)|z>|| is bounded by the amplitude lost to truncation
        z, dim = 1.2, 40
        st = coherent_state(z, dim)
        a = build_annihilation(dim).entries
        resid = np.linalg.norm(a @ st.amplitudes - z * st.amplitudes)
        tail = abs(z) * abs(st.amplitudes[-1])
        assert resid <= tail + 1e-14


class TestExpectationFidelity:
    def test_number_in_vacuum(self):
        assert expectation(build_number(8), vacuum_state(8)) == 0

    def test_number_in_coherent(self):
        val = expectation(build_number(30), coherent_state(1.0, 30))
        assert abs(val - 1.0) <= 1e-10

    def test_hermitian_expectation_is_real(self):
        rng = np.random.default_rng(7)
        mat = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
        op = DenseOperator(mat + mat.conj().T, hermitian=True)
        amps = rng.normal(size=12) + 1j * rng.normal(size=12)
        state = FockVector(amps / np.linalg.norm(amps), normalized=True)
        assert abs(expectation(op, state).imag) <= 1e-10

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            expectation(build_number(8), vacuum_state(9))
        with pytest.raises(ValueError):
            fidelity(vacuum_state(8), vacuum_state(9))

    def test_self_fidelity_is_one(self):
        st = coherent_state(0.7 + 0.2j, 25)
        assert fidelity(st, st) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_states(self):
        assert fidelity(fock_state(0, 6), fock_state(1, 6)) == 0

    def test_opposite_coherent_states(self):
        # |<z|-z>|² = e^{-4|z|²}; brute-force overlap sum over the basis
        u = coherent_state(1.0, 30)
        v = coherent_state(-1.0, 30)
        val = fidelity(u, v)
        assert val == pytest.approx(math.exp(-4.0), abs=1e-12)

    def test_fidelity_symmetric_and_bounded(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = rng.normal(size=10) + 1j * rng.normal(size=10)
            y = rng.normal(size=10) + 1j * rng.normal(size=10)
            u = FockVector(x / np.linalg.norm(x), normalized=True)
            v = FockVector(y / np.linalg.norm(y), normalized=True)
            assert fidelity(u, v) == pytest.approx(fidelity(v, u), abs=1e-14)
            assert 0.0 <= fidelity(u, v) <= 1.0 + 1e-10


class TestPairExponentials:
    @pytest.mark.parametrize("coeff", [0.3, -0.2 + 0.4j, 0.45j])
    def test_creation_series_matches_expm(self, coeff):
        dim = 24
        adag = build_annihilation(dim).entries.conj().T
        st = coherent_state(0.5, dim).amplitudes
        direct = expm(coeff * adag @ adag) @ st
        series = apply_pair_creation_exp(st, coeff)
        assert np.max(np.abs(direct - series)) < 1e-12

    @pytest.mark.parametrize("coeff", [0.3, -0.2 + 0.4j, 0.45j])
    def test_annihilation_series_matches_expm(self, coeff):
        dim = 24
        a = build_annihilation(dim).entries
        st = coherent_state(0.5, dim).amplitudes
        direct = expm(coeff * a @ a) @ st
        series = apply_pair_annihilation_exp(st, coeff)
        assert np.max(np.abs(direct - series)) < 1e-12

    def test_zero_coefficient_is_identity(self):
        st = coherent_state(1.0, 16).amplitudes
        assert np.array_equal(apply_pair_creation_exp(st, 0.0), st)
        assert np.array_equal(apply_pair_annihilation_exp(st, 0.0), st)
