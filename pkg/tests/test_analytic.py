"""Closed-form coefficients, photon law, factorized propagator, su(1,1)."""

import cmath
import math

import numpy as np
import pytest

from kerrcavity.analytic import (
    PoleError,
    RegimeError,
    apply_factorized_propagator,
    classify_regime,
    displacement_factorization_check,
    empty_cavity_squeeze_check,
    heisenberg_number_matrix,
    kerr_evolved_coherent,
    phi_coeffs,
    su11_eigenvalue,
    vacuum_photon_number,
    wei_norman_coeffs,
    yurke_stoler_state,
)
from kerrcavity.fock import (
    build_number,
    coherent_state,
    expectation,
    fidelity,
    fock_state,
    vacuum_state,
)
from kerrcavity.model import ModelParams, hamiltonian_interaction_tilde
from kerrcavity.propagate import TimeGrid, riccati_integrate

FIG1_KERR = (0.0, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5)


def params(kerr, dim=32, epsilon=0.1):
    return ModelParams(omega0=1.0, epsilon=epsilon, kerr=kerr, dim=dim)


class TestRegime:
    def test_no_kerr_is_hyperbolic(self):
        r = classify_regime(params(0.0))
        assert r.tag == "hyperbolic"
        assert r.eta == pytest.approx(0.05)

    def test_separatrix_is_critical(self):
        assert classify_regime(params(0.1)).tag == "critical"

    def test_strong_kerr_is_trigonometric(self):
        r = classify_regime(params(0.2))
        assert r.tag == "trigonometric"
        assert r.eta == pytest.approx(math.sqrt(0.0075), abs=1e-15)

    def test_eta_invariant(self):
        rng = np.random.default_rng(11)
        for kerr in rng.uniform(0.0, 0.6, 50):
            p = params(float(kerr))
            r = classify_regime(p)
            disc = abs(p.g ** 2 - (0.5 * p.kerr) ** 2)
            assert abs(r.eta ** 2 - disc) <= 1e-12 * max(disc, 1e-30)


class TestWeiNorman:
    def test_initial_conditions(self):
        for kerr in FIG1_KERR:
            w = wei_norman_coeffs(params(kerr), 0.0)
            assert w.alpha == 0 and w.beta == 0 and w.gamma == 0

    def test_no_kerr_closed_forms(self):
        p = params(0.0)
        for t in (0.5, 3.0, 17.0):
            w = wei_norman_coeffs(p, t)
            assert w.alpha == pytest.approx(math.tanh(0.05 * t), abs=1e-14)
            assert w.beta == pytest.approx(-2 * math.log(math.cosh(0.05 * t)),
                                           abs=1e-13)
            assert w.gamma == pytest.approx(-math.tanh(0.05 * t), abs=1e-14)

    @pytest.mark.parametrize("kerr", FIG1_KERR)
    def test_ode_oracle(self, kerr):
        # closed forms vs RK4 integration of the coefficient ODE system
        p = params(kerr)
        grid = TimeGrid(0.0, 20.0, 1e-3, 1000)
        alpha, beta, gamma = riccati_integrate(p, grid)
        sup = 0.0
        for i, t in enumerate(alpha.times):
            w = wei_norman_coeffs(p, float(t))
            sup = max(sup,
                      abs(alpha.values[i] - w.alpha),
                      abs(beta.values[i] - w.beta),
                      abs(gamma.values[i] - w.gamma))
        assert sup <= 1e-8

    def test_beta_branch_continuity(self):
        # many windings of the trigonometric denominator: no 2 pi jumps
        p = params(0.5)
        prev = 0j
        for t in np.linspace(0.0, 80.0, 8001)[1:]:
            b = wei_norman_coeffs(p, float(t)).beta
            assert abs(b - prev) < 0.2
            prev = b

    def test_critical_limit_continuous(self):
        # branch switch at K/2 -> g introduces no jump beyond the smooth
        # K-dependence (|d alpha/dK| ~ 2t|alpha|, so ~3e-7 here)
        t = 13.0
        w_crit = wei_norman_coeffs(params(0.1), t)
        for kerr in (0.1 * (1 - 2e-7), 0.1 * (1 + 2e-7)):
            w = wei_norman_coeffs(params(kerr), t)
            assert abs(w.alpha - w_crit.alpha) < 5e-6
            assert abs(w.beta - w_crit.beta) < 5e-6
            assert abs(w.gamma - w_crit.gamma) < 5e-6


class TestPhiCoeffs:
    def test_identity_at_t0(self):
        phi = phi_coeffs(params(0.3), 0.0)
        assert (phi.phi1, phi.phi2, phi.phi3, phi.phi4) == (0, 1.0, 0, 0.0)

    def test_no_kerr_phi4(self):
        p = params(0.0)
        for t in (1.0, 10.0, 25.0):
            assert phi_coeffs(p, t).phi4 == pytest.approx(
                math.sinh(0.05 * t) ** 2, rel=1e-12)

    def test_hermiticity_identities(self):
        # phi1 = conj(phi3), phi2 and phi4 real, at 100 random points
        rng = np.random.default_rng(42)
        for _ in range(100):
            kerr = float(rng.uniform(0.0, 0.5))
            t = float(rng.uniform(0.0, 20.0))
            phi = phi_coeffs(params(kerr), t)
            assert abs(phi.phi1 - np.conj(phi.phi3)) <= 1e-10 * (1 + abs(phi.phi1))
            assert phi.phi4 >= 0.0

    def test_phi4_equals_photon_law(self):
        rng = np.random.default_rng(5)
        for _ in range(60):
            p = params(float(rng.uniform(0.0, 0.5)))
            t = float(rng.uniform(0.0, 20.0))
            assert phi_coeffs(p, t).phi4 == pytest.approx(
                vacuum_photon_number(p, t), abs=1e-10)


class TestVacuumPhotonNumber:
    def test_empty_cavity_law(self):
        p = params(0.0)
        for t in (0.0, 2.0, 20.0, 40.0):
            assert vacuum_photon_number(p, t) == pytest.approx(
                math.sinh(0.05 * t) ** 2, rel=1e-13)

    def test_trigonometric_peak(self):
        p = params(0.2)
        eta = classify_regime(p).eta
        peak = vacuum_photon_number(p, math.pi / (2 * eta))
        assert abs(peak - 1.0 / 3.0) <= 1e-12

    def test_peak_time_value(self):
        eta = classify_regime(params(0.2)).eta
        assert math.pi / (2 * eta) == pytest.approx(18.1379936423, abs=1e-9)

    def test_critical_growth(self):
        assert vacuum_photon_number(params(0.1), 10.0) == pytest.approx(
            0.25, rel=1e-12)

    def test_trigonometric_zeros(self):
        p = params(0.2)
        eta = classify_regime(p).eta
        for m in (1, 2, 3, 7):
            assert vacuum_photon_number(p, m * math.pi / eta) < 1e-20

    def test_continuity_across_separatrix(self):
        # |K/2 - g| = 1e-6 g: both branches within 1e-6 relative of g²t²
        g = 0.05
        for kerr in (2 * g * (1 - 1e-6), 2 * g * (1 + 1e-6)):
            p = params(kerr)
            assert classify_regime(p).tag != "critical"
            for t in (1.0, 10.0, 20.0):
                assert vacuum_photon_number(p, t) == pytest.approx(
                    g * g * t * t, rel=1e-6)


class TestSqueezeCheck:
    def test_zero_squeezing(self):
        assert empty_cavity_squeeze_check(0.0, 32) == 0.0

    def test_half_squeezing_dim64(self):
        val = empty_cavity_squeeze_check(0.5, 64)
        assert abs(val - math.sinh(0.5) ** 2) <= 1e-8

    def test_unit_squeezing(self):
        # truncation residual measured at 2.2e-8 for dim 64; converged to
        # the 1e-8 contract by dim 128
        val64 = empty_cavity_squeeze_check(1.0, 64)
        assert abs(val64 - math.sinh(1.0) ** 2) <= 5e-8
        val128 = empty_cavity_squeeze_check(1.0, 128)
        assert abs(val128 - math.sinh(1.0) ** 2) <= 1e-8

    def test_negative_squeezing_rejected(self):
        with pytest.raises(ValueError):
            empty_cavity_squeeze_check(-0.1, 16)


class TestKerrEvolution:
    def test_identity_at_t0(self):
        st = kerr_evolved_coherent(1.0, 0.4, 0.0, 30)
        assert np.array_equal(st.amplitudes, coherent_state(1.0, 30).amplitudes)

    def test_exact_revival(self):
        kerr = 0.4
        st = kerr_evolved_coherent(1.0, kerr, 2 * math.pi / kerr, 30)
        assert fidelity(st, coherent_state(1.0, 30)) >= 1 - 1e-12

    def test_cat_state_at_half_revival(self):
        kerr = 0.4
        st = kerr_evolved_coherent(1.0, kerr, math.pi / kerr, 30)
        cat = yurke_stoler_state(1.0, 30)
        assert fidelity(st, cat) >= 1 - 1e-10

    def test_photon_number_conserved(self):
        base = coherent_state(1.3, 40).photon_number()
        for t in (0.3, 5.0, 40.0):
            st = kerr_evolved_coherent(1.3, 0.25, t, 40)
            assert abs(st.photon_number() - base) <= 1e-12


class TestFactorizedPropagator:
    def test_identity_at_t0(self):
        st = coherent_state(0.8, 48)
        out = apply_factorized_propagator(params(0.3, dim=48), 0.0, st)
        assert np.max(np.abs(out.amplitudes - st.amplitudes)) < 1e-15

    def test_trigonometric_photon_number(self):
        # closed-form photon-law oracle: (g²/eta²) sin²(10 eta) at K = 0.2
        p = params(0.2, dim=64)
        eta = classify_regime(p).eta
        expected = (0.05 / eta) ** 2 * math.sin(10 * eta) ** 2
        assert expected == pytest.approx(0.1934260898, abs=1e-9)
        out = apply_factorized_propagator(p, 10.0, vacuum_state(64))
        assert out.photon_number() == pytest.approx(expected, abs=1e-8)
        assert abs(out.norm() - 1.0) < 1e-6

    def test_no_kerr_is_squeezed_vacuum(self):
        # eps w0 t / 2 = 0.25: only even amplitudes, <N> = sinh²(0.25)
        p = ModelParams(1.0, 0.05, 0.0, 64)
        out = apply_factorized_propagator(p, 10.0, vacuum_state(64))
        assert np.max(np.abs(out.amplitudes[1::2])) == 0.0
        assert out.photon_number() == pytest.approx(math.sinh(0.25) ** 2,
                                                    abs=1e-10)
        ref = empty_cavity_squeeze_check(0.25, 64)
        assert out.photon_number() == pytest.approx(ref, abs=1e-10)

    def test_phi4_consistency_all_regimes(self):
        for kerr in FIG1_KERR:
            p = params(kerr, dim=96)
            out = apply_factorized_propagator(p, 12.0, vacuum_state(96))
            assert out.photon_number() == pytest.approx(
                phi_coeffs(p, 12.0).phi4, abs=1e-8)

    def test_unitarity_when_well_truncated(self):
        for kerr in (0.2, 0.3, 0.5):
            p = params(kerr, dim=64)
            out = apply_factorized_propagator(p, 20.0, vacuum_state(64))
            assert abs(out.norm() - 1.0) < 1e-6

    def test_series_breakdown_error(self):
        # hyperbolic alpha = tanh(g t) rounds to 1.0 in floats near g t ~ 19
        p = params(0.0, dim=16)
        with pytest.raises(RegimeError):
            apply_factorized_propagator(p, 400.0, vacuum_state(16))

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            apply_factorized_propagator(params(0.2, dim=8), 1.0,
                                        vacuum_state(9))


class TestHeisenbergNumber:
    def test_bare_number_at_t0(self):
        p = params(0.25, dim=20)
        mat = heisenberg_number_matrix(p, 0.0).entries
        assert np.max(np.abs(mat - build_number(20).entries)) < 1e-14

    def test_vacuum_expectation_is_phi4(self):
        p = params(0.2, dim=24)
        for t in (0.7, 9.0):
            op = heisenberg_number_matrix(p, t)
            val = expectation(op, vacuum_state(24))
            assert val.real == pytest.approx(phi_coeffs(p, t).phi4, abs=1e-12)
            assert abs(val.imag) < 1e-12

    def test_one_photon_expectation(self):
        p = params(0.2, dim=24)
        for t in (0.7, 9.0):
            phi = phi_coeffs(p, t)
            val = expectation(heisenberg_number_matrix(p, t), fock_state(1, 24))
            assert val.real == pytest.approx(phi.phi2 + phi.phi4, abs=1e-12)


class TestSu11Spectrum:
    def test_ground_eigenvalue(self):
        p = params(0.5)
        assert su11_eigenvalue(p, 0) == pytest.approx(-math.sqrt(0.06) / 2,
                                                      abs=1e-12)
        assert su11_eigenvalue(p, 0) == pytest.approx(-0.1224745, abs=1e-7)

    def test_equal_spacing(self):
        p = params(0.5)
        eta = classify_regime(p).eta
        gaps = [su11_eigenvalue(p, n) - su11_eigenvalue(p, n + 1)
                for n in range(6)]
        assert all(gap == pytest.approx(eta, abs=1e-14) for gap in gaps)

    def test_eigensolver_oracle(self):
        p = params(0.5, dim=256)
        h = hamiltonian_interaction_tilde(p, 0.0).entries
        evals = np.sort(np.linalg.eigvalsh(h))[::-1]
        for n in range(5):
            assert abs(evals[n] - su11_eigenvalue(p, n)) <= 1e-6

    def test_regime_error_below_separatrix(self):
        for kerr in (0.0, 0.05, 0.1):
            with pytest.raises(RegimeError):
                su11_eigenvalue(params(kerr), 0)


class TestDisplacementFactorization:
    def test_zero_drive_gives_zero_residual(self):
        p = ModelParams(1.0, 0.0, 0.5, 32)
        assert displacement_factorization_check(p, 0.0, 32) == 0.0

    @pytest.mark.parametrize("t", [0.0, 1.0])
    def test_residual_small_on_low_basis(self, t):
        p = params(0.5, dim=256)
        resid = displacement_factorization_check(p, t, 256, n_max=64)
        assert resid <= 1e-6

    def test_regime_error(self):
        with pytest.raises(RegimeError):
            displacement_factorization_check(params(0.05), 0.0, 64)
