"""Truncated-Fock Lindblad solver: steady moments, coherence-sector
eigenvalues, and exact-diagonalization dispersive strengths."""

import math

import numpy as np
import pytest

from boqsim import (
    DriveSpec,
    LindbladConfig,
    OscillatorParams,
    TransmonParams,
    TruncationError,
    UnstableDynamics,
    build_liouvillian,
    chi_exact,
    chi_qubit,
    chi_transmon,
    default_n_fock,
    frame_of,
    qubit_shift_dephasing,
    resonant_steady_state,
    steady_state,
)
from boqsim.core import BogoliubovFrame

P_OP = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=20.0, lam=17.0)
Q_OP = TransmonParams(delta_q=-80.0, g=4.9, chi_q=-114.0, gamma_1=5.0,
                      gamma_phi=2.2, n_levels=3)


class TestConfig:
    def test_minimum_truncation(self):
        with pytest.raises(ValueError, match="n_fock"):
            LindbladConfig(n_fock=2)

    def test_transmon_levels_bounded(self):
        with pytest.raises(ValueError, match="n_transmon"):
            LindbladConfig(n_fock=8, n_transmon=4)

    def test_default_n_fock_scales_with_antisqueezing(self):
        mild = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=20.0, lam=5.0)
        assert default_n_fock(P_OP) > default_n_fock(mild) >= 16

    def test_default_n_fock_unstable(self):
        with pytest.raises(UnstableDynamics):
            default_n_fock(OscillatorParams(freq_a=0.0, kappa=8.7,
                                            delta_a=0.0, lam=5.0))


class TestSteadyState:
    def test_resonant_moments_match_closed_forms(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=3.0)
        res = steady_state(build_liouvillian(p), check_convergence=False)
        mom = resonant_steady_state(p)
        assert res.n_mean == pytest.approx(mom.n_mean, rel=1e-9)
        assert res.a_sq == pytest.approx(mom.a_sq, rel=1e-9)
        assert res.trace_residual < 1e-10

    def test_quadrature_variances_match_closed_forms(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=3.0)
        thetas = np.array([0.0, math.pi / 4.0, math.pi / 2.0])
        res = steady_state(build_liouvillian(p), thetas=thetas,
                           check_convergence=False)
        mom = resonant_steady_state(p)
        for i, th in enumerate(thetas):
            assert res.var_x[i] == pytest.approx(
                mom.var_x(th, 8.7, 3.0), rel=1e-9)
            assert res.var_p[i] == pytest.approx(
                mom.var_p(th, 8.7, 3.0), rel=1e-9)

    def test_truncation_convergence_flag(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=3.0)
        res = steady_state(build_liouvillian(p))
        assert res.truncation_converged

    def test_coherent_drive_populates_expected_photon_number(self):
        # pump off: the drive normalization makes <a^dag a> = n_d exactly
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=0.0)
        drive = DriveSpec(n_d=0.7, theta=0.3)
        res = steady_state(build_liouvillian(p, drive=drive,
                                             cfg=LindbladConfig(n_fock=24)),
                           check_convergence=False)
        assert res.n_mean == pytest.approx(0.7, rel=1e-9)

    def test_detuned_drive_rejected(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=0.0)
        with pytest.raises(ValueError, match="detuning_d"):
            build_liouvillian(p, drive=DriveSpec(n_d=0.5, detuning_d=1.0),
                              cfg=LindbladConfig(n_fock=16))

    def test_truncation_error_when_occupation_too_high(self):
        hot = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0,
                               lam=0.98 * 8.7 / 2.0)
        with pytest.raises(TruncationError, match="n_fock"):
            build_liouvillian(hot, cfg=LindbladConfig(n_fock=8))

    def test_unstable_dynamics_rejected(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=4.5)
        with pytest.raises(UnstableDynamics):
            build_liouvillian(p, cfg=LindbladConfig(n_fock=16))

    def test_result_json_round_trip(self):
        import json
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=2.0)
        res = steady_state(build_liouvillian(p), check_convergence=False)
        payload = json.loads(res.to_json())
        assert payload["n_mean"] == pytest.approx(res.n_mean)
        assert payload["truncation_converged"] is True


class TestCoherenceEigenvalue:
    def test_two_level_shift_matches_anomalous_corrected_closed_form(self):
        # moderate pump so the dispersive expansion is well inside validity
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=20.0, lam=10.0)
        q = TransmonParams(delta_q=-80.0, g=4.9, gamma_1=5.0, gamma_phi=2.2,
                           n_levels=2)
        frame = frame_of(p)
        chi_r = chi_qubit(q, frame, kappa=8.7)
        frame0 = BogoliubovFrame(r=0.0, s_db=0.0, omega_bog=20.0)
        chi_0 = chi_qubit(q, frame0, kappa=8.7)
        from boqsim import anomalous_moment, shift_undriven
        ana = shift_undriven(chi_r.chi, chi_0.chi, frame, 8.7,
                             chi_anomalous=chi_r.chi_anomalous,
                             anomalous=anomalous_moment(p, frame))
        cfg = LindbladConfig(n_fock=default_n_fock(p), n_transmon=2)
        orc = qubit_shift_dephasing(p, q, cfg)
        assert orc.d_omega_q == pytest.approx(ana.d_omega_q, rel=0.10)

    def test_pump_off_eigenvalue_sits_at_bare_coherence(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=20.0, lam=6.0)
        q = TransmonParams(delta_q=-80.0, g=4.9, gamma_1=5.0, gamma_phi=2.2,
                           n_levels=2)
        cfg = LindbladConfig(n_fock=24, n_transmon=2)
        orc = qubit_shift_dephasing(p, q, cfg)
        # pump-off coherence rotates near delta_q (dispersively shifted by
        # the vacuum chi/2-scale terms, small against delta_q)
        assert orc.eig_off.imag == pytest.approx(q.delta_q, rel=0.02)
        assert -orc.eig_off.real == pytest.approx(q.gamma_t / 2.0, rel=0.15)


class TestChiExact:
    def test_three_level_matches_transmon_closed_form(self):
        cfg = LindbladConfig(n_fock=default_n_fock(P_OP), n_transmon=3)
        exact = chi_exact(P_OP, Q_OP, cfg)
        analytic = chi_transmon(Q_OP, frame_of(P_OP), kappa=8.7).chi
        assert exact == pytest.approx(analytic, rel=0.05)

    def test_two_level_matches_qubit_closed_form(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=20.0, lam=10.0)
        q = TransmonParams(delta_q=-80.0, g=4.9, n_levels=2)
        cfg = LindbladConfig(n_fock=default_n_fock(p), n_transmon=2)
        exact = chi_exact(p, q, cfg)
        analytic = chi_qubit(q, frame_of(p)).chi
        assert exact == pytest.approx(analytic, rel=0.05)

    def test_requires_detuned_regime(self):
        p = OscillatorParams(freq_a=0.0, kappa=8.7, delta_a=0.0, lam=1.0)
        with pytest.raises(ValueError, match="detuned"):
            chi_exact(p, Q_OP, LindbladConfig(n_fock=16, n_transmon=2))
