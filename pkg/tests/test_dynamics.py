"""Tests for pulse types and closed/open qudit evolution."""

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.optimize import curve_fit

from tbqudit.dynamics import (
    QuditState,
    StepSizeUnderflowError,
    _cf4_integrate,
    drive_hamiltonian_rwa,
    evolve_open,
    evolve_unitary,
    rabi_experiment,
    ramsey_experiment,
    segment_propagator_rwa,
)
from tbqudit.hamiltonian import effective_qudit_levels
from tbqudit.params import tb_hyperfine
from tbqudit.pulses import (
    DecoherenceParams,
    PulseSegment,
    PulseTone,
    default_decoherence,
    half_pi_pulse,
    pi_pulse,
    resonant_tone,
)

LEVELS = effective_qudit_levels(tb_hyperfine())


def random_segment(rng, max_rabi_MHz=10.0):
    pairs = rng.permutation(3)[: rng.integers(1, 4)]
    tones = tuple(
        resonant_tone(
            LEVELS,
            int(p),
            rabi_MHz=float(rng.uniform(0.1, max_rabi_MHz)),
            phase_rad=float(rng.uniform(0, 2 * np.pi)),
            detuning_Hz=float(rng.uniform(-2e5, 2e5)),
        )
        for p in pairs
    )
    return PulseSegment(tones=tones, duration_s=float(rng.uniform(1e-9, 4e-7)))


class TestPulseTypes:
    def test_tone_validation(self):
        with pytest.raises(ValueError):
            PulseTone(pair=3, freq_GHz=1.0, rabi_MHz=1.0)
        with pytest.raises(ValueError):
            PulseTone(pair=0, freq_GHz=-1.0, rabi_MHz=1.0)
        with pytest.raises(ValueError):
            PulseTone(pair=0, freq_GHz=1.0, rabi_MHz=-0.5)
        with pytest.raises(ValueError):
            PulseTone(pair=0, freq_GHz=1.0, rabi_MHz=1.0, phase_rad=np.nan)

    def test_segment_rejects_two_tones_on_one_pair(self):
        t = resonant_tone(LEVELS, 0, 1.0)
        with pytest.raises(ValueError, match="one tone per pair"):
            PulseSegment(tones=(t, t), duration_s=1e-8)

    def test_segment_rejects_negative_duration(self):
        with pytest.raises(ValueError):
            PulseSegment(tones=(), duration_s=-1e-9)

    def test_resonant_tone_frequency(self):
        tone = resonant_tone(LEVELS, 1, 2.0, detuning_Hz=5e4)
        expected = (LEVELS[2] - LEVELS[1]) + 5e4 * 1e-9
        assert tone.freq_GHz == pytest.approx(expected, abs=1e-15)

    def test_pi_pulse_duration(self):
        seg = pi_pulse(LEVELS, 0, rabi_MHz=2.5)
        assert seg.duration_s == pytest.approx(1.0 / (2 * 2.5e6))
        half = half_pi_pulse(LEVELS, 0, rabi_MHz=2.5)
        assert half.duration_s == pytest.approx(seg.duration_s / 2)

    def test_decoherence_validation(self):
        with pytest.raises(ValueError):
            DecoherenceParams(T1_s=(1.0, 1.0, 1.0), T2star_s=(1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            DecoherenceParams(T1_s=(1.0, 1.0, 1.0, 0.0), T2star_s=(1.0, 1.0, 1.0))
        with pytest.raises(ValueError):
            DecoherenceParams(T1_s=(1.0, 1.0, 1.0, 1.0), T2star_s=(1.0, np.inf, 1.0))

    def test_default_decoherence_values(self):
        dec = default_decoherence()
        assert dec.T1_s == (34.0, 17.0, 17.0, 34.0)
        assert dec.T2star_s == (0.28e-3, 0.30e-3, 0.32e-3)


class TestQuditState:
    def test_pure_constructor(self):
        s = QuditState.pure(2)
        assert s.is_pure
        assert np.allclose(s.populations(), [0, 0, 1, 0])
        rho = s.as_density()
        assert rho[2, 2] == pytest.approx(1.0)

    def test_requires_exactly_one_representation(self):
        with pytest.raises(ValueError):
            QuditState()
        with pytest.raises(ValueError):
            QuditState(amplitudes=np.array([1, 0, 0, 0]), rho=np.eye(4) / 4)

    def test_rejects_unnormalized_amplitudes(self):
        with pytest.raises(ValueError, match="normalized"):
            QuditState(amplitudes=np.array([1.0, 1.0, 0.0, 0.0]))

    def test_rejects_bad_density_matrices(self):
        bad = np.eye(4, dtype=complex) / 4
        bad[0, 1] = 0.3
        with pytest.raises(ValueError, match="Hermitian"):
            QuditState(rho=bad)
        with pytest.raises(ValueError, match="unit trace"):
            QuditState(rho=np.eye(4, dtype=complex))


class TestRwaHamiltonian:
    def test_no_tones_gives_zero_matrix(self):
        h = drive_hamiltonian_rwa(LEVELS, ())
        assert np.all(h == 0)

    def test_resonant_tridiagonal_structure(self):
        tones = tuple(
            resonant_tone(LEVELS, p, rabi_MHz=2.0 * (p + 1), phase_rad=0.3 * p)
            for p in range(3)
        )
        h = drive_hamiltonian_rwa(LEVELS, tones)
        assert np.allclose(np.diag(h), 0.0, atol=1e-15)
        for p in range(3):
            amp = 0.5 * 2.0 * (p + 1) * 1e-3
            assert h[p, p + 1] == pytest.approx(amp * np.exp(1j * 0.3 * p))
        assert h[0, 2] == 0 and h[0, 3] == 0 and h[1, 3] == 0

    def test_detuning_accumulates_down_the_ladder(self):
        tones = (
            resonant_tone(LEVELS, 0, 1.0, detuning_Hz=3e5),
            resonant_tone(LEVELS, 2, 1.0, detuning_Hz=-1e5),
        )
        h = drive_hamiltonian_rwa(LEVELS, tones)
        diag = np.real(np.diag(h))
        assert diag[0] == 0.0
        assert diag[1] == pytest.approx(-3e5 * 1e-9, rel=1e-12)
        assert diag[2] == pytest.approx(-3e5 * 1e-9, rel=1e-12)
        assert diag[3] == pytest.approx((-3e5 + 1e5) * 1e-9, rel=1e-12)

    def test_hermitian_for_random_tone_sets(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            seg = random_segment(rng)
            h = drive_hamiltonian_rwa(LEVELS, seg.tones)
            assert np.max(np.abs(h - h.conj().T)) < 1e-15

    def test_duplicate_pair_rejected(self):
        tones = [resonant_tone(LEVELS, 1, 1.0), resonant_tone(LEVELS, 1, 2.0)]
        with pytest.raises(ValueError, match="pair 1"):
            drive_hamiltonian_rwa(LEVELS, tones)


class TestUnitaryEvolution:
    def test_propagator_unitary(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            u = segment_propagator_rwa(LEVELS, random_segment(rng))
            assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-9

    def test_zero_duration_is_identity(self):
        seg = PulseSegment(tones=(resonant_tone(LEVELS, 0, 5.0),), duration_s=0.0)
        u = segment_propagator_rwa(LEVELS, seg)
        assert np.allclose(u, np.eye(4), atol=1e-15)

    def test_segment_composition(self):
        rng = np.random.default_rng(13)
        for _ in range(10):
            seg = random_segment(rng)
            t1 = seg.duration_s * 0.37
            t2 = seg.duration_s - t1
            u_full = segment_propagator_rwa(LEVELS, seg)
            u1 = segment_propagator_rwa(
                LEVELS, PulseSegment(tones=seg.tones, duration_s=t1))
            u2 = segment_propagator_rwa(
                LEVELS, PulseSegment(tones=seg.tones, duration_s=t2))
            assert np.max(np.abs(u2 @ u1 - u_full)) < 1e-10

    def test_pi_pulse_transfers_each_pair(self):
        for pair in range(3):
            final = evolve_unitary(
                QuditState.pure(pair), LEVELS, [pi_pulse(LEVELS, pair, 5.0)])
            assert final.populations()[pair + 1] == pytest.approx(1.0, abs=1e-12)

    def test_generalized_rabi_formula(self):
        # Single detuned tone reduces to the two-level closed form.
        omega = 4e6
        delta = 3e6
        tau = 0.35e-6
        tone = resonant_tone(LEVELS, 1, omega * 1e-6, detuning_Hz=delta)
        seg = PulseSegment(tones=(tone,), duration_s=tau)
        final = evolve_unitary(QuditState.pure(1), LEVELS, [seg])
        omega_eff = np.hypot(omega, delta)
        expected = (omega / omega_eff) ** 2 * np.sin(np.pi * omega_eff * tau) ** 2
        assert final.populations()[2] == pytest.approx(expected, abs=1e-10)

    def test_rejects_mixed_state_and_unknown_method(self):
        mixed = QuditState(rho=np.eye(4, dtype=complex) / 4)
        with pytest.raises(ValueError, match="pure"):
            evolve_unitary(mixed, LEVELS, [])
        with pytest.raises(ValueError, match="method"):
            evolve_unitary(QuditState.pure(0), LEVELS, [], method="magic")


class TestLabFrameOracle:
    def test_rwa_matches_lab_frame_pi_pulse(self):
        # Amplitude at the RWA validity edge used across the package:
        # Omega = nu_min / 50.
        rabi_MHz = 1e3 * (LEVELS[1] - LEVELS[0]) / 50.0
        seg = pi_pulse(LEVELS, 0, rabi_MHz)
        rwa = evolve_unitary(QuditState.pure(0), LEVELS, [seg])
        lab = evolve_unitary(QuditState.pure(0), LEVELS, [seg], method="labframe")
        assert np.max(np.abs(rwa.populations() - lab.populations())) < 1e-3

    def test_rwa_matches_lab_frame_three_tones(self):
        tones = (
            resonant_tone(LEVELS, 0, 8.0, phase_rad=0.4),
            resonant_tone(LEVELS, 1, 6.0, detuning_Hz=2e6),
            resonant_tone(LEVELS, 2, 7.0, phase_rad=-1.1, detuning_Hz=-1e6),
        )
        seg = PulseSegment(tones=tones, duration_s=1.2e-7)
        rwa = evolve_unitary(QuditState.pure(1), LEVELS, [seg])
        lab = evolve_unitary(QuditState.pure(1), LEVELS, [seg], method="labframe")
        assert np.max(np.abs(rwa.populations() - lab.populations())) < 1e-3

    def test_cf4_integrator_fourth_order(self):
        seg = PulseSegment(
            tones=(resonant_tone(LEVELS, 0, 49.0),), duration_s=4e-9)
        psi0 = np.zeros(4, dtype=complex)
        psi0[0] = 1.0
        ref = _cf4_integrate(psi0, LEVELS, seg, 4.0, 32000)
        errors = []
        for steps in (2000, 4000, 8000):
            out = _cf4_integrate(psi0, LEVELS, seg, 4.0, steps)
            errors.append(np.max(np.abs(out - ref)))
        # Fourth order: error drops ~16x per step doubling.
        assert errors[0] / errors[1] > 10
        assert errors[1] / errors[2] > 10

    def test_step_underflow_raises(self):
        seg = PulseSegment(
            tones=(resonant_tone(LEVELS, 0, 1.0),), duration_s=1e-4)
        with pytest.raises(StepSizeUnderflowError, match="segment 0"):
            evolve_unitary(QuditState.pure(0), LEVELS, [seg], method="labframe")


class TestOpenEvolution:
    def test_matches_unitary_without_decoherence(self):
        rng = np.random.default_rng(17)
        segs = [random_segment(rng) for _ in range(3)]
        closed = evolve_unitary(QuditState.pure(0), LEVELS, segs)
        open_ = evolve_open(QuditState.pure(0), LEVELS, segs, dec=None)
        assert np.max(np.abs(open_.rho - closed.as_density())) < 1e-8

    def test_trace_and_hermiticity_preserved(self):
        rng = np.random.default_rng(19)
        dec = default_decoherence()
        state = QuditState.pure(0)
        for _ in range(5):
            state = evolve_open(state, LEVELS, [random_segment(rng)], dec)
            rho = state.rho
            assert abs(np.trace(rho).real - 1.0) < 1e-9
            assert np.max(np.abs(rho - rho.conj().T)) < 1e-12
            evals = np.linalg.eigvalsh(rho)
            assert evals.min() > -1e-12

    def test_adjacent_coherence_decays_at_t2star(self):
        dec = DecoherenceParams(
            T1_s=(1e9, 1e9, 1e9, 1e9), T2star_s=(0.28e-3, 0.30e-3, 0.32e-3))
        tau = 0.1e-3
        wait = PulseSegment(tones=(), duration_s=tau)
        for pair in range(3):
            amp = np.zeros(4, dtype=complex)
            amp[pair] = amp[pair + 1] = 1 / np.sqrt(2)
            final = evolve_open(QuditState(amplitudes=amp), LEVELS, [wait], dec)
            coherence = abs(final.rho[pair, pair + 1])
            expected = 0.5 * np.exp(-tau / dec.T2star_s[pair])
            assert coherence == pytest.approx(expected, rel=1e-9)

    def test_distant_coherence_decays_at_path_sum(self):
        dec = DecoherenceParams(
            T1_s=(1e9, 1e9, 1e9, 1e9), T2star_s=(0.28e-3, 0.30e-3, 0.32e-3))
        tau = 0.1e-3
        amp = np.array([1, 0, 1, 0], dtype=complex) / np.sqrt(2)
        final = evolve_open(
            QuditState(amplitudes=amp), LEVELS,
            [PulseSegment(tones=(), duration_s=tau)], dec)
        rate = 1 / dec.T2star_s[0] + 1 / dec.T2star_s[1]
        assert abs(final.rho[0, 2]) == pytest.approx(0.5 * np.exp(-tau * rate),
                                                     rel=1e-9)

    def test_population_relaxation_matches_classical_chain(self):
        # With no drive the diagonal obeys the classical rate equation of
        # the adjacent-exchange chain; compare against its exact solution.
        dec = DecoherenceParams(
            T1_s=(34.0, 17.0, 17.0, 34.0), T2star_s=(1e9, 1e9, 1e9))
        q = np.zeros((4, 4))
        for i in range(4):
            neighbors = [j for j in (i - 1, i + 1) if 0 <= j < 4]
            q[i, i] = -1.0 / dec.T1_s[i]
            for j in neighbors:
                q[j, i] = 1.0 / (dec.T1_s[i] * len(neighbors))
        for t in (2.0, 11.0):
            final = evolve_open(
                QuditState.pure(1), LEVELS,
                [PulseSegment(tones=(), duration_s=t)], dec)
            expected = expm(q * t) @ np.array([0.0, 1.0, 0.0, 0.0])
            assert np.max(np.abs(final.populations() - expected)) < 1e-9


class TestExperiments:
    def test_rabi_matches_sine_squared(self):
        taus = np.linspace(0, 1e-6, 41)
        out = rabi_experiment(LEVELS, 0, 5.0, taus)
        expected = np.sin(np.pi * 5e6 * taus) ** 2
        assert np.max(np.abs(out["population"] - expected)) < 1e-9

    def test_rabi_detuned_amplitude(self):
        taus = np.linspace(0, 2e-6, 101)
        out = rabi_experiment(LEVELS, 2, 2.0, taus, detuning_Hz=1.5e6)
        contrast = 2e6**2 / (2e6**2 + 1.5e6**2)
        assert out["population"].max() == pytest.approx(contrast, abs=1e-3)

    def test_rabi_shot_noise_reproducible(self):
        taus = np.linspace(1.3e-8, 1e-6, 11)
        a = rabi_experiment(LEVELS, 0, 5.0, taus, shots=500,
                            rng=np.random.default_rng(5))
        b = rabi_experiment(LEVELS, 0, 5.0, taus, shots=500,
                            rng=np.random.default_rng(5))
        c = rabi_experiment(LEVELS, 0, 5.0, taus, shots=500,
                            rng=np.random.default_rng(6))
        assert np.array_equal(a["population"], b["population"])
        assert not np.array_equal(a["population"], c["population"])
        with pytest.raises(ValueError, match="rng"):
            rabi_experiment(LEVELS, 0, 5.0, taus, shots=500)

    def test_ramsey_fringe_formula_closed(self):
        delta = 1e3
        taus = np.linspace(0, 2e-3, 41)
        out = ramsey_experiment(LEVELS, 0, delta, taus, rabi_MHz=5.0)
        expected = 0.5 * (1 + np.cos(2 * np.pi * delta * taus))
        assert np.max(np.abs(out["population"] - expected)) < 1e-3

    def test_ramsey_recovers_t2star(self):
        dec = default_decoherence()
        delta = 1e4
        taus = np.linspace(0, 0.6e-3, 121)
        for pair in range(3):
            out = ramsey_experiment(LEVELS, pair, delta, taus, dec=dec)

            def model(t, t2, amp, freq, phase, off):
                return off + amp * np.cos(2 * np.pi * freq * t + phase) * np.exp(-t / t2)

            popt, _ = curve_fit(
                model, taus, out["population"],
                p0=(3e-4, 0.5, delta, 0.0, 0.5))
            assert popt[0] == pytest.approx(dec.T2star_s[pair], rel=0.01)
