"""Synthetic dataset generators: determinism and statistical moments."""
import numpy as np
import pytest

from fluxinit.reduced import avoided_crossing_energies
from fluxinit.synth import (
    NoiseSpec,
    synth_crossing,
    synth_decay,
    synth_iq_shots,
    synth_phase_track,
)


class TestNoiseSpec:
    def test_negative_amplitude_rejected(self):
        with pytest.raises(ValueError):
            NoiseSpec(seed=0, amplitude=-0.1)

    def test_rng_is_counter_based(self):
        spec = NoiseSpec(seed=12)
        assert isinstance(spec.rng().bit_generator, np.random.Philox)

    def test_same_seed_same_stream(self):
        a = NoiseSpec(seed=3).rng().random(100)
        b = NoiseSpec(seed=3).rng().random(100)
        assert np.array_equal(a, b)


class TestSynthCrossing:
    def test_noiseless_peaks_at_dressed_energies(self):
        flux = np.array([0.02])
        w_ef = 4.322 - 0.9 * 0.02
        e_plus, e_minus = avoided_crossing_energies(w_ef, 4.322, 0.056)
        freqs = np.array([e_plus, e_minus, 4.0])
        data = synth_crossing(0.056, (4.322, 4.322), (-0.9, 0.0), flux, freqs)
        # unit-height Lorentzians peak exactly on the dressed branches
        assert data.response[0, 0] >= 1.0
        assert data.response[0, 1] >= 1.0
        assert data.response[0, 2] < 0.1

    def test_seed_repeat_bit_identical(self):
        flux = np.linspace(-0.05, 0.05, 11)
        freqs = np.linspace(4.1, 4.5, 41)
        a = synth_crossing(0.056, (4.322, 4.322), (-0.9, 0.0), flux, freqs,
                           noise=NoiseSpec(seed=7, amplitude=0.02))
        b = synth_crossing(0.056, (4.322, 4.322), (-0.9, 0.0), flux, freqs,
                           noise=NoiseSpec(seed=7, amplitude=0.02))
        assert np.array_equal(a.response, b.response)

    def test_different_seed_differs(self):
        flux = np.linspace(-0.05, 0.05, 11)
        freqs = np.linspace(4.1, 4.5, 41)
        a = synth_crossing(0.056, (4.322, 4.322), (-0.9, 0.0), flux, freqs,
                           noise=NoiseSpec(seed=7, amplitude=0.02))
        b = synth_crossing(0.056, (4.322, 4.322), (-0.9, 0.0), flux, freqs,
                           noise=NoiseSpec(seed=8, amplitude=0.02))
        assert not np.array_equal(a.response, b.response)


class TestSynthPhaseTrack:
    def test_zero_staircase_constant_phase(self):
        track = synth_phase_track([0.0], dt=1.0, n_times=50, phi0=0.4)
        # constant phase means constant populations
        assert np.ptp(track.p1[0]) < 1e-14
        assert np.ptp(track.p2[0]) < 1e-14

    def test_infinite_t2_constant_contrast(self):
        track = synth_phase_track([-0.02], dt=1.0, n_times=100, phi0=0.0)
        a1 = np.sqrt(
            2.0 / 3.0 * (
                (track.p1[0] - 0.5) ** 2
                + (track.p2[0] - 0.5) ** 2
                + (track.p3[0] - 0.5) ** 2
            )
        )
        assert np.ptp(a1) < 1e-12

    def test_finite_t2_decaying_contrast(self):
        track = synth_phase_track([-0.02], dt=1.0, n_times=200, phi0=0.0, T2=100.0)
        a1 = np.sqrt(
            2.0 / 3.0 * (
                (track.p1[0] - 0.5) ** 2
                + (track.p2[0] - 0.5) ** 2
                + (track.p3[0] - 0.5) ** 2
            )
        )
        assert a1[-1] == pytest.approx(a1[0] * np.exp(-199.0 / 100.0), rel=1e-9)

    def test_sampling_rate(self):
        track = synth_phase_track([0.0], dt=0.25, n_times=10)
        assert track.sampling_rate == pytest.approx(4.0)


class TestSynthIQ:
    def test_pure_state_single_cluster(self):
        shots = synth_iq_shots(1.0 + 0.0j, -1.0 + 0.0j, 0.0, {"g": (1.0, 0.0)}, 500)
        assert np.all(shots.shots["g"] == 1.0 + 0.0j)

    def test_moments_at_1e5(self):
        n = 100000
        sigma = 0.7
        shots = synth_iq_shots(
            0.5 + 0.2j, -1.0 + 1.0j, sigma, {"e": (0.01, 0.99)}, n,
            noise=NoiseSpec(seed=11),
        )
        z = shots.shots["e"]
        mean = np.mean(z)
        expect = 0.01 * (0.5 + 0.2j) + 0.99 * (-1.0 + 1.0j)
        # mixture standard error per quadrature
        se = np.sqrt((sigma**2 + 0.01 * 0.99 * abs(1.5 - 0.8j) ** 2) / n)
        assert abs(mean.real - expect.real) < 3.0 * se
        assert abs(mean.imag - expect.imag) < 3.0 * se

    def test_mixture_weight_convergence(self):
        n = 100000
        shots = synth_iq_shots(
            0.0j, 4.0 + 0.0j, 0.1, {"g": (0.99, 0.01)}, n, noise=NoiseSpec(seed=13)
        )
        frac_e = np.mean(shots.shots["g"].real > 2.0)
        assert frac_e == pytest.approx(0.01, abs=0.003)

    def test_bad_populations_rejected(self):
        with pytest.raises(ValueError):
            synth_iq_shots(0.0j, 1.0 + 0.0j, 0.1, {"g": (0.6, 0.6)}, 10)


class TestSynthDecay:
    def test_noiseless_values(self):
        delays = np.array([0.0, 40.0, 80.0])
        shifts = synth_decay(40.0, delays, amplitude=2.0, offset=0.5)
        assert np.allclose(shifts, 2.0 * np.exp(-delays / 40.0) + 0.5)

    def test_seeded_noise_reproducible(self):
        delays = np.linspace(0.0, 100.0, 11)
        a = synth_decay(40.0, delays, noise=NoiseSpec(seed=5, amplitude=0.02))
        b = synth_decay(40.0, delays, noise=NoiseSpec(seed=5, amplitude=0.02))
        assert np.array_equal(a, b)
