"""Seeded generators for the synthetic datasets the calibration fitters consume.

All randomness flows from numpy's Philox counter-based generator keyed by an
explicit 64-bit seed, so identical seeds give bit-identical datasets on any
platform.  Noise amplitudes are per-channel Gaussian standard deviations in
the channel's own units.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .calibration import CrossingDataset, IQShotSet, PhaseTrack, three_angle_populations
from .reduced import avoided_crossing_energies


@dataclass(frozen=True)
class NoiseSpec:
    """Seed and Gaussian noise amplitude for a synthetic dataset."""

    seed: int = 0
    amplitude: float = 0.0

    def __post_init__(self):
        if self.amplitude < 0:
            raise ValueError(f"noise amplitude must be >= 0, got {self.amplitude}")

    def rng(self) -> np.random.Generator:
        return np.random.Generator(np.random.Philox(self.seed))


def synth_crossing(
    g_rf: float,
    intercepts: tuple,
    slopes: tuple,
    flux_offsets,
    probe_freqs,
    noise: NoiseSpec = NoiseSpec(),
    linewidth: float = 0.005,
) -> CrossingDataset:
    """Avoided-crossing response with Lorentzian peaks on both dressed branches.

    The bare branches are linear in flux: omega_ef = intercepts[0] +
    slopes[0] * delta and omega_s = intercepts[1] + slopes[1] * delta; the
    response at each grid point is the sum of unit-height Lorentzians
    centered on the dressed energies.
    """
    flux_offsets = np.asarray(flux_offsets, dtype=float)
    probe_freqs = np.asarray(probe_freqs, dtype=float)
    response = np.zeros((flux_offsets.size, probe_freqs.size))
    for i, delta in enumerate(flux_offsets):
        w_ef = intercepts[0] + slopes[0] * delta
        w_s = intercepts[1] + slopes[1] * delta
        e_plus, e_minus = avoided_crossing_energies(w_ef, w_s, g_rf)
        for center in (e_plus, e_minus):
            response[i] += linewidth**2 / ((probe_freqs - center) ** 2 + linewidth**2)
    if noise.amplitude > 0:
        response = response + noise.rng().normal(0.0, noise.amplitude, response.shape)
    return CrossingDataset(flux_offsets=flux_offsets, probe_freqs=probe_freqs, response=response)


def synth_phase_track(
    delta_freqs,
    dt: float,
    n_times: int,
    phi0: float = 0.0,
    noise: NoiseSpec = NoiseSpec(),
    a0: float = 0.5,
    a1_max: float = 0.4,
    T2: float = np.inf,
) -> PhaseTrack:
    """Three-angle phase series for a staircase of qubit-frequency changes.

    delta_freqs lists f_ge(V_i) - f_ge(0) in GHz per flux amplitude.  The
    accumulated phase is phi_sq(t) = -2 pi delta_f t + phi0 and the Ramsey
    contrast decays as a1_max * exp(-t/T2).
    """
    delta_freqs = np.asarray(delta_freqs, dtype=float)
    times = dt * np.arange(n_times)
    a1 = a1_max * np.exp(-times / T2) if np.isfinite(T2) else np.full(n_times, a1_max)
    p1 = np.empty((delta_freqs.size, n_times))
    p2 = np.empty_like(p1)
    p3 = np.empty_like(p1)
    for i, df in enumerate(delta_freqs):
        phi = -2.0 * np.pi * df * times + phi0
        p1[i], p2[i], p3[i] = three_angle_populations(a0, a1, phi)
    if noise.amplitude > 0:
        rng = noise.rng()
        p1 = p1 + rng.normal(0.0, noise.amplitude, p1.shape)
        p2 = p2 + rng.normal(0.0, noise.amplitude, p2.shape)
        p3 = p3 + rng.normal(0.0, noise.amplitude, p3.shape)
    return PhaseTrack(times=times, p1=p1, p2=p2, p3=p3, dt=dt)


def synth_iq_shots(
    r_g: complex,
    r_e: complex,
    sigma: float,
    populations: dict,
    n_shots: int,
    noise: NoiseSpec = NoiseSpec(),
) -> IQShotSet:
    """Single-shot IQ clouds per prepared state from the double-Gaussian model.

    populations maps each prepared-state label to its (P_g, P_e) occupation;
    each shot draws a component from those weights and an isotropic Gaussian
    around the matching center.  sigma = 0 gives delta clusters.
    """
    rng = noise.rng()
    shots = {}
    for label, (p_g, p_e) in populations.items():
        total = p_g + p_e
        if not np.isclose(total, 1.0):
            raise ValueError(f"populations for {label!r} must sum to 1, got {total}")
        excited = rng.random(n_shots) < p_e
        centers = np.where(excited, complex(r_e), complex(r_g))
        if sigma > 0:
            centers = centers + sigma * (rng.standard_normal(n_shots) + 1j * rng.standard_normal(n_shots))
        shots[label] = centers
    return IQShotSet(shots=shots)


def synth_decay(
    tau: float,
    delays,
    amplitude: float = 1.0,
    offset: float = 0.0,
    noise: NoiseSpec = NoiseSpec(),
) -> np.ndarray:
    """Exponentially decaying shift series amplitude * exp(-t/tau) + offset."""
    delays = np.asarray(delays, dtype=float)
    signal = amplitude * np.exp(-delays / tau) + offset
    if noise.amplitude > 0:
        signal = signal + noise.rng().normal(0.0, noise.amplitude, signal.shape)
    return signal
