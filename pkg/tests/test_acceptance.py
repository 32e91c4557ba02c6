"""Acceptance gate: the eleven release criteria, one printed line each.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
pass/fail lines; each test also asserts, so a plain pytest run fails on any
violated criterion.
"""
import json
import time

import numpy as np
import pytest

from fluxinit.calibration import (
    fit_avoided_crossing,
    fit_flux_spectrum,
    fit_iq_double_gaussian,
    initialization_error_metrology,
    solve_three_angle,
    three_angle_populations,
    track_frequency,
)
from fluxinit.circuit import (
    CircuitParams,
    charge_matrix_element,
    find_resonance_flux,
    solve_spectrum,
)
from fluxinit.cli import main as cli_main
from fluxinit.dynamics import (
    CavityParams,
    evolve_full_lindblad,
    evolve_reduced,
    extract_decay_time,
    initialization_error_map,
    leakage_removal_efficiency,
    steady_state_error,
)
from fluxinit.pulses import RampSpec, make_schedule, omega0_for_plateau
from fluxinit.reduced import ReducedParams, dark_state_survival
from fluxinit.synth import NoiseSpec, synth_crossing, synth_iq_shots, synth_phase_track

QA = CircuitParams(E_C=1.531, E_L=0.685, E_J=4.164, phi_ext=np.pi)
QB = CircuitParams(E_C=1.524, E_L=0.693, E_J=4.275, phi_ext=np.pi)
GAMMA = 1.0 / 40.0
G_RF = 0.056


def report(num, name, ok, detail=""):
    tag = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {num:02d} {name}: {tag} {detail}".rstrip())
    assert ok, f"criterion {num} ({name}) failed: {detail}"


def reference_schedule(plateau, T, T_pre=10.0, dt=1.0):
    spec = RampSpec(T=T, dt=dt)
    return make_schedule(spec, T_pre, 0.0, 0.0, omega0_for_plateau(spec, plateau))


def test_01_spectrum_fidelity():
    start = time.perf_counter()
    sol_a = solve_spectrum(QA)
    sol_b = solve_spectrum(QB)
    elapsed = time.perf_counter() - start
    vals = {
        "QA w_ge": (sol_a.transition_frequency(0, 1), 0.696),
        "QA w_ef": (sol_a.transition_frequency(1, 2), 4.322),
        "QB w_ge": (sol_b.transition_frequency(0, 1), 0.672),
    }
    ok = elapsed < 1.0
    detail = [f"runtime {elapsed * 1e3:.0f} ms"]
    for name, (got, want) in vals.items():
        ok = ok and abs(got - want) / want < 0.01
        detail.append(f"{name}={got:.4f}")
    report(1, "spectrum-fidelity", ok, ", ".join(detail))


def test_02_selection_rule():
    at_pi = charge_matrix_element(solve_spectrum(QA), 0, 2)
    at_2pi = charge_matrix_element(solve_spectrum(QA.at_flux(2.0 * np.pi)), 0, 2)
    away = charge_matrix_element(solve_spectrum(QA.at_offset(0.246 * 2.0 * np.pi)), 0, 2)
    ok = at_pi < 1e-10 and at_2pi < 1e-10 and away > 0.01
    report(2, "selection-rule", ok, f"pi:{at_pi:.1e} 2pi:{at_2pi:.1e} shifted:{away:.3f}")


def test_03_resonance_flux():
    targets = [
        (QA, 6.503, "red", 0.246),
        (QB, 6.686, "red", 0.262),
        (QA, 6.503, "blue", 0.127),
    ]
    results = []
    ok = True
    for params, omega_r, kind, want in targets:
        got = find_resonance_flux(params, omega_r, kind) / (2.0 * np.pi)
        ok = ok and abs(got - want) < 0.02
        results.append(f"{kind}:{got:.4f}")
    report(3, "resonance-flux", ok, " ".join(results))


def test_04_dark_state_dynamics():
    start = time.perf_counter()
    p = ReducedParams(Omega_ef=0.071, Delta=0.0, g_rf=G_RF, Gamma=GAMMA)
    schedule = reference_schedule(0.071, 500.0)
    traj = evolve_reduced(p, schedule, (1.0, 0.0, 0.0))
    elapsed = time.perf_counter() - start
    leak = traj.final("f0")
    excited = traj.final("e0") + traj.final("g1")
    approx = dark_state_survival(
        lambda s: schedule.theta_at(np.clip(s, 0.0, 500.0), G_RF), GAMMA, 500.0
    )
    rel = abs(excited - approx) / approx
    ok = leak < 1e-5 and rel < 0.10 and elapsed < 5.0
    report(
        4,
        "dark-state-dynamics",
        ok,
        f"P_f0={leak:.2e}, survival rel dev {rel * 100:.1f}%, {elapsed:.1f} s",
    )


@pytest.fixture(scope="module")
def error_map_grid():
    p = ReducedParams(Omega_ef=0.0, Delta=0.0, g_rf=G_RF, Gamma=GAMMA)
    omegas = np.linspace(0.035, 0.114, 20)
    durations = np.arange(200.0, 1001.0, 25.0)
    start = time.perf_counter()
    emap = initialization_error_map(p, omegas, durations, n_jobs=4)
    elapsed = time.perf_counter() - start
    return emap, elapsed


def test_05_leakage_ceiling(error_map_grid):
    emap, elapsed = error_map_grid
    peak = float(emap.leakage.max())
    ok = peak < 1e-3 and elapsed < 120.0
    report(
        5,
        "leakage-ceiling",
        ok,
        f"max P_f0={peak:.2e} over {emap.errors.shape[0]}x{emap.errors.shape[1]} "
        f"in {elapsed:.1f} s",
    )


def test_06_error_contours(error_map_grid):
    emap, _ = error_map_grid
    ok = True
    # every swept drive strength reaches the 1e-2 error level within 1 us
    for row in emap.errors:
        ok = ok and row.min() < 1e-2
    # strong drives reach 1e-3 within 400-500 ns
    col = int(np.argmin(np.abs(emap.durations - 500.0)))
    strong = emap.omegas > 0.100
    strong_errors = emap.errors[strong, col]
    ok = ok and np.all(strong_errors < 1e-3)
    report(
        6,
        "error-contours",
        ok,
        f"worst row min {emap.errors.min(axis=1).max():.2e}, "
        f"strong-drive at {emap.durations[col]:.0f} ns max {strong_errors.max():.2e}",
    )


def test_07_oracle_equivalence():
    delta = find_resonance_flux(QA, 6.503, "red")
    sol = solve_spectrum(QA.at_offset(delta))
    omega_p = 6.503 - sol.transition_frequency(0, 1)
    cavity = CavityParams(omega_r=6.503, Gamma=GAMMA, photon_dim=4)
    p = ReducedParams(Omega_ef=0.0, Delta=0.0, g_rf=G_RF, Gamma=GAMMA)
    star_points = [(0.043, 1000.0), (0.071, 500.0), (0.114, 300.0)]
    start = time.perf_counter()
    ok = True
    details = []
    for plateau, T in star_points:
        spec = RampSpec(T=T, dt=1.0)
        omega_0 = omega0_for_plateau(spec, plateau)
        sched_red = make_schedule(spec, 10.0, 0.0, 0.0, omega_0)
        sched_full = make_schedule(spec, 10.0, delta, omega_p, omega_0)
        reduced_err = evolve_reduced(p, sched_red, (1.0, 0.0, 0.0)).final_error()
        traj = evolve_full_lindblad(QA, cavity, G_RF, sched_full, initial=(1, 0))
        full_err = 1.0 - traj.populations["g0"][-1]
        diff = abs(reduced_err - full_err)
        ok = ok and diff < 5e-3
        details.append(f"({plateau * 1e3:.0f}MHz,{T:.0f}ns):{diff:.1e}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 300.0
    report(7, "oracle-equivalence", ok, " ".join(details) + f", {elapsed:.0f} s")


def test_08_steady_state_errors():
    p = ReducedParams(Omega_ef=0.0, Delta=0.0, g_rf=G_RF, Gamma=GAMMA)
    durations = np.linspace(400.0, 1000.0, 7)
    targets = {0.043: 0.00072, 0.071: 0.00042, 0.114: 0.00031}
    ok = True
    details = []
    for omega, want in targets.items():
        emap = initialization_error_map(p, [omega], durations)
        fit = extract_decay_time(durations, emap.errors[0])
        got = steady_state_error(0.177, 35.6, 1.0 / fit.tau_ns)
        ok = ok and abs(got - want) / want < 0.25
        details.append(f"{omega * 1e3:.0f}MHz:{got * 100:.4f}%")
    report(8, "steady-state-errors", ok, " ".join(details))


def test_09_leakage_removal():
    p = ReducedParams(Omega_ef=0.0, Delta=0.0, g_rf=G_RF, Gamma=GAMMA)
    t_pre = np.arange(0.0, 120.0, 1.0)
    curve = leakage_removal_efficiency(p, t_pre, 300.0, 0.114)
    signal = curve.efficiency - np.mean(curve.efficiency)
    spectrum = np.abs(np.fft.rfft(signal))
    freqs = np.fft.rfftfreq(signal.size, d=1.0)
    period = 1.0 / freqs[1:][np.argmax(spectrum[1:])]
    window = (t_pre >= 95.0) & (t_pre <= 110.0)
    crest = curve.efficiency[window].max()
    ok = abs(period - 1.0 / G_RF) / (1.0 / G_RF) < 0.15 and crest >= 0.98
    report(
        9,
        "leakage-removal",
        ok,
        f"period {period:.1f} ns (expect {1.0 / G_RF:.1f}), crest {crest:.4f}",
    )


def test_10_calibration_round_trips():
    ok = True
    details = []

    # avoided crossing: g_rf recovered to 0.1 MHz on noiseless data
    flux = np.linspace(-0.06, 0.06, 25)
    freqs = np.linspace(4.072, 4.572, 201)
    data = synth_crossing(G_RF, (4.322, 4.322), (-0.9, 0.0), flux, freqs)
    gap_err = abs(fit_avoided_crossing(data).g_rf - G_RF)
    ok = ok and gap_err < 1e-4
    details.append(f"crossing {gap_err * 1e6:.1f} kHz")

    # three-angle inversion exact over 1000 draws
    rng = np.random.Generator(np.random.Philox(101))
    worst = 0.0
    for _ in range(1000):
        a0 = 0.3 + 0.4 * rng.random()
        a1 = 1e-6 + 0.29 * rng.random()
        phi = rng.random() * 2.0 * np.pi - np.pi
        rec = solve_three_angle(*three_angle_populations(a0, a1, phi))
        worst = max(
            worst,
            abs(rec[0] - a0),
            abs(rec[1] - a1),
            abs(np.angle(np.exp(1j * (rec[2] - phi)))),
        )
    ok = ok and worst < 1e-12
    details.append(f"three-angle {worst:.1e}")

    # frequency staircase to 0.1 MHz
    steps = [-0.030 * (i + 1) for i in range(10)]
    track = synth_phase_track(steps, dt=1.0, n_times=300, phi0=0.1)
    f_ge = track_frequency(track, 1.0).f_ge
    stair_err = float(np.max(np.abs(f_ge - (1.0 + np.array(steps)))))
    ok = ok and stair_err < 1e-4
    details.append(f"staircase {stair_err * 1e6:.1f} kHz")

    # flux-spectrum fit to 0.5%
    phi_ext = np.linspace(np.pi, np.pi - 0.45 * 2.0 * np.pi, 20)
    f_curve = np.array(
        [
            solve_spectrum(QA.at_flux(v), basis_dim=60).transition_frequency(0, 1)
            for v in phi_ext
        ]
    )
    fit = fit_flux_spectrum(
        phi_ext, f_curve, CircuitParams(E_C=1.45, E_L=0.72, E_J=4.0, phi_ext=np.pi)
    )
    spec_err = max(
        abs(fit.params.E_C - 1.531) / 1.531,
        abs(fit.params.E_L - 0.685) / 0.685,
        abs(fit.params.E_J - 4.164) / 4.164,
    )
    ok = ok and spec_err < 0.005
    details.append(f"spectrum {spec_err * 100:.3f}%")

    # IQ mixture centers to 0.05 sigma at 1e4 shots
    shots = synth_iq_shots(
        0.0j, 3.0 + 0.0j, 1.0, {"g": (1.0, 0.0), "e": (0.0, 1.0)}, 10000,
        noise=NoiseSpec(seed=55),
    )
    iq = fit_iq_double_gaussian(shots)
    iq_err = max(abs(iq.r_g - 0.0), abs(iq.r_e - 3.0))
    ok = ok and iq_err < 0.05
    details.append(f"iq {iq_err:.3f}sigma")

    # metrology inversion exact
    r_g, r_e = 0.1 + 0.2j, 1.4 - 0.5j
    e_i, e_down = 0.013, 0.007
    mean_g = (1.0 - e_i) * r_g + e_i * r_e
    mean_e = (e_i + e_down) * r_g + (1.0 - e_i - e_down) * r_e
    res = initialization_error_metrology(r_g=r_g, r_e=r_e, mean_g=mean_g, mean_e=mean_e)
    met_err = max(abs(res.e_i - e_i), abs(res.e_down - e_down))
    ok = ok and met_err < 1e-10
    details.append(f"metrology {met_err:.1e}")

    report(10, "calibration-round-trips", ok, ", ".join(details))


def test_11_determinism(tmp_path):
    configs = {
        "synth": "synth_crossing.json",
        "simulate-init": "qubit_a_init_trajectory.json",
    }
    import os

    config_dir = os.path.join(os.path.dirname(__file__), "..", "configs")
    ok = True
    for sub, name in configs.items():
        bodies = []
        for run in ("a", "b"):
            out = tmp_path / f"{sub}-{run}"
            code = cli_main(
                [sub, "--config", os.path.join(config_dir, name), "--out", str(out), "--quiet"]
            )
            ok = ok and code == 0
            files = sorted(out.iterdir())
            bodies.append(b"".join(f.read_bytes() for f in files))
        ok = ok and bodies[0] == bodies[1]
    report(11, "determinism", ok, "synth + simulate-init reruns byte-identical")
