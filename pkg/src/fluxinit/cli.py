"""Command-line entry point: JSON configs in, CSV/JSON figure data out.

Every output file carries a '#' provenance line with the toolkit version and
the sha256 of the canonical config body, so a rerun with the same config and
seed is byte-identical.  Validation failures report every violated
constraint at once, as a machine-readable JSON record on stderr.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .calibration import (
    fit_avoided_crossing,
    fit_flux_spectrum,
    fit_iq_double_gaussian,
    fit_photon_decay,
    initialization_error_metrology,
    leakage_removal_bound,
    read_crossing_csv,
    read_iq_csv,
    read_phase_track_csv,
    track_frequency,
    write_crossing_csv,
    write_iq_csv,
    write_phase_track_csv,
)
from .circuit import (
    CircuitParams,
    charge_matrix_element,
    find_resonance_flux,
    matrix_element_flux_sweep,
    solve_spectrum,
)
from .dynamics import (
    CavityParams,
    evolve_full_lindblad,
    evolve_reduced,
    extract_decay_time,
    initialization_error_map,
    leakage_removal_efficiency,
    steady_state_error,
)
from .pulses import DEFAULT_RAMP_COEFFS, RampSpec, make_schedule, omega0_for_plateau
from .reduced import ReducedParams, SubspaceTriple
from .synth import NoiseSpec, synth_crossing, synth_decay, synth_iq_shots, synth_phase_track

SUBCOMMANDS = (
    "spectrum",
    "matrix-elements",
    "find-resonance",
    "simulate-init",
    "error-map",
    "leakage-removal",
    "steady-state",
    "fit-crossing",
    "fit-decay",
    "extract-spectrum",
    "metrology",
    "synth",
)

KNOWN_SECTIONS = {"device", "schedule", "sweep", "input", "synth", "metrology", "output_dir"}


class ConfigError(ValueError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _config_hash(cfg: dict) -> str:
    body = json.dumps(cfg, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(body.encode()).hexdigest()[:16]


def _provenance(cfg: dict) -> str:
    return f"fluxinit v{__version__} config_sha256={_config_hash(cfg)}"


def _check_keys(cfg: dict, violations: list):
    for key in cfg:
        if key not in KNOWN_SECTIONS:
            violations.append(f"unknown top-level key: {key!r}")


def _need(section: dict, name: str, keys, violations: list):
    missing = [k for k in keys if k not in section]
    for k in missing:
        violations.append(f"missing {name}.{k}")
    return not missing


def _circuit(cfg: dict, violations: list):
    dev = cfg.get("device", {})
    if not _need(dev, "device", ("E_C", "E_L", "E_J"), violations):
        return None
    try:
        return CircuitParams(dev["E_C"], dev["E_L"], dev["E_J"], dev.get("phi_ext", np.pi))
    except ValueError as exc:
        violations.append(str(exc))
        return None


def _gamma(cfg: dict, violations: list):
    dev = cfg.get("device", {})
    if "Gamma_per_ns" in dev:
        return float(dev["Gamma_per_ns"])
    if "photon_decay_time_ns" in dev:
        tau = float(dev["photon_decay_time_ns"])
        if tau <= 0:
            violations.append("device.photon_decay_time_ns must be > 0")
            return None
        return 1.0 / tau
    violations.append("missing device.photon_decay_time_ns (or device.Gamma_per_ns)")
    return None


def _ramp_spec(cfg: dict, violations: list):
    sch = cfg.get("schedule", {})
    try:
        return RampSpec(
            lambdas=tuple(sch.get("lambdas", DEFAULT_RAMP_COEFFS)),
            theta_f=sch.get("theta_f", np.pi / 4.0),
            T=sch.get("T", 500.0),
            dt=sch.get("dt", 1.0),
        )
    except ValueError as exc:
        violations.append(f"schedule: {exc}")
        return None


def _operating_point(cfg: dict, circuit, violations: list):
    """Flux offset and drive frequency: explicit values or the resonance search."""
    sch = cfg.get("schedule", {})
    dev = cfg.get("device", {})
    triple = sch.get("triple", "red")
    if triple not in ("red", "blue"):
        violations.append(f"schedule.triple must be 'red' or 'blue', got {triple!r}")
        return None, None, triple
    if "flux_offset" in sch and "omega_p" in sch:
        return float(sch["flux_offset"]), float(sch["omega_p"]), triple
    if "omega_r" not in dev:
        violations.append("missing device.omega_r (needed to locate the resonance)")
        return None, None, triple
    if circuit is None:
        return None, None, triple
    offset = find_resonance_flux(circuit, dev["omega_r"], triple)
    sol = solve_spectrum(circuit.at_offset(offset))
    if triple == "red":
        omega_p = dev["omega_r"] - sol.transition_frequency(0, 1)
    else:
        omega_p = dev["omega_r"] + sol.transition_frequency(0, 1)
    return offset, omega_p, triple


def _reduced_params(cfg: dict, gamma: float, omega_p: float, violations: list):
    dev = cfg.get("device", {})
    sch = cfg.get("schedule", {})
    if not _need(dev, "device", ("g_rf",), violations):
        return None
    return ReducedParams(
        Omega_ef=sch.get("plateau_omega", 0.0),
        Delta=sch.get("Delta", 0.0),
        g_rf=dev["g_rf"],
        Gamma=gamma,
        omega_p=omega_p or 0.0,
    )


def _resolve_input(path, out: Path) -> Path:
    """Input paths are taken as given, else relative to the output directory."""
    p = Path(path)
    if p.exists():
        return p
    return out / p


def _write_json(path: Path, cfg: dict, payload: dict):
    payload = {"provenance": _provenance(cfg), **payload}
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# subcommand bodies


def _cmd_spectrum(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    circuit = _circuit(cfg, violations)
    if violations:
        raise ConfigError(violations)
    sol = solve_spectrum(circuit)
    payload = {
        "energies_GHz": [float(e) for e in sol.energies[:6]],
        "omega_ge": sol.transition_frequency(0, 1),
        "omega_ef": sol.transition_frequency(1, 2),
        "omega_gf": sol.transition_frequency(0, 2),
        "omega_gh": sol.transition_frequency(0, 3),
        "n_ge": charge_matrix_element(sol, 0, 1),
        "n_gf": charge_matrix_element(sol, 0, 2),
        "n_ef": charge_matrix_element(sol, 1, 2),
    }
    _write_json(out / "spectrum.json", cfg, payload)
    return ["spectrum.json"]


def _cmd_matrix_elements(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    circuit = _circuit(cfg, violations)
    sweep = cfg.get("sweep", {})
    _need(sweep, "sweep", ("offsets",), violations)
    dev = cfg.get("device", {})
    _need(dev, "device", ("omega_r",), violations)
    if violations:
        raise ConfigError(violations)
    curve = matrix_element_flux_sweep(circuit, dev["omega_r"], sweep["offsets"])
    path = out / "matrix_elements.csv"
    with open(path, "w") as fh:
        fh.write(f"# {_provenance(cfg)}\n")
        fh.write("flux_offset_rad,n_gf,sideband_GHz\n")
        for d, v, s in zip(curve.flux_offsets, curve.values, curve.sideband_freqs):
            fh.write(f"{d:.12g},{v:.12g},{s:.12g}\n")
    return ["matrix_elements.csv"]


def _cmd_find_resonance(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    circuit = _circuit(cfg, violations)
    dev = cfg.get("device", {})
    _need(dev, "device", ("omega_r",), violations)
    triple = cfg.get("schedule", {}).get("triple", "red")
    if violations:
        raise ConfigError(violations)
    offset = find_resonance_flux(circuit, dev["omega_r"], triple)
    sol = solve_spectrum(circuit.at_offset(offset))
    omega_ge = sol.transition_frequency(0, 1)
    omega_p = dev["omega_r"] - omega_ge if triple == "red" else dev["omega_r"] + omega_ge
    _write_json(
        out / "resonance.json",
        cfg,
        {
            "triple": triple,
            "flux_offset_rad": offset,
            "flux_offset_over_2pi": offset / (2.0 * np.pi),
            "omega_p_GHz": omega_p,
            "omega_ge_GHz": omega_ge,
        },
    )
    return ["resonance.json"]


def _cmd_simulate_init(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    circuit = _circuit(cfg, violations)
    gamma = _gamma(cfg, violations)
    spec = _ramp_spec(cfg, violations)
    sch = cfg.get("schedule", {})
    _need(sch, "schedule", ("plateau_omega",), violations)
    offset, omega_p, triple = (None, None, "red")
    if not violations:
        offset, omega_p, triple = _operating_point(cfg, circuit, violations)
    p = _reduced_params(cfg, gamma or 0.0, omega_p, violations) if not violations else None
    if violations:
        raise ConfigError(violations)

    schedule = make_schedule(
        spec, sch.get("T_pre", 10.0), offset, omega_p, omega0_for_plateau(spec, sch["plateau_omega"])
    )
    model = sch.get("model", "reduced")
    initial_label = sch.get("initial", "e0")
    if model == "full":
        dev = cfg["device"]
        cav = CavityParams(dev["omega_r"], gamma, int(sch.get("photon_dim", 4)))
        level = {"g": 0, "e": 1, "f": 2, "h": 3}[initial_label[0]]
        photon = int(initial_label[1])
        traj = evolve_full_lindblad(
            circuit,
            cav,
            dev["g_rf"],
            schedule,
            initial=(level, photon),
            triple=SubspaceTriple.blue() if triple == "blue" else SubspaceTriple.red(),
        )
    else:
        labels = ("e0", "f0", "g1") if triple == "red" else ("g0", "h0", "e1")
        initial = np.zeros(3)
        initial[labels.index(initial_label)] = 1.0
        traj = evolve_reduced(p, schedule, initial, labels=labels)
    traj.to_csv(out / "trajectory.csv", provenance=_provenance(cfg))
    return ["trajectory.csv"]


def _cmd_error_map(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    gamma = _gamma(cfg, violations)
    sweep = cfg.get("sweep", {})
    _need(sweep, "sweep", ("omegas", "durations"), violations)
    if not violations and (len(sweep["omegas"]) == 0 or len(sweep["durations"]) == 0):
        violations.append("sweep.omegas and sweep.durations must be non-empty")
    dev = cfg.get("device", {})
    _need(dev, "device", ("g_rf",), violations)
    if violations:
        raise ConfigError(violations)
    sch = cfg.get("schedule", {})
    p = ReducedParams(Omega_ef=0.0, Delta=sch.get("Delta", 0.0), g_rf=dev["g_rf"], Gamma=gamma)
    emap = initialization_error_map(
        p,
        sweep["omegas"],
        sweep["durations"],
        lambdas=tuple(sch.get("lambdas", DEFAULT_RAMP_COEFFS)),
        theta_f=sch.get("theta_f", np.pi / 4.0),
        T_pre=sch.get("T_pre", 10.0),
        n_jobs=args.jobs,
    )
    emap.to_csv(out / "error_map.csv", provenance=_provenance(cfg))
    return ["error_map.csv"]


def _cmd_leakage_removal(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    gamma = _gamma(cfg, violations)
    sweep = cfg.get("sweep", {})
    _need(sweep, "sweep", ("t_pre",), violations)
    sch = cfg.get("schedule", {})
    _need(sch, "schedule", ("plateau_omega",), violations)
    dev = cfg.get("device", {})
    _need(dev, "device", ("g_rf",), violations)
    if violations:
        raise ConfigError(violations)
    p = ReducedParams(Omega_ef=0.0, Delta=sch.get("Delta", 0.0), g_rf=dev["g_rf"], Gamma=gamma)
    curve = leakage_removal_efficiency(
        p,
        sweep["t_pre"],
        sch.get("T", 300.0),
        sch["plateau_omega"],
        lambdas=tuple(sch.get("lambdas", DEFAULT_RAMP_COEFFS)),
        theta_f=sch.get("theta_f", np.pi / 4.0),
    )
    path = out / "leakage_removal.csv"
    with open(path, "w") as fh:
        fh.write(f"# {_provenance(cfg)}\n")
        fh.write("T_pre_ns,efficiency,excited_remainder\n")
        for t, e, r in zip(curve.t_pre, curve.efficiency, curve.excited_remainder):
            fh.write(f"{t:.12g},{e:.12g},{r:.12g}\n")
    return ["leakage_removal.csv"]


def _cmd_steady_state(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    gamma = _gamma(cfg, violations)
    dev = cfg.get("device", {})
    _need(dev, "device", ("g_rf", "n_th", "T1_us"), violations)
    sweep = cfg.get("sweep", {})
    _need(sweep, "sweep", ("omegas", "durations"), violations)
    if violations:
        raise ConfigError(violations)
    sch = cfg.get("schedule", {})
    p = ReducedParams(Omega_ef=0.0, Delta=sch.get("Delta", 0.0), g_rf=dev["g_rf"], Gamma=gamma)
    emap = initialization_error_map(
        p, sweep["omegas"], sweep["durations"], T_pre=sch.get("T_pre", 10.0), n_jobs=args.jobs
    )
    entries = []
    for i, omega in enumerate(emap.omegas):
        fit = extract_decay_time(emap.durations, emap.errors[i])
        err = steady_state_error(dev["n_th"], dev["T1_us"], 1.0 / fit.tau_ns)
        entries.append(
            {
                "omega_GHz": float(omega),
                "decay_time_ns": fit.tau_ns,
                "decay_fit_ok": fit.ok,
                "steady_state_error": err,
            }
        )
    _write_json(out / "steady_state.json", cfg, {"entries": entries})
    return ["steady_state.json"]


def _cmd_fit_crossing(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    inp = cfg.get("input", {})
    _need(inp, "input", ("crossing_csv",), violations)
    if violations:
        raise ConfigError(violations)
    data = read_crossing_csv(_resolve_input(inp["crossing_csv"], out))
    fit = fit_avoided_crossing(data)
    _write_json(
        out / "crossing_fit.json",
        cfg,
        {
            "g_rf_GHz": fit.g_rf,
            "resonance_flux_rad": fit.resonance_flux,
            "resonance_freq_GHz": fit.resonance_freq,
            "slopes": list(fit.slopes),
            "rms_residual": fit.rms_residual,
            "uncertainties": {k: float(v) for k, v in fit.uncertainties.items()},
        },
    )
    return ["crossing_fit.json"]


def _cmd_fit_decay(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    inp = cfg.get("input", {})
    _need(inp, "input", ("decay_csv",), violations)
    if violations:
        raise ConfigError(violations)
    path = _resolve_input(inp["decay_csv"], out)
    rows = [
        line
        for line in Path(path).read_text().splitlines()
        if line and not line.startswith("#") and not line[0].isalpha()
    ]
    raw = np.loadtxt(rows, delimiter=",", ndmin=2)
    fit = fit_photon_decay(raw[:, 0], raw[:, 1])
    _write_json(
        out / "decay_fit.json",
        cfg,
        {
            "tau_ns": fit.tau_ns if np.isfinite(fit.tau_ns) else "inf",
            "amplitude": fit.amplitude,
            "offset": fit.offset,
            "rms_residual": fit.rms_residual,
            "ok": fit.ok,
        },
    )
    return ["decay_fit.json"]


def _cmd_extract_spectrum(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    inp = cfg.get("input", {})
    _need(inp, "input", ("phase_track_csv", "f_ge_at_zero", "flux_values"), violations)
    dev = cfg.get("device", {})
    _need(dev, "device", ("E_C", "E_L", "E_J"), violations)
    if violations:
        raise ConfigError(violations)
    track = read_phase_track_csv(_resolve_input(inp["phase_track_csv"], out))
    freq_track = track_frequency(track, inp["f_ge_at_zero"])
    guess = CircuitParams(dev["E_C"], dev["E_L"], dev["E_J"], np.pi)
    fit = fit_flux_spectrum(inp["flux_values"], freq_track.f_ge, guess)
    _write_json(
        out / "spectrum_fit.json",
        cfg,
        {
            "E_C": fit.params.E_C,
            "E_L": fit.params.E_L,
            "E_J": fit.params.E_J,
            "rms_residual": fit.rms_residual,
            "f_ge_track_GHz": [float(f) for f in freq_track.f_ge],
            "ambiguous": [bool(b) for b in freq_track.ambiguous],
        },
    )
    return ["spectrum_fit.json"]


def _cmd_metrology(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    inp = cfg.get("input", {})
    met = cfg.get("metrology", {})
    if "iq_csv" not in inp and "r_g" not in met:
        violations.append("need input.iq_csv or metrology.r_g/r_e")
    if violations:
        raise ConfigError(violations)
    if "iq_csv" in inp:
        shots = read_iq_csv(_resolve_input(inp["iq_csv"], out))
        iq = fit_iq_double_gaussian(shots)
        r_g, r_e, sigma = iq.r_g, iq.r_e, iq.sigma
        mean_g = complex(np.mean(shots.shots["g"])) if "g" in shots.shots else None
        mean_e = complex(np.mean(shots.shots["e"])) if "e" in shots.shots else None
    else:
        r_g = complex(*met["r_g"]) if isinstance(met["r_g"], list) else complex(met["r_g"])
        r_e = complex(*met["r_e"]) if isinstance(met["r_e"], list) else complex(met["r_e"])
        sigma = met.get("sigma")
        mean_g = complex(*met["mean_g"]) if "mean_g" in met else None
        mean_e = complex(*met["mean_e"]) if "mean_e" in met else None
    result = initialization_error_metrology(
        rabi_contrast=met.get("rabi_contrast"),
        r_g=r_g,
        r_e=r_e,
        mean_g=mean_g,
        mean_e=mean_e,
        sigma=sigma,
    )
    payload = {
        "e_i": result.e_i,
        "e_down": result.e_down,
        "r_g": [r_g.real, r_g.imag],
        "r_e": [r_e.real, r_e.imag],
        "sigma": sigma,
    }
    if mean_g is not None and mean_e is not None and result.e_down is not None:
        payload["leakage_removal_bound"] = leakage_removal_bound(
            mean_g, mean_e, r_g, r_e, result.e_down
        )
    _write_json(out / "metrology.json", cfg, payload)
    return ["metrology.json"]


def _cmd_synth(cfg, out, args):
    violations: list = []
    _check_keys(cfg, violations)
    syn = cfg.get("synth", {})
    _need(syn, "synth", ("kind",), violations)
    if violations:
        raise ConfigError(violations)
    kind = syn["kind"]
    seed = args.seed if args.seed is not None else syn.get("seed", 0)
    noise = NoiseSpec(seed=seed, amplitude=syn.get("noise_amplitude", 0.0))
    prov = _provenance(cfg)
    if kind == "crossing":
        data = synth_crossing(
            syn["g_rf"],
            tuple(syn["intercepts"]),
            tuple(syn["slopes"]),
            np.asarray(syn["flux_offsets"], dtype=float),
            np.asarray(syn["probe_freqs"], dtype=float),
            noise=noise,
            linewidth=syn.get("linewidth", 0.005),
        )
        write_crossing_csv(out / "crossing.csv", data, provenance=prov)
        return ["crossing.csv"]
    if kind == "phase-track":
        track = synth_phase_track(
            syn["delta_freqs"],
            syn.get("dt", 1.0),
            syn.get("n_times", 200),
            phi0=syn.get("phi0", 0.0),
            noise=noise,
            T2=syn.get("T2", np.inf),
        )
        write_phase_track_csv(out / "phase_track.csv", track, provenance=prov)
        return ["phase_track.csv"]
    if kind == "iq":
        shots = synth_iq_shots(
            complex(*syn["r_g"]),
            complex(*syn["r_e"]),
            syn["sigma"],
            {k: tuple(v) for k, v in syn["populations"].items()},
            syn.get("n_shots", 10000),
            noise=noise,
        )
        write_iq_csv(out / "iq_shots.csv", shots, provenance=prov)
        return ["iq_shots.csv"]
    if kind == "decay":
        delays = np.asarray(syn["delays"], dtype=float)
        shifts = synth_decay(
            syn["tau_ns"],
            delays,
            amplitude=syn.get("amplitude", 1.0),
            offset=syn.get("offset", 0.0),
            noise=noise,
        )
        with open(out / "decay.csv", "w") as fh:
            fh.write(f"# {prov}\n")
            fh.write("delay_ns,shift\n")
            for t, s in zip(delays, shifts):
                fh.write(f"{t:.12g},{s:.12g}\n")
        return ["decay.csv"]
    raise ConfigError([f"unknown synth.kind: {kind!r}"])


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "matrix-elements": _cmd_matrix_elements,
    "find-resonance": _cmd_find_resonance,
    "simulate-init": _cmd_simulate_init,
    "error-map": _cmd_error_map,
    "leakage-removal": _cmd_leakage_removal,
    "steady-state": _cmd_steady_state,
    "fit-crossing": _cmd_fit_crossing,
    "fit-decay": _cmd_fit_decay,
    "extract-spectrum": _cmd_extract_spectrum,
    "metrology": _cmd_metrology,
    "synth": _cmd_synth,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fluxinit",
        description="Sideband-cooling initialization simulator and calibration toolkit",
    )
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", required=True, help="JSON configuration file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--jobs", type=int, default=1, help="parallel workers for sweeps")
    parser.add_argument("--seed", type=int, default=None, help="override the synth seed")
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": "config-load", "message": str(exc)}), file=sys.stderr)
        return 2

    out_dir = args.out or os.environ.get("FLUXINIT_OUT") or cfg.get("output_dir", ".")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    try:
        written = _HANDLERS[args.subcommand](cfg, out, args)
    except ConfigError as exc:
        print(
            json.dumps({"error": "config-validation", "violations": exc.violations}),
            file=sys.stderr,
        )
        return 2
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
    if not args.quiet:
        for name in written:
            print(out / name)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
