"""Time evolution of the reduced model and the full circuit-cavity oracle.

evolve_reduced integrates the non-Hermitian rotating-frame model with a
fixed-step classical RK4 (one-step, fourth order) for bitwise-deterministic
trajectories; the hot loop lives in fluxinit._kernels.  evolve_full_lindblad
is the brute-force check: a Lindblad master equation on the truncated
fluxonium x cavity product space, driven in the lab frame with the shaped
microwave pulse and a single photon-loss collapse channel.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from joblib import Parallel, delayed

from ._kernels import propagate_reduced
from .circuit import CircuitParams, charge_matrix_element, solve_spectrum
from .pulses import ControlSchedule, RampSpec, make_schedule, omega0_for_plateau
from .reduced import TWO_PI, ReducedParams, SubspaceTriple

DEFAULT_INTEGRATION_DT = 0.02
FLUXONIUM_LABELS = ("g", "e", "f", "h")


class IntegrationError(RuntimeError):
    """Raised when the state stops being finite during propagation."""


@dataclass
class Trajectory:
    """Time-indexed populations of the tracked states.

    For the reduced model the populations are the three subspace states and
    p_ground books the norm lost to cavity emission.  For the full model the
    populations are per product state, p_ground is P_g0 and trace records
    the density-matrix trace at each sample.
    """

    times: np.ndarray
    populations: dict
    p_ground: np.ndarray
    trace: np.ndarray | None = None

    def final(self, key: str) -> float:
        return float(self.populations[key][-1])

    def final_error(self) -> float:
        """Final total excited population 1 - P_ground."""
        return float(1.0 - self.p_ground[-1])

    def to_csv(self, path, provenance: str | None = None):
        keys = list(self.populations)
        header = "time_ns," + ",".join(f"P_{k}" for k in keys) + ",P_ground"
        cols = [self.times] + [self.populations[k] for k in keys] + [self.p_ground]
        body = "\n".join(
            ",".join(f"{x:.12g}" for x in row) for row in np.column_stack(cols)
        )
        with open(path, "w") as fh:
            if provenance:
                fh.write(f"# {provenance}\n")
            fh.write(header + "\n" + body + "\n")


@dataclass
class ErrorMap:
    """Final initialization error 1 - P_g0 over a (drive strength, duration) grid."""

    omegas: np.ndarray
    durations: np.ndarray
    errors: np.ndarray
    leakage: np.ndarray | None = None

    def to_csv(self, path, provenance: str | None = None):
        with open(path, "w") as fh:
            if provenance:
                fh.write(f"# {provenance}\n")
            fh.write("omega_GHz,T_ns,error,leakage\n")
            for i, om in enumerate(self.omegas):
                for j, T in enumerate(self.durations):
                    leak = self.leakage[i, j] if self.leakage is not None else float("nan")
                    fh.write(f"{om:.12g},{T:.12g},{self.errors[i, j]:.12g},{leak:.12g}\n")


@dataclass
class DecayFit:
    """Exponential time constant of an error-vs-duration series."""

    tau_ns: float
    max_relative_residual: float
    ok: bool


@dataclass
class LeakageRemovalCurve:
    """Leakage removal efficiency 1 - P_f0 versus the flux-pulse advance T_pre."""

    t_pre: np.ndarray
    efficiency: np.ndarray
    excited_remainder: np.ndarray


def evolve_reduced(
    p: ReducedParams,
    schedule: ControlSchedule,
    initial,
    dt: float = DEFAULT_INTEGRATION_DT,
    labels: tuple = ("e0", "f0", "g1"),
) -> Trajectory:
    """Integrate the rotating-frame non-Hermitian model over the schedule.

    The drive strength is Omega_0 * tan(theta_p(t)) from the schedule (zero
    during the T_pre flux advance); detuning, coupling and Gamma come from
    the reduced parameters.  Norm decay is booked as P_ground.
    """
    initial = np.asarray(initial, dtype=complex)
    if abs(np.vdot(initial, initial).real - 1.0) > 1e-9:
        raise ValueError("initial state must be normalized")
    t0 = float(schedule.times[0])
    t1 = float(schedule.times[-1])
    n = max(int(round((t1 - t0) / dt)), 1)
    step = (t1 - t0) / n
    t_nodes = t0 + step * np.arange(n + 1)
    omega_nodes = TWO_PI * np.asarray(schedule.omega_at(t_nodes), dtype=float)
    omega_mid = TWO_PI * np.asarray(schedule.omega_at(t_nodes[:-1] + step / 2.0), dtype=float)

    psi = propagate_reduced(
        np.ascontiguousarray(omega_nodes),
        np.ascontiguousarray(omega_mid),
        TWO_PI * p.Delta,
        TWO_PI * p.g_rf,
        p.Gamma,
        step,
        initial,
    )
    if not np.all(np.isfinite(psi)):
        raise IntegrationError(
            f"state became non-finite (dt={dt}, Delta={p.Delta}, g_rf={p.g_rf})"
        )
    pops = np.abs(psi) ** 2
    populations = {labels[k]: pops[:, k] for k in range(3)}
    p_ground = 1.0 - pops.sum(axis=1)
    return Trajectory(times=t_nodes, populations=populations, p_ground=p_ground)


@dataclass(frozen=True)
class CavityParams:
    """Readout cavity: frequency (GHz), emission rate (1/ns), Fock truncation."""

    omega_r: float
    Gamma: float
    photon_dim: int = 4

    def __post_init__(self):
        if self.photon_dim < 2:
            raise ValueError(f"photon_dim must be >= 2, got {self.photon_dim}")
        if self.Gamma < 0:
            raise ValueError(f"Gamma must be >= 0, got {self.Gamma}")


def _product_label(level: int, photon: int) -> str:
    name = FLUXONIUM_LABELS[level] if level < len(FLUXONIUM_LABELS) else str(level)
    return f"{name}{photon}"


def evolve_full_lindblad(
    params: CircuitParams,
    cavity: CavityParams,
    g_rf: float,
    schedule: ControlSchedule,
    initial: tuple = (1, 0),
    triple: SubspaceTriple | None = None,
    n_qubit_levels: int = 6,
    dt: float = 0.002,
    sample_dt: float = 0.5,
    basis_dim: int = 80,
) -> Trajectory:
    """Brute-force Lindblad evolution of the fluxonium-cavity product system.

    The fluxonium is diagonalized at the schedule's shifted flux; the drive
    V_d(t) cos(omega_p t) n_q acts through the full charge operator, the
    qubit-cavity coupling is scaled so the targeted charge element
    reproduces g_rf, and photon loss at the cavity rate is the single
    collapse channel.  Integration runs in the frame of the bare product
    energies (a pure diagonal transformation, no rotating-wave truncation)
    so the fast phases are carried analytically.
    """
    if n_qubit_levels < 4:
        raise ValueError(f"need >= 4 fluxonium levels, got {n_qubit_levels}")
    if triple is None:
        triple = SubspaceTriple.red()

    shifted = params.at_offset(float(schedule.flux_offset[0]))
    sol = solve_spectrum(shifted, basis_dim)
    energies = sol.energies[:n_qubit_levels] - sol.energies[0]
    vecs = sol.eigenvectors[:, :n_qubit_levels]
    n_q = vecs.conj().T @ sol.charge_op @ vecs

    c1, c2 = triple.coupling_levels
    d1, d2 = triple.drive_levels
    coupling_elem = abs(n_q[c1, c2])
    drive_elem = abs(n_q[d1, d2])
    if coupling_elem == 0.0 or drive_elem == 0.0:
        raise ValueError("coupling or drive matrix element vanishes at this flux")
    g_r_scale = g_rf / coupling_elem

    nq, npho = n_qubit_levels, cavity.photon_dim
    dim = nq * npho
    a_r = np.diag(np.sqrt(np.arange(1, npho)), 1)
    x_r = a_r + a_r.T
    eye_q = np.eye(nq)
    h_coupling = TWO_PI * 0.5 * g_r_scale * np.kron(n_q, x_r)
    # unit-strength drive operator: a drive amplitude of X GHz contributes
    # 2*pi * X * h_drive_unit, normalized so its (d1, d2) element is exactly X
    h_drive_unit = np.kron(n_q, np.eye(npho)) / drive_elem
    a_full = np.kron(eye_q, a_r)
    n_phot_diag = np.kron(np.ones(nq), np.arange(npho))

    # bare product energies define the diagonal frame
    d_diag = TWO_PI * (np.repeat(energies, npho) + cavity.omega_r * n_phot_diag)
    w_mat = d_diag[:, None] - d_diag[None, :]
    m_anti = 0.5 * (n_phot_diag[:, None] + n_phot_diag[None, :])
    gamma = cavity.Gamma

    t0 = float(schedule.times[0])
    t1 = float(schedule.times[-1])
    n_steps = max(int(round((t1 - t0) / dt)), 1)
    step = (t1 - t0) / n_steps
    wp = TWO_PI * schedule.omega_p

    # instantaneous drive amplitude V_d(t) cos(omega_p t), in angular units
    t_nodes = t0 + step * np.arange(n_steps + 1)
    amp_nodes = TWO_PI * np.asarray(schedule.omega_at(t_nodes)) * np.cos(wp * t_nodes)
    t_mid = t_nodes[:-1] + step / 2.0
    amp_mid = TWO_PI * np.asarray(schedule.omega_at(t_mid)) * np.cos(wp * t_mid)

    phase = np.exp(1j * w_mat * t0)
    p_half = np.exp(1j * w_mat * (step / 2.0))

    lvl, pho = initial
    idx = lvl * npho + pho
    rho = np.zeros((dim, dim), dtype=complex)
    rho[idx, idx] = 1.0

    def rhs(rho_m, h_m):
        comm = h_m @ rho_m - rho_m @ h_m
        out = -1j * comm
        if gamma:
            out += gamma * (a_full @ rho_m @ a_full.T - m_anti * rho_m)
        return out

    sample_stride = max(int(round(sample_dt / step)), 1)
    n_samples = n_steps // sample_stride + 1
    times_out = np.empty(n_samples)
    pops_out = np.empty((n_samples, dim))
    trace_out = np.empty(n_samples)

    def record(slot, t, rho_m):
        times_out[slot] = t
        diag = np.diag(rho_m).real
        pops_out[slot] = diag
        trace_out[slot] = np.trace(rho_m).real

    record(0, t0, rho)
    slot = 1
    for k in range(n_steps):
        h1 = phase * (h_coupling + amp_nodes[k] * h_drive_unit)
        k1 = rhs(rho, h1)
        phase *= p_half
        h2 = phase * (h_coupling + amp_mid[k] * h_drive_unit)
        k2 = rhs(rho + 0.5 * step * k1, h2)
        k3 = rhs(rho + 0.5 * step * k2, h2)
        phase *= p_half
        h4 = phase * (h_coupling + amp_nodes[k + 1] * h_drive_unit)
        k4 = rhs(rho + step * k3, h4)
        rho = rho + (step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (k + 1) % sample_stride == 0:
            if not np.isfinite(rho[0, 0]):
                raise IntegrationError(f"density matrix non-finite at t={t_nodes[k + 1]:.2f} ns")
            record(slot, t_nodes[k + 1], rho)
            slot += 1

    times_out = times_out[:slot]
    pops_out = pops_out[:slot]
    trace_out = trace_out[:slot]

    top_level = pops_out[:, (nq - 1) * npho:].max()
    top_photon = pops_out[:, npho - 1::npho].max()
    if max(top_level, top_photon) > 1e-4:
        warnings.warn(
            f"truncation suspect: top-level population {max(top_level, top_photon):.2e} "
            f"(levels={nq}, photons={npho})",
            RuntimeWarning,
        )

    populations = {
        _product_label(l, n): pops_out[:, l * npho + n]
        for l in range(nq)
        for n in range(npho)
    }
    return Trajectory(
        times=times_out,
        populations=populations,
        p_ground=pops_out[:, 0],
        trace=trace_out,
    )


def _map_cell(p, omega, T, lambdas, theta_f, T_pre, dt_sample, dt_int):
    spec = RampSpec(lambdas=lambdas, theta_f=theta_f, T=T, dt=dt_sample)
    schedule = make_schedule(spec, T_pre, 0.0, p.omega_p, omega0_for_plateau(spec, omega))
    traj = evolve_reduced(p, schedule, (1.0, 0.0, 0.0), dt=dt_int)
    return traj.final_error(), traj.final("f0")


def initialization_error_map(
    p: ReducedParams,
    omegas,
    durations,
    lambdas=None,
    theta_f: float = np.pi / 4.0,
    T_pre: float = 10.0,
    dt_sample: float = 1.0,
    dt_int: float = DEFAULT_INTEGRATION_DT,
    n_jobs: int = 1,
) -> ErrorMap:
    """Final 1 - P_g0 (and leakage P_f0) from |e0> over an (Omega, T) grid.

    Each cell gets its own ramp spanning half its duration, scaled so the
    plateau drive strength equals the grid value.  Cells are independent and
    merged by index, so the n_jobs fan-out does not affect the result.
    """
    from .pulses import DEFAULT_RAMP_COEFFS

    omegas = np.asarray(omegas, dtype=float)
    durations = np.asarray(durations, dtype=float)
    if omegas.size == 0 or durations.size == 0:
        raise ValueError("omega and duration grids must be non-empty")
    lambdas = tuple(lambdas) if lambdas is not None else DEFAULT_RAMP_COEFFS

    cells = [(i, j) for i in range(omegas.size) for j in range(durations.size)]
    try:
        results = Parallel(n_jobs=n_jobs)(
            delayed(_map_cell)(
                p, omegas[i], durations[j], lambdas, theta_f, T_pre, dt_sample, dt_int
            )
            for i, j in cells
        )
    except Exception as exc:
        raise IntegrationError(f"error-map cell failed: {exc}") from exc

    errors = np.empty((omegas.size, durations.size))
    leakage = np.empty_like(errors)
    for (i, j), (err, leak) in zip(cells, results):
        errors[i, j] = err
        leakage[i, j] = leak
    return ErrorMap(omegas=omegas, durations=durations, errors=errors, leakage=leakage)


def extract_decay_time(durations, errors) -> DecayFit:
    """Exponential time constant of error(T) by least squares on log(error).

    Callers pass the post-ramp portion of the curve; a maximum relative
    residual above 20% marks the fit as non-exponential.
    """
    durations = np.asarray(durations, dtype=float)
    errors = np.asarray(errors, dtype=float)
    if durations.size < 4:
        raise ValueError(f"need >= 4 samples, got {durations.size}")
    if np.any(errors <= 0):
        raise ValueError("errors must be positive for a log-linear fit")
    slope, intercept = np.polyfit(durations, np.log(errors), 1)
    if slope >= 0:
        return DecayFit(tau_ns=float("inf"), max_relative_residual=float("inf"), ok=False)
    fit = np.exp(intercept + slope * durations)
    rel = float(np.max(np.abs(errors / fit - 1.0)))
    return DecayFit(tau_ns=float(-1.0 / slope), max_relative_residual=rel, ok=rel <= 0.2)


def leakage_removal_efficiency(
    p: ReducedParams,
    t_pre_grid,
    T: float,
    plateau_omega: float,
    lambdas=None,
    theta_f: float = np.pi / 4.0,
    dt_sample: float = 1.0,
    dt_int: float = DEFAULT_INTEGRATION_DT,
) -> LeakageRemovalCurve:
    """Leakage removal 1 - P_f0 from initial |f0> versus the flux advance T_pre.

    The flux (hence the resonant |f0>-|g1> exchange) is on for the whole
    [-T_pre, T] window while the drive only starts at t=0; the damped
    vacuum-Rabi oscillation versus T_pre is the expected signature.
    """
    from .pulses import DEFAULT_RAMP_COEFFS

    lambdas = tuple(lambdas) if lambdas is not None else DEFAULT_RAMP_COEFFS
    t_pre_grid = np.asarray(t_pre_grid, dtype=float)
    eff = np.empty_like(t_pre_grid)
    remainder = np.empty_like(t_pre_grid)
    spec = RampSpec(lambdas=lambdas, theta_f=theta_f, T=T, dt=dt_sample)
    omega_0 = omega0_for_plateau(spec, plateau_omega)
    for k, t_pre in enumerate(t_pre_grid):
        schedule = make_schedule(spec, t_pre, 0.0, p.omega_p, omega_0)
        traj = evolve_reduced(p, schedule, (0.0, 1.0, 0.0), dt=dt_int)
        eff[k] = 1.0 - traj.final("f0")
        remainder[k] = traj.final("e0") + traj.final("g1")
    return LeakageRemovalCurve(t_pre=t_pre_grid, efficiency=eff, excited_remainder=remainder)


def steady_state_error(n_th: float, T1_us: float, Gamma_init: float) -> float:
    """Steady-state initialization error from the thermal-excitation balance.

    n_th is the equilibrium excited population, T1 the qubit lifetime in
    microseconds and Gamma_init the initialization rate in 1/ns.  Returns
    Gamma_up / (Gamma_up + Gamma_init) with Gamma_up = n_th / T1.
    """
    if n_th < 0 or T1_us <= 0 or Gamma_init < 0:
        raise ValueError("n_th, T1 and Gamma_init must be non-negative (T1 > 0)")
    gamma_up = n_th / (T1_us * 1000.0)
    if gamma_up == 0.0 and Gamma_init == 0.0:
        raise ValueError("n_th and Gamma_init cannot both be zero")
    return gamma_up / (gamma_up + Gamma_init)
