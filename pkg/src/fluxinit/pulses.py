"""Adiabatic drive envelopes and the rectangular flux pulse.

The drive amplitude follows V_d(t) = V_0 tan(theta_p(t)) with theta_p built
from a smooth cosine series over the first half of the drive window, then
held constant.  The flux pulse is ideally rectangular, switching on T_pre
before the drive and staying on for the full drive duration.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Cosine-series ramp coefficients used for all shipped configurations.
DEFAULT_RAMP_COEFFS = (1.028, -0.0606, 0.0052, 0.0055, 0.0047, 0.0046, 0.0035)


class EnvelopeDivergenceError(ValueError):
    """Raised when theta_p reaches pi/2 and tan(theta_p) diverges."""


@dataclass(frozen=True)
class RampSpec:
    """Cosine-series ramp: coefficients, final angle, duration and sampling."""

    lambdas: tuple = DEFAULT_RAMP_COEFFS
    theta_f: float = np.pi / 4.0
    T: float = 500.0
    dt: float = 1.0

    def __post_init__(self):
        if self.T <= 0 or self.dt <= 0:
            raise ValueError(f"T and dt must be positive: T={self.T}, dt={self.dt}")
        if len(self.lambdas) == 0:
            raise ValueError("lambdas must be non-empty")
        steps = self.T / self.dt
        if abs(steps - round(steps)) > 1e-9:
            raise ValueError(f"dt={self.dt} must divide T={self.T}")

    @property
    def coeff_sum(self) -> float:
        return float(np.sum(self.lambdas))


def theta_p(spec: RampSpec, t):
    """Ramp angle theta_p(t) in radians for t in [0, T].

    On the ramp (t <= T/2) this is the exact series
    (2 theta_f / T) sum_n lambda_n (t - T/(4 n pi) sin(4 n pi t / T));
    past T/2 the value is held at theta_p(T/2).  Both endpoints have zero
    slope, term by term.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < -1e-12) or np.any(t_arr > spec.T + 1e-12):
        raise ValueError(f"t must lie in [0, {spec.T}] ns")
    t_eff = np.minimum(t_arr, spec.T / 2.0)
    out = np.zeros_like(t_eff)
    for n, lam in enumerate(spec.lambdas, start=1):
        k = 4.0 * n * np.pi / spec.T
        out += lam * (t_eff - np.sin(k * t_eff) / k)
    out *= 2.0 * spec.theta_f / spec.T
    return out if out.shape else float(out)


def theta_p_dot(spec: RampSpec, t):
    """Analytic time derivative of theta_p (rad/ns); zero on the plateau."""
    t_arr = np.asarray(t, dtype=float)
    on_ramp = t_arr <= spec.T / 2.0
    out = np.zeros_like(t_arr)
    for n, lam in enumerate(spec.lambdas, start=1):
        k = 4.0 * n * np.pi / spec.T
        out += lam * (1.0 - np.cos(k * t_arr))
    out *= 2.0 * spec.theta_f / spec.T
    out = np.where(on_ramp, out, 0.0)
    return out if out.shape else float(out)


def plateau_envelope(spec: RampSpec) -> float:
    """Dimensionless plateau value tan(theta_p(T/2)) of the drive envelope."""
    top = theta_p(spec, spec.T / 2.0)
    if top >= np.pi / 2.0:
        raise EnvelopeDivergenceError(
            f"theta_p(T/2) = {top:.4f} rad reaches pi/2; reduce theta_f or lambdas"
        )
    return float(np.tan(top))


def omega0_for_plateau(spec: RampSpec, plateau_strength: float) -> float:
    """Drive scale Omega_0 so the plateau drive strength equals plateau_strength (GHz)."""
    return plateau_strength / plateau_envelope(spec)


def drive_envelope(spec: RampSpec, Omega_0: float):
    """Sampled drive strength Omega_ef(t) = Omega_0 tan(theta_p(t)) in GHz.

    Returns (times, strengths) over [0, T] at the spec's dt.  The quoted
    drive strength of a configuration is the plateau value
    Omega_0 tan(theta_p(T/2)).
    """
    plateau_envelope(spec)  # divergence check
    times = np.arange(0.0, spec.T + spec.dt / 2.0, spec.dt)
    return times, Omega_0 * np.tan(theta_p(spec, times))


@dataclass
class ControlSchedule:
    """Flux pulse plus shaped drive envelope on a shared time grid.

    times covers [-T_pre, T]; the flux offset is on for the whole grid and
    the drive is zero for t < 0.  drive_envelope holds the dimensionless
    V_d(t)/V_0 = tan(theta_p(t)) samples; Omega_0 converts it to GHz.
    """

    times: np.ndarray
    drive_envelope: np.ndarray
    theta_p: np.ndarray
    flux_offset: np.ndarray
    T_pre: float
    omega_p: float
    Omega_0: float
    spec: RampSpec

    @property
    def T(self) -> float:
        return self.spec.T

    def omega_at(self, t):
        """Exact drive strength Omega_ef(t) in GHz at arbitrary times."""
        t_arr = np.asarray(t, dtype=float)
        clipped = np.clip(t_arr, 0.0, self.spec.T)
        vals = self.Omega_0 * np.tan(theta_p(self.spec, clipped))
        vals = np.where(t_arr < 0.0, 0.0, vals)
        return vals if vals.shape else float(vals)

    def theta_at(self, t, g_rf: float):
        """Actual mixing angle arctan(Omega_ef(t)/g_rf) at arbitrary times."""
        return np.arctan2(self.omega_at(t), g_rf)

    def plateau_strength(self) -> float:
        return self.Omega_0 * plateau_envelope(self.spec)

    def to_csv(self, path):
        """Write (time_ns, envelope, flux_rad) rows for inspection."""
        header = "time_ns,drive_envelope,flux_offset_rad"
        data = np.column_stack([self.times, self.drive_envelope, self.flux_offset])
        np.savetxt(path, data, delimiter=",", header=header, comments="", fmt="%.12g")


def make_schedule(
    spec: RampSpec,
    T_pre: float,
    flux_offset: float,
    omega_p: float,
    Omega_0: float,
) -> ControlSchedule:
    """Assemble the control schedule on the grid [-T_pre, T].

    The flux pulse is on throughout; the drive envelope is zero before t=0
    and follows the ramp/plateau shape afterwards.
    """
    if T_pre < 0:
        raise ValueError(f"T_pre must be >= 0, got {T_pre}")
    n_pre = int(round(T_pre / spec.dt))
    if abs(n_pre * spec.dt - T_pre) > 1e-9:
        raise ValueError(f"dt={spec.dt} must divide T_pre={T_pre}")
    n_drive = int(round(spec.T / spec.dt))
    times = (np.arange(n_pre + n_drive + 1) - n_pre) * spec.dt
    angles = np.where(times >= 0.0, theta_p(spec, np.clip(times, 0.0, spec.T)), 0.0)
    envelope = np.tan(angles)
    plateau_envelope(spec)  # divergence check
    return ControlSchedule(
        times=times,
        drive_envelope=envelope,
        theta_p=angles,
        flux_offset=np.full_like(times, flux_offset),
        T_pre=float(T_pre),
        omega_p=float(omega_p),
        Omega_0=float(Omega_0),
        spec=spec,
    )
