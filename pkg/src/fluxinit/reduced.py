"""Reduced 3-level model of the driven fluxonium-cavity subspace.

The tracked subspace is (|e0>, |f0>, |g1>) for the red sideband or
(|g0>, |h0>, |e1>) for the blue variant; every operation here is label
agnostic and works for either triple.

Unit conventions: public signatures take ordinary frequencies in GHz and
times in ns.  Returned Hamiltonian matrices are in angular units (rad/ns);
the 2*pi conversion happens exactly once, inside the matrix constructors.
The cavity emission rate Gamma is a plain rate in 1/ns and is never
multiplied by 2*pi.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * np.pi


class DispersiveRegimeError(ValueError):
    """Raised when |Delta| is too small for the perturbative dressed state."""


class DegenerateCouplingError(ValueError):
    """Raised when both couplings vanish and the mixing angle is undefined."""


@dataclass(frozen=True)
class SubspaceTriple:
    """Level bookkeeping for the red or blue sideband subspace.

    drive_levels are the fluxonium levels connected by the microwave drive;
    coupling_levels are the levels whose charge matrix element sets the
    effective qubit-cavity coupling.
    """

    kind: str
    labels: tuple = ("e0", "f0", "g1")
    drive_levels: tuple = (1, 2)
    coupling_levels: tuple = (0, 2)

    @classmethod
    def red(cls) -> "SubspaceTriple":
        return cls(kind="red")

    @classmethod
    def blue(cls) -> "SubspaceTriple":
        return cls(
            kind="blue",
            labels=("g0", "h0", "e1"),
            drive_levels=(0, 3),
            coupling_levels=(1, 3),
        )

    def __post_init__(self):
        if len(set(self.labels)) != 3:
            raise ValueError(f"subspace labels must be distinct: {self.labels}")


@dataclass(frozen=True)
class ReducedParams:
    """Parameters of the reduced model (GHz for frequencies, 1/ns for Gamma)."""

    Omega_ef: float
    Delta: float
    g_rf: float
    Gamma: float
    omega_s: float = 0.0
    omega_p: float = 0.0
    omega_ge: float = 0.0
    omega_gf: float = 0.0
    omega_r: float = 0.0

    def __post_init__(self):
        if self.Gamma < 0:
            raise ValueError(f"Gamma must be >= 0, got {self.Gamma}")
        if self.g_rf < 0 or self.Omega_ef < 0:
            raise ValueError("coupling and drive strengths must be >= 0")


@dataclass(frozen=True)
class MixingAngles:
    """Dark/bright mixing angles of the adiabatic-passage eigenbasis (radians)."""

    theta: float
    phi: float


def lab_frame_hamiltonian(
    p: ReducedParams, t: float, drive_value: float, g_re: float = 0.0
) -> np.ndarray:
    """Lab-frame 3x3 generator at time t (rad/ns).

    drive_value is the instantaneous drive strength Omega_ef(t) in GHz; the
    drive enters as Omega_ef(t) * cos(omega_p t) on the (a, b) off-diagonal.
    g_re couples the first subspace state directly to the cavity and is kept
    for fidelity checks of the rotating-wave step; it defaults to 0.
    """
    drive = TWO_PI * drive_value * np.cos(TWO_PI * p.omega_p * t)
    h = np.array(
        [
            [TWO_PI * p.omega_ge, drive, TWO_PI * g_re / 2.0],
            [drive, TWO_PI * p.omega_gf, TWO_PI * p.g_rf / 2.0],
            [TWO_PI * g_re / 2.0, TWO_PI * p.g_rf / 2.0, TWO_PI * p.omega_r - 0.5j * p.Gamma],
        ],
        dtype=complex,
    )
    return h


def rotating_frame_hamiltonian(p: ReducedParams) -> np.ndarray:
    """Time-independent rotating-frame generator (rad/ns).

    Equals (1/2) [[0, W, 0], [W, 2D, g], [0, g, -i Gamma]] with W, D, g the
    angular drive strength, detuning and coupling.
    """
    w = TWO_PI * p.Omega_ef
    d = TWO_PI * p.Delta
    g = TWO_PI * p.g_rf
    return 0.5 * np.array(
        [
            [0.0, w, 0.0],
            [w, 2.0 * d, g],
            [0.0, g, -1j * p.Gamma],
        ],
        dtype=complex,
    )


def dressed_g1_and_rate(
    p: ReducedParams, matrix_element: float | None = None, g_r_scale: float | None = None
):
    """Perturbative dressed cavity state and the sideband transition element.

    Returns the unnormalized first-order vector (g_rf / 2 Delta)|b> + |c>
    and the drive matrix element Omega_ef * g_rf / (2 Delta) in GHz.  When a
    bare charge matrix element and g_r scale are given, g_rf is formed as
    their product; a vanishing matrix element (sweet spot) gives rate 0.
    """
    if matrix_element is not None:
        if g_r_scale is None:
            raise ValueError("g_r_scale is required together with matrix_element")
        g_rf = g_r_scale * matrix_element
    else:
        g_rf = p.g_rf
    if p.Delta == 0 or abs(p.Delta) < 3.0 * g_rf:
        raise DispersiveRegimeError(
            f"|Delta|={abs(p.Delta):.4g} GHz is not dispersive against g_rf={g_rf:.4g} GHz"
        )
    vec = np.array([0.0, g_rf / (2.0 * p.Delta), 1.0], dtype=complex)
    rate = p.Omega_ef * g_rf / (2.0 * p.Delta)
    return vec, rate


def stirap_eigensystem(Omega_ef: float, g_rf: float, Delta: float):
    """Instantaneous eigenbasis of the closed (Gamma=0) reduced Hamiltonian.

    Returns the mixing angles and the (psi_plus, psi_0, psi_minus) vectors,
    with the dark state psi_0 = cos(theta)|a> - sin(theta)|c> carrying no
    weight on the lossy-adjacent |b> state.
    """
    if Omega_ef == 0.0 and g_rf == 0.0:
        raise DegenerateCouplingError("Omega_ef and g_rf cannot both vanish")
    theta = np.arctan2(Omega_ef, g_rf)
    omega_tot = np.hypot(Omega_ef, g_rf)
    phi = np.arctan2(omega_tot, np.sqrt(Delta**2 + omega_tot**2) + Delta)
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    psi_plus = np.array([st * sp, cp, ct * sp], dtype=complex)
    psi_0 = np.array([ct, 0.0, -st], dtype=complex)
    psi_minus = np.array([st * cp, -sp, ct * cp], dtype=complex)
    return MixingAngles(theta=float(theta), phi=float(phi)), psi_plus, psi_0, psi_minus


def adiabatic_rotation(theta: float, phi: float) -> np.ndarray:
    """Rotation from the bare triple to the (psi_plus, psi_0, psi_minus) basis."""
    st, ct = np.sin(theta), np.cos(theta)
    sp, cp = np.sin(phi), np.cos(phi)
    return np.array(
        [
            [st * sp, ct, st * cp],
            [cp, 0.0, -sp],
            [ct * sp, -st, ct * cp],
        ]
    )


def adiabatic_frame_hamiltonian(
    theta: float, theta_dot: float, Omega_ef: float, g_rf: float, Gamma: float
) -> np.ndarray:
    """Generator in the instantaneous eigenbasis at resonance (rad/ns).

    Valid on the Delta = 0 surface where phi = pi/4.  theta_dot is in
    rad/ns.  The Hermitian block carries the non-adiabatic coupling
    proportional to theta_dot; the anti-Hermitian block books the cavity
    decay of each adiabatic component.  Basis order is (plus, dark, minus).
    """
    omega = TWO_PI * np.hypot(Omega_ef, g_rf)
    st2 = np.sin(theta) ** 2
    ct2 = np.cos(theta) ** 2
    s2t = np.sin(2.0 * theta)
    coupling = (1.0 / np.sqrt(2.0)) * np.array(
        [
            [omega / np.sqrt(2.0), 1j * theta_dot, 0.0],
            [-1j * theta_dot, 0.0, -1j * theta_dot],
            [0.0, 1j * theta_dot, -omega / np.sqrt(2.0)],
        ],
        dtype=complex,
    )
    leak = 0.25j * Gamma * s2t / np.sqrt(2.0)
    decay = np.array(
        [
            [-0.25j * Gamma * ct2, leak, -0.25j * Gamma * ct2],
            [leak, -0.5j * Gamma * st2, leak],
            [-0.25j * Gamma * ct2, leak, -0.25j * Gamma * ct2],
        ],
        dtype=complex,
    )
    return coupling + decay


def nonadiabatic_leakage(theta_schedule, omega_schedule, T: float, dt: float = 0.05):
    """Leakage probabilities out of the dark state for a given ramp.

    theta_schedule(t) gives the mixing angle and omega_schedule(t) the total
    coupling sqrt(Omega_ef^2 + g_rf^2) in GHz over [0, T].  The oscillatory
    integral (1/4)|int theta_dot exp(-+i int Omega/2 dt') dt|^2 is evaluated
    by trapezoidal quadrature on a dt grid.
    """
    n = max(int(round(T / dt)), 2)
    t = np.linspace(0.0, T, n + 1)
    theta = np.asarray(theta_schedule(t), dtype=float)
    omega = TWO_PI * np.asarray(omega_schedule(t), dtype=float)
    theta_dot = np.gradient(theta, t)
    # cumulative trapezoid of omega/2
    phase = np.zeros_like(t)
    phase[1:] = np.cumsum(0.25 * (omega[1:] + omega[:-1]) * np.diff(t))
    p_plus = 0.25 * abs(np.trapezoid(theta_dot * np.exp(-1j * phase), t)) ** 2
    p_minus = 0.25 * abs(np.trapezoid(theta_dot * np.exp(1j * phase), t)) ** 2
    return float(p_plus), float(p_minus)


def dark_state_survival(theta_schedule, Gamma: float, T: float, dt: float = 0.05) -> float:
    """Surviving dark-state population exp(-Gamma int_0^T sin^2 theta dt).

    theta_schedule(t) returns the mixing angle in radians; the integral is
    trapezoidal at resolution dt.
    """
    if Gamma < 0:
        raise ValueError(f"Gamma must be >= 0, got {Gamma}")
    n = max(int(round(T / dt)), 2)
    t = np.linspace(0.0, T, n + 1)
    theta = np.asarray(theta_schedule(t), dtype=float)
    return float(np.exp(-Gamma * np.trapezoid(np.sin(theta) ** 2, t)))


def avoided_crossing_energies(omega_ef: float, omega_s: float, g_rf: float):
    """Dressed-level energies E_plus, E_minus of the two-level crossing (GHz)."""
    mean = 0.5 * (omega_ef + omega_s)
    gap = 0.5 * np.sqrt((omega_ef - omega_s) ** 2 + g_rf**2)
    return mean + gap, mean - gap
