"""Fluxonium circuit spectra, charge matrix elements and resonance search.

All frequencies handled here are ordinary frequencies in GHz (E/h), times in
ns, and external flux is expressed as a phase in radians.  The qubit
Hamiltonian is

    H/h = 4 E_C n^2 + (1/2) E_L phi^2 - E_J cos(phi - phi_ext),

represented in the harmonic-oscillator number basis of the linear part of the
circuit.  The flux degeneracy point (sweet spot) sits at phi_ext = pi with
this sign convention.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq


class ParameterError(ValueError):
    """Raised when circuit parameters are outside their physical domain."""


class EigensolverError(RuntimeError):
    """Raised when the dense eigensolver fails to converge."""


class NoResonanceError(RuntimeError):
    """Raised when no resonance flux exists in the search bracket."""


DEFAULT_BASIS_DIM = 80


@dataclass(frozen=True)
class CircuitParams:
    """Fluxonium circuit energies (GHz, E/h) and external flux (radians)."""

    E_C: float
    E_L: float
    E_J: float
    phi_ext: float

    def __post_init__(self):
        if not (self.E_C > 0 and self.E_L > 0 and self.E_J >= 0):
            raise ParameterError(
                f"circuit energies must be positive: E_C={self.E_C}, "
                f"E_L={self.E_L}, E_J={self.E_J}"
            )
        if not np.isfinite(self.phi_ext):
            raise ParameterError(f"phi_ext must be finite, got {self.phi_ext}")

    def at_flux(self, phi_ext: float) -> "CircuitParams":
        return replace(self, phi_ext=phi_ext)

    def at_offset(self, delta_phi: float) -> "CircuitParams":
        """Same circuit with the external flux shifted by delta_phi."""
        return replace(self, phi_ext=self.phi_ext + delta_phi)


@dataclass
class EigenSolution:
    """Sorted eigenpairs of the fluxonium Hamiltonian in the oscillator basis.

    energies are ascending level energies in GHz; eigenvectors holds one
    eigenstate per column.  charge_op is the Cooper-pair number operator in
    the same basis, kept so matrix elements can be formed without
    re-deriving the ladder-operator scales.
    """

    basis_dim: int
    energies: np.ndarray
    eigenvectors: np.ndarray
    charge_op: np.ndarray

    def transition_frequency(self, i: int, j: int) -> float:
        """omega_ij / 2pi in GHz between levels i < j."""
        return float(self.energies[j] - self.energies[i])


@dataclass
class MatrixElementCurve:
    """|<0|n_q|2>| and sideband frequency versus flux offset from the sweet spot."""

    flux_offsets: np.ndarray
    values: np.ndarray
    sideband_freqs: np.ndarray


def _ladder(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim)), 1)


def solve_spectrum(params: CircuitParams, basis_dim: int = DEFAULT_BASIS_DIM) -> EigenSolution:
    """Diagonalize the fluxonium Hamiltonian in a truncated oscillator basis.

    The oscillator impedance is fixed by the linear part of the circuit:
    phi_zpf = (2 E_C / E_L)^(1/4) and n_zpf = (E_L / 32 E_C)^(1/4), so the
    harmonic spacing is sqrt(8 E_C E_L).  Deterministic for given inputs.
    """
    if basis_dim < 20:
        raise ParameterError(f"basis_dim must be >= 20, got {basis_dim}")

    a = _ladder(basis_dim)
    phi_zpf = (2.0 * params.E_C / params.E_L) ** 0.25
    n_zpf = (params.E_L / (32.0 * params.E_C)) ** 0.25
    phi_op = phi_zpf * (a + a.T)
    n_op = 1j * n_zpf * (a.T - a)

    try:
        # cos(phi - phi_ext) through the eigenbasis of the (Hermitian) phase operator
        w, v = np.linalg.eigh(phi_op)
        cos_op = (v * np.cos(w - params.phi_ext)) @ v.T

        h = (
            4.0 * params.E_C * (n_op @ n_op).real
            + 0.5 * params.E_L * (phi_op @ phi_op)
            - params.E_J * cos_op
        )
        energies, vectors = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigensolver failed for {params} at basis_dim={basis_dim}: {exc}"
        ) from exc

    return EigenSolution(
        basis_dim=basis_dim,
        energies=energies,
        eigenvectors=vectors.astype(complex),
        charge_op=n_op,
    )


def charge_matrix_element(sol: EigenSolution, i: int, j: int) -> float:
    """|<i|n_q|j>| between eigenstates i and j (magnitude only)."""
    if not (0 <= i < sol.basis_dim and 0 <= j < sol.basis_dim):
        raise IndexError(f"level index out of range: ({i}, {j}), dim {sol.basis_dim}")
    vi = sol.eigenvectors[:, i]
    vj = sol.eigenvectors[:, j]
    return float(abs(vi.conj() @ sol.charge_op @ vj))


def matrix_element_flux_sweep(
    params: CircuitParams,
    omega_r: float,
    offsets,
    basis_dim: int = DEFAULT_BASIS_DIM,
) -> MatrixElementCurve:
    """Sweep |<0|n_q|2>| and the sideband frequency omega_r - omega_ge.

    Offsets are flux shifts away from the sweet spot; each point is computed
    at phi_ext = pi + offset.
    """
    offsets = np.asarray(offsets, dtype=float)
    if not np.all(np.isfinite(offsets)):
        raise ParameterError("flux offsets must be finite")
    values = np.empty_like(offsets)
    sidebands = np.empty_like(offsets)
    for k, delta in enumerate(offsets):
        sol = solve_spectrum(params.at_flux(np.pi + delta), basis_dim)
        values[k] = charge_matrix_element(sol, 0, 2)
        sidebands[k] = omega_r - sol.transition_frequency(0, 1)
    return MatrixElementCurve(flux_offsets=offsets, values=values, sideband_freqs=sidebands)


def find_resonance_flux(
    params: CircuitParams,
    omega_r: float,
    triple: str = "red",
    basis_dim: int = DEFAULT_BASIS_DIM,
    bracket: tuple = (1e-4, np.pi - 1e-4),
    scan_points: int = 64,
) -> float:
    """Flux offset from the sweet spot where the sideband condition is resonant.

    red:  omega_gf(delta) = omega_r          (|f0> aligned with |g1>)
    blue: omega_gh(delta) = omega_r + omega_ge(delta)   (|h0> with |e1>)

    Root-found by bracketed bisection to 1e-6 rad on the first sign change
    of the detuning inside the bracket.
    """
    if triple == "red":
        def detuning(delta):
            sol = solve_spectrum(params.at_flux(np.pi + delta), basis_dim)
            return sol.transition_frequency(0, 2) - omega_r
    elif triple == "blue":
        def detuning(delta):
            sol = solve_spectrum(params.at_flux(np.pi + delta), basis_dim)
            return sol.transition_frequency(0, 3) - (omega_r + sol.transition_frequency(0, 1))
    else:
        raise ValueError(f"triple must be 'red' or 'blue', got {triple!r}")

    grid = np.linspace(bracket[0], bracket[1], scan_points)
    vals = [detuning(d) for d in grid]
    for k in range(len(grid) - 1):
        if vals[k] == 0.0:
            return float(grid[k])
        if vals[k] * vals[k + 1] < 0:
            return float(brentq(detuning, grid[k], grid[k + 1], xtol=1e-6))
    raise NoResonanceError(
        f"no {triple}-sideband resonance for omega_r={omega_r} GHz in "
        f"bracket ({bracket[0]:.3g}, {bracket[1]:.3g}) rad"
    )
