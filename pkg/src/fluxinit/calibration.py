"""Calibration and metrology analysis: every fitter the protocol relies on.

Covers the avoided-crossing spectroscopy fit, photon-decay extraction, the
three-angle phase readout with aliasing-aware frequency tracking, the
flux-spectrum fit of the circuit energies, IQ double-Gaussian readout
fitting, and the initialization-error / leakage-bound metrology.

IQ-plane points are complex numbers (I + 1j*Q) throughout.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.optimize import least_squares, minimize, minimize_scalar

from .circuit import CircuitParams, solve_spectrum
from .reduced import avoided_crossing_energies


class FitError(RuntimeError):
    """Raised when a fit cannot converge or its input is unusable."""


class IndeterminatePhaseError(ValueError):
    """Raised when the three-angle contrast vanishes and the phase is undefined."""


class InconsistentInputError(ValueError):
    """Raised when a Rabi contrast exceeds the readout separation."""


# ---------------------------------------------------------------------------
# datasets


@dataclass
class CrossingDataset:
    """Spectroscopy response on a (flux offset, probe frequency) grid."""

    flux_offsets: np.ndarray
    probe_freqs: np.ndarray
    response: np.ndarray

    def __post_init__(self):
        self.flux_offsets = np.asarray(self.flux_offsets, dtype=float)
        self.probe_freqs = np.asarray(self.probe_freqs, dtype=float)
        self.response = np.asarray(self.response, dtype=float)
        if self.response.shape != (self.flux_offsets.size, self.probe_freqs.size):
            raise ValueError("response must be shaped (n_flux, n_freq)")
        if not np.all(np.isfinite(self.response)):
            raise ValueError("response must be finite")


@dataclass
class PhaseTrack:
    """Per flux-amplitude phase-projection populations versus pulse duration.

    p1, p2, p3 are (n_amplitudes, n_times) population series measured at the
    projection phases (0, -2pi/3, +2pi/3); dt is the sample step in ns and
    1/dt the implied sampling rate.
    """

    times: np.ndarray
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    dt: float

    @property
    def sampling_rate(self) -> float:
        return 1.0 / self.dt

    @property
    def n_amplitudes(self) -> int:
        return self.p1.shape[0]


@dataclass
class IQShotSet:
    """Single-shot IQ points per prepared state; complex-valued."""

    shots: dict  # state label -> complex ndarray

    def __post_init__(self):
        for label, pts in self.shots.items():
            self.shots[label] = np.asarray(pts, dtype=complex)


@dataclass
class MetrologyResult:
    """Initialization-error metrology outputs."""

    e_i: float
    e_down: float | None = None
    r_rabi: float | None = None
    r_g: complex | None = None
    r_e: complex | None = None
    sigma: float | None = None
    leakage_bound: float | None = None


# ---------------------------------------------------------------------------
# avoided-crossing spectroscopy


@dataclass
class CrossingFit:
    """Result of the avoided-crossing fit: gap, crossing point and slopes."""

    g_rf: float
    resonance_flux: float
    resonance_freq: float
    slopes: tuple
    intercepts: tuple
    rms_residual: float
    uncertainties: dict = field(default_factory=dict)


def _column_peaks(freqs, column):
    """Locations of the two largest local maxima, quadratically interpolated."""
    peaks = []
    for k in range(1, len(column) - 1):
        if column[k] >= column[k - 1] and column[k] >= column[k + 1]:
            denom = column[k - 1] - 2.0 * column[k] + column[k + 1]
            shift = 0.0 if denom == 0 else 0.5 * (column[k - 1] - column[k + 1]) / denom
            shift = float(np.clip(shift, -0.5, 0.5))
            df = freqs[1] - freqs[0]
            peaks.append((column[k], freqs[k] + shift * df))
    peaks.sort(reverse=True)
    return [f for _, f in peaks[:2]]


def fit_avoided_crossing(data: CrossingDataset, min_columns: int = 5) -> CrossingFit:
    """Fit the two dressed branches to extract the coupling and crossing point.

    Per flux column the two strongest response peaks are extracted with
    sub-bin quadratic interpolation, then the dressed-level model with both
    bare branches linear in flux is fit by nonlinear least squares.  The
    minimum branch separation equals the coupling strength.
    """
    flux, upper, lower = [], [], []
    for i, delta in enumerate(data.flux_offsets):
        pk = _column_peaks(data.probe_freqs, data.response[i])
        if len(pk) == 2:
            flux.append(delta)
            upper.append(max(pk))
            lower.append(min(pk))
    if len(flux) < min_columns:
        raise FitError(f"only {len(flux)} usable columns with two peaks, need {min_columns}")
    flux = np.asarray(flux)
    upper = np.asarray(upper)
    lower = np.asarray(lower)

    # initial guesses: crossing near the minimum gap, slopes from branch ends
    gaps = upper - lower
    i0 = int(np.argmin(gaps))
    g0 = max(gaps[i0], 1e-4)
    center0 = 0.5 * (upper[i0] + lower[i0])
    span = flux[-1] - flux[0]
    s_up = (upper[-1] - upper[0]) / span
    s_lo = (lower[-1] - lower[0]) / span
    x0 = np.array([center0, s_up, center0, s_lo, g0])

    def residuals(x):
        c1, s1, c2, s2, g = x
        w_ef = c1 + s1 * (flux - flux[i0])
        w_s = c2 + s2 * (flux - flux[i0])
        e_plus, e_minus = avoided_crossing_energies(w_ef, w_s, g)
        return np.concatenate([e_plus - upper, e_minus - lower])

    result = least_squares(residuals, x0)
    if not result.success:
        raise FitError(f"avoided-crossing fit failed: {result.message}")
    c1, s1, c2, s2, g = result.x
    if abs(s1 - s2) < 1e-12:
        raise FitError("branches are parallel; crossing point undefined")
    delta_star = (c2 - c1) / (s1 - s2)
    resonance_flux = flux[i0] + delta_star
    resonance_freq = c1 + s1 * delta_star
    n_pts = 2 * len(flux)
    rms = float(np.sqrt(np.mean(result.fun**2)))
    unc = {}
    if n_pts > len(result.x):
        try:
            jtj_inv = np.linalg.inv(result.jac.T @ result.jac)
            s2_hat = np.sum(result.fun**2) / (n_pts - len(result.x))
            sigma = np.sqrt(np.diag(jtj_inv) * s2_hat)
            unc = dict(zip(["omega_ef0", "slope_ef", "omega_s0", "slope_s", "g_rf"], sigma))
        except np.linalg.LinAlgError:
            pass
    return CrossingFit(
        g_rf=float(abs(g)),
        resonance_flux=float(resonance_flux),
        resonance_freq=float(resonance_freq),
        slopes=(float(s1), float(s2)),
        intercepts=(float(c1), float(c2)),
        rms_residual=rms,
        uncertainties=unc,
    )


# ---------------------------------------------------------------------------
# photon decay


@dataclass
class DecayResult:
    """Exponential fit of the cavity-shift decay; tau is inf for flat input."""

    tau_ns: float
    amplitude: float
    offset: float
    rms_residual: float
    ok: bool


def fit_photon_decay(delays, shifts) -> DecayResult:
    """Photon emission time from the decaying frequency-shift signal.

    Least-squares fit of amplitude * exp(-t/tau) + offset.  Constant input
    yields an infinite time constant (flagged, not raised); an input that
    grows with delay raises FitError.
    """
    delays = np.asarray(delays, dtype=float)
    shifts = np.asarray(shifts, dtype=float)
    if delays.size < 5:
        raise FitError(f"need >= 5 delay points, got {delays.size}")
    spread = shifts.max() - shifts.min()
    if spread < 1e-12 * max(1.0, abs(shifts).max()):
        return DecayResult(float("inf"), 0.0, float(shifts.mean()), 0.0, False)

    sign = 1.0 if shifts[0] >= shifts[-1] else -1.0
    if sign < 0 and shifts[-1] - shifts[0] > 0.5 * spread:
        raise FitError("signal grows with delay; not a decay")
    tau0 = max((delays[-1] - delays[0]) / 3.0, 1e-6)
    x0 = np.array([shifts[0] - shifts[-1], tau0, shifts[-1]])

    def residuals(x):
        amp, tau, off = x
        return amp * np.exp(-delays / abs(tau)) + off - shifts

    result = least_squares(residuals, x0)
    if not result.success:
        raise FitError(f"photon-decay fit failed: {result.message}")
    amp, tau, off = result.x
    rms = float(np.sqrt(np.mean(result.fun**2)))
    return DecayResult(
        tau_ns=float(abs(tau)),
        amplitude=float(amp),
        offset=float(off),
        rms_residual=rms,
        ok=True,
    )


# ---------------------------------------------------------------------------
# three-angle phase readout and frequency tracking


def three_angle_populations(a0, a1, phi_sq):
    """Forward model: populations at projection phases (0, +2pi/3, -2pi/3)."""
    p1 = a0 - a1 * np.cos(phi_sq)
    p2 = a0 - a1 * np.cos(phi_sq + 2.0 * np.pi / 3.0)
    p3 = a0 - a1 * np.cos(phi_sq - 2.0 * np.pi / 3.0)
    return p1, p2, p3


def solve_three_angle(p1, p2, p3):
    """Closed-form inversion of the three projection populations.

    Returns (a0, a1, phi_sq) with phi_sq in (-pi, pi].  Vanishing contrast
    (all three populations equal) leaves the phase undefined.
    """
    p1 = np.asarray(p1, dtype=float)
    p2 = np.asarray(p2, dtype=float)
    p3 = np.asarray(p3, dtype=float)
    a0 = (p1 + p2 + p3) / 3.0
    a1 = np.sqrt(2.0 / 3.0 * ((p1 - a0) ** 2 + (p2 - a0) ** 2 + (p3 - a0) ** 2))
    if np.any(a1 < 1e-12):
        raise IndeterminatePhaseError("zero contrast: phase is indeterminate")
    cos_phi = (a0 - p1) / a1
    sin_phi = (p2 - p3) / (np.sqrt(3.0) * a1)
    phi = np.arctan2(sin_phi, cos_phi)
    if phi.shape:
        return a0, a1, phi
    return float(a0), float(a1), float(phi)


def _wrap(x):
    """Map angles to the symmetric branch (-pi, pi]."""
    return np.pi - np.mod(np.pi - np.asarray(x), 2.0 * np.pi)


def _wrapped_objective(phases, times, delta_f):
    """Sum of squared wrapped residuals at a candidate frequency change."""
    r = phases + 2.0 * np.pi * delta_f * times
    # optimal phase offset is the circular mean of the residuals
    phi0 = np.angle(np.mean(np.exp(1j * r)))
    return float(np.sum(_wrap(r - phi0) ** 2))


@dataclass
class FrequencyTrack:
    """Cumulative qubit-frequency track with per-amplitude diagnostics."""

    f_ge: np.ndarray
    delta_f_steps: np.ndarray
    ambiguous: np.ndarray


def _estimate_delta_f(phases, times, f_s, grid_points: int = 1000):
    """Principal-branch frequency change minimizing the wrapped residuals.

    Coarse scan at f_s/grid_points resolution over (-f_s/2, f_s/2], then
    bounded scalar refinement around the best cell.  Also reports whether a
    distinct local minimum comes within 1% of the optimum (aliasing or
    ambiguity warning).
    """
    candidates = -f_s / 2.0 + f_s * (np.arange(grid_points) + 0.5) / grid_points
    obj = np.array([_wrapped_objective(phases, times, c) for c in candidates])
    k = int(np.argmin(obj))
    half_cell = f_s / grid_points
    res = minimize_scalar(
        lambda f: _wrapped_objective(phases, times, f),
        bounds=(candidates[k] - half_cell, candidates[k] + half_cell),
        method="bounded",
        options={"xatol": f_s * 1e-9},
    )
    best = float(res.x)
    best_obj = float(res.fun)

    ambiguous = False
    floor = best_obj + 0.01 * max(best_obj, 1e-30)
    for m in range(1, grid_points - 1):
        if abs(m - k) <= 2:
            continue
        if obj[m] <= obj[m - 1] and obj[m] <= obj[m + 1] and obj[m] <= floor * 1.01:
            if best_obj == 0.0 or obj[m] <= 1.01 * best_obj:
                ambiguous = True
                break
    return best, ambiguous


def track_frequency(track: PhaseTrack, f_ge_at_zero: float) -> FrequencyTrack:
    """Qubit frequency per flux amplitude from the three-angle phase series.

    Each amplitude yields a principal-branch frequency change; successive
    differences are wrapped into (-f_s/2, f_s/2] (valid when neighboring
    amplitudes satisfy the no-aliasing condition) and cumulatively summed
    from the anchor frequency.
    """
    f_s = track.sampling_rate
    n = track.n_amplitudes
    raw = np.empty(n)
    flags = np.zeros(n, dtype=bool)
    for i in range(n):
        _, _, phases = solve_three_angle(track.p1[i], track.p2[i], track.p3[i])
        raw[i], flags[i] = _estimate_delta_f(np.atleast_1d(phases), track.times, f_s)

    steps = np.empty(n)
    prev = 0.0
    for i in range(n):
        d = raw[i] - prev
        steps[i] = d - f_s * np.round(d / f_s)
        prev = raw[i]
    f_ge = f_ge_at_zero + np.cumsum(steps)
    return FrequencyTrack(f_ge=f_ge, delta_f_steps=steps, ambiguous=flags)


# ---------------------------------------------------------------------------
# flux-spectrum fit


@dataclass
class SpectrumFit:
    """Fitted circuit energies with the residual of the frequency model."""

    params: CircuitParams
    rms_residual: float
    n_iterations: int


def fit_flux_spectrum(
    phi_ext_values,
    f_ge_values,
    initial: CircuitParams,
    basis_dim: int = 60,
    max_iter: int = 600,
) -> SpectrumFit:
    """Fit (E_C, E_L, E_J) to a measured f_ge versus external flux curve.

    Derivative-free simplex search on the sum of squared frequency
    residuals, each model evaluation being a fresh diagonalization.
    Converged when the parameter step falls below 1e-5 GHz.
    """
    phi = np.asarray(phi_ext_values, dtype=float)
    f_ge = np.asarray(f_ge_values, dtype=float)
    if phi.size < 8:
        raise FitError(f"need >= 8 flux points, got {phi.size}")
    if phi.max() - phi.min() < 0.2 * 2.0 * np.pi:
        raise FitError("flux span too small; need >= 0.2 flux quanta")

    def model(x):
        ec, el, ej = x
        if ec <= 0 or el <= 0 or ej <= 0:
            return None
        out = np.empty_like(phi)
        for k, ph in enumerate(phi):
            sol = solve_spectrum(CircuitParams(ec, el, ej, ph), basis_dim)
            out[k] = sol.transition_frequency(0, 1)
        return out

    def cost(x):
        m = model(x)
        if m is None:
            return 1e6
        return float(np.sum((m - f_ge) ** 2))

    x0 = np.array([initial.E_C, initial.E_L, initial.E_J])
    res = minimize(
        cost,
        x0,
        method="Nelder-Mead",
        options={"xatol": 1e-6, "fatol": 1e-14, "maxiter": max_iter, "maxfev": 2 * max_iter},
    )
    if not res.success and cost(res.x) > 1e-6:
        raise FitError(f"flux-spectrum fit did not converge: {res.message}")
    ec, el, ej = res.x
    fitted = CircuitParams(float(ec), float(el), float(ej), np.pi)
    rms = float(np.sqrt(cost(res.x) / phi.size))
    return SpectrumFit(params=fitted, rms_residual=rms, n_iterations=int(res.nit))


# ---------------------------------------------------------------------------
# IQ readout fitting and metrology


@dataclass
class IQFit:
    """Two-component isotropic Gaussian mixture fit of IQ shots."""

    r_g: complex
    r_e: complex
    sigma: float
    weights: tuple
    separated: bool
    degenerate: bool


def fit_iq_double_gaussian(shots: IQShotSet, max_iter: int = 500) -> IQFit:
    """Fit the pooled shots with two isotropic Gaussians sharing one width.

    Expectation-maximization alternation; the component owning the majority
    of the ground-prepared shots is labeled r_g.  Non-separated components
    (|r_g - r_e| < sigma) set the low-fidelity flag; a collapsed component
    sets the degenerate flag.
    """
    pooled = np.concatenate([pts for pts in shots.shots.values()])
    if pooled.size < 200:
        raise FitError(f"need >= 200 shots total, got {pooled.size}")
    pts = np.column_stack([pooled.real, pooled.imag])

    # split along the principal axis for the initial centers
    mean = pts.mean(axis=0)
    centered = pts - mean
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    proj = centered @ vt[0]
    lo, hi = pts[proj <= np.median(proj)], pts[proj > np.median(proj)]
    mu = np.array([lo.mean(axis=0), hi.mean(axis=0)])
    sigma2 = max(centered.var(), 1e-12)
    w = np.array([0.5, 0.5])

    log_lik = -np.inf
    for _ in range(max_iter):
        d2 = ((pts[:, None, :] - mu[None, :, :]) ** 2).sum(axis=2)
        log_p = np.log(w + 1e-300) - d2 / (2.0 * sigma2) - np.log(2.0 * np.pi * sigma2)
        m = log_p.max(axis=1, keepdims=True)
        p = np.exp(log_p - m)
        norm = p.sum(axis=1, keepdims=True)
        resp = p / norm
        new_log_lik = float(np.sum(m.ravel() + np.log(norm.ravel())))

        nk = resp.sum(axis=0)
        w = nk / len(pts)
        mu = (resp.T @ pts) / nk[:, None]
        d2 = ((pts[:, None, :] - mu[None, :, :]) ** 2).sum(axis=2)
        sigma2 = max(float((resp * d2).sum() / (2.0 * len(pts))), 1e-300)
        if new_log_lik - log_lik < 1e-10 * max(abs(new_log_lik), 1.0):
            log_lik = new_log_lik
            break
        log_lik = new_log_lik

    centers = mu[:, 0] + 1j * mu[:, 1]
    sigma = float(np.sqrt(sigma2))
    degenerate = bool(min(w) < 1e-3 or abs(centers[0] - centers[1]) < 0.05 * sigma)

    # assign the ground label by majority responsibility of ground-prepared shots
    order = (0, 1)
    if "g" in shots.shots and shots.shots["g"].size:
        gp = shots.shots["g"]
        gpts = np.column_stack([gp.real, gp.imag])
        d2g = ((gpts[:, None, :] - mu[None, :, :]) ** 2).sum(axis=2)
        votes = np.bincount(np.argmin(d2g, axis=1), minlength=2)
        if votes[1] > votes[0]:
            order = (1, 0)
    r_g, r_e = centers[order[0]], centers[order[1]]
    separation = abs(r_g - r_e)
    return IQFit(
        r_g=complex(r_g),
        r_e=complex(r_e),
        sigma=sigma,
        weights=(float(w[order[0]]), float(w[order[1]])),
        separated=bool(separation >= sigma),
        degenerate=degenerate,
    )


def _project(value: complex, origin: complex, axis: complex) -> float:
    """Real projection of (value - origin) onto the unit vector along axis."""
    return float((np.conj(axis) * (value - origin)).real / abs(axis) ** 2)


def initialization_error_metrology(
    rabi_contrast: float | None = None,
    r_g: complex = 0.0,
    r_e: complex = 1.0,
    mean_g: complex | None = None,
    mean_e: complex | None = None,
    sigma: float | None = None,
) -> MetrologyResult:
    """Initialization error from Rabi contrast and/or prepared-state centers.

    The contrast route inverts r_rabi = (1 - 2 e_i)|r_g - r_e|.  When the
    mean centers of ground- and excited-prepared shots are supplied, the
    linear center model is solved for (e_i, e_down) under negligible leakage
    (residual second-excited population), and this route takes precedence.
    """
    separation = abs(r_g - r_e)
    if separation <= 0:
        raise InconsistentInputError("readout centers coincide")

    e_i = None
    if rabi_contrast is not None:
        if rabi_contrast > separation * (1.0 + 1e-12):
            raise InconsistentInputError(
                f"contrast {rabi_contrast} exceeds center separation {separation}"
            )
        e_i = 0.5 * (1.0 - rabi_contrast / separation)

    e_down = None
    if mean_g is not None and mean_e is not None:
        axis = r_e - r_g
        e_i = _project(mean_g, r_g, axis)
        p_e_plus_down = -_project(mean_e, r_e, axis)
        e_down = p_e_plus_down - e_i
    elif mean_g is not None:
        e_i = _project(mean_g, r_g, r_e - r_g)

    if e_i is None:
        raise ValueError("need a Rabi contrast or prepared-state mean centers")
    return MetrologyResult(
        e_i=float(e_i),
        e_down=None if e_down is None else float(e_down),
        r_rabi=rabi_contrast,
        r_g=complex(r_g),
        r_e=complex(r_e),
        sigma=sigma,
    )


def leakage_removal_bound(
    mean_g: complex, mean_e: complex, r_g: complex, r_e: complex, e_down: float
) -> float:
    """Lower bound on the leakage removal efficiency 1 - P_f.

    Projects the difference of the prepared-state centers onto the readout
    axis; the leakage center cancels in the difference, giving
    1 - 2 e_i - e_down + P_f, and adding e_down yields the bound.
    """
    separation = abs(r_g - r_e)
    if separation <= 0:
        raise InconsistentInputError("readout centers coincide")
    axis = r_g - r_e
    ratio = float((np.conj(axis) * (mean_g - mean_e)).real / abs(axis) ** 2)
    return ratio + e_down


# ---------------------------------------------------------------------------
# CSV readers and fit reports


def read_crossing_csv(path) -> CrossingDataset:
    """Read a crossing matrix: first row probe freqs, first column flux offsets."""
    raw = np.loadtxt(path, delimiter=",", comments="#")
    return CrossingDataset(
        flux_offsets=raw[1:, 0], probe_freqs=raw[0, 1:], response=raw[1:, 1:]
    )


def write_crossing_csv(path, data: CrossingDataset, provenance: str | None = None):
    with open(path, "w") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        fh.write("0," + ",".join(f"{f:.12g}" for f in data.probe_freqs) + "\n")
        for delta, row in zip(data.flux_offsets, data.response):
            fh.write(f"{delta:.12g}," + ",".join(f"{v:.12g}" for v in row) + "\n")


def read_phase_track_csv(path) -> PhaseTrack:
    """Read (amplitude_index, time_ns, P1, P2, P3) rows into a PhaseTrack."""
    with open(path) as fh:
        rows = [
            line
            for line in fh
            if line.strip() and not line.startswith("#") and not line[0].isalpha()
        ]
    raw = np.loadtxt(rows, delimiter=",", ndmin=2)
    indices = raw[:, 0].astype(int)
    n_amp = indices.max() + 1
    times = np.unique(raw[:, 1])
    n_t = times.size
    p1 = np.empty((n_amp, n_t))
    p2 = np.empty((n_amp, n_t))
    p3 = np.empty((n_amp, n_t))
    for i in range(n_amp):
        rows = raw[indices == i]
        order = np.argsort(rows[:, 1])
        p1[i], p2[i], p3[i] = rows[order, 2], rows[order, 3], rows[order, 4]
    dt = float(times[1] - times[0]) if n_t > 1 else 1.0
    return PhaseTrack(times=times, p1=p1, p2=p2, p3=p3, dt=dt)


def write_phase_track_csv(path, track: PhaseTrack, provenance: str | None = None):
    with open(path, "w") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        fh.write("amplitude_index,time_ns,P1,P2,P3\n")
        for i in range(track.n_amplitudes):
            for t, a, b, c in zip(track.times, track.p1[i], track.p2[i], track.p3[i]):
                fh.write(f"{i},{t:.12g},{a:.12g},{b:.12g},{c:.12g}\n")


def read_iq_csv(path) -> IQShotSet:
    """Read (state_label, I, Q) rows into an IQShotSet."""
    shots: dict = {}
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or line.startswith("state"):
                continue
            label, re_s, im_s = line.split(",")
            shots.setdefault(label, []).append(float(re_s) + 1j * float(im_s))
    return IQShotSet(shots={k: np.asarray(v) for k, v in shots.items()})


def write_iq_csv(path, shots: IQShotSet, provenance: str | None = None):
    with open(path, "w") as fh:
        if provenance:
            fh.write(f"# {provenance}\n")
        fh.write("state,I,Q\n")
        for label, pts in shots.shots.items():
            for z in pts:
                fh.write(f"{label},{z.real:.12g},{z.imag:.12g}\n")


def fit_report_json(path, name: str, values: dict, uncertainties: dict, residual: float):
    """Write a machine-readable fit report."""
    with open(path, "w") as fh:
        json.dump(
            {
                "fit": name,
                "values": values,
                "uncertainties": uncertainties,
                "rms_residual": residual,
            },
            fh,
            indent=2,
            sort_keys=True,
        )
        fh.write("\n")
