"""Chronocyclic (time-frequency) phase space.

Sign convention, fixed here and nowhere else: a delay ``dt`` multiplies the
amplitude by ``exp(+i alpha omega dt)`` and the Wigner kernel is
``exp(-2 i omega tau)``, so a positive delay translates the Wigner function
towards positive ``tau``:

    W(phi, tau) = (1/pi) int d(omega) exp(-2 i omega tau) rho(phi + omega, phi - omega)

The 1/pi prefactor makes the map integrate to one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import spectra
from .errors import DimensionMismatch, NotFactorizable, NyquistViolation
from .spectra import FrequencyGrid, Jsa2D, Spectrum1D

FACTORIZATION_THRESHOLD = 0.999
_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid of the time variable tau conjugate to frequency."""

    tau_min: float
    tau_max: float
    n_points: int

    def __post_init__(self):
        if not self.tau_max > self.tau_min:
            raise ValueError("tau_max must exceed tau_min")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError("n_points must be an integer >= 2")
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def centered(cls, half_width, n_points, center=0.0):
        return cls(center - half_width, center + half_width, n_points)

    @property
    def step(self):
        return (self.tau_max - self.tau_min) / (self.n_points - 1)

    @property
    def points(self):
        return self.tau_min + np.arange(self.n_points) * self.step

    @property
    def weights(self):
        w = np.full(self.n_points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def shifted(self, dt):
        return TimeGrid(self.tau_min + dt, self.tau_max + dt, self.n_points)


def nyquist_step(grid: FrequencyGrid) -> float:
    return math.pi / grid.width


def time_spread(state, mode=1):
    """Mean and RMS arrival time of one photon, from t = -i d/d(omega)."""
    spectra._check_normalized(state)
    if isinstance(state, Spectrum1D):
        amp, grid, w = state.amplitudes, state.grid, state.grid.weights
        d = np.gradient(amp, grid.step)
        mean = float(np.real(np.sum(w * amp.conj() * -1j * d)))
        return mean, math.sqrt(max(float(np.sum(w * np.abs(d) ** 2)) - mean * mean, 0.0))
    if mode == 1:
        amp, grid, other = state.amplitudes, state.grid1, state.grid2
    else:
        amp, grid, other = state.amplitudes.T, state.grid2, state.grid1
    w = np.outer(grid.weights, other.weights)
    d = np.gradient(amp, grid.step, axis=0)
    mean = float(np.real(np.sum(w * amp.conj() * -1j * d)))
    return mean, math.sqrt(max(float(np.sum(w * np.abs(d) ** 2)) - mean * mean, 0.0))


def full_period_grid(grid: FrequencyGrid, n_points=None, center=0.0) -> TimeGrid:
    """Tau grid spanning one full period pi / step of the discrete Wigner map.

    On this grid the trapezoid rule integrates every kernel harmonic exactly,
    so the frequency marginal equals |S(phi)|^2 to rounding error.
    """
    intervals = grid.n_points if n_points is None else n_points - 1
    if intervals < grid.n_points:
        raise NyquistViolation(f"a full-period grid needs at least {grid.n_points + 1} points")
    half = 0.5 * math.pi / grid.step
    return TimeGrid.centered(half, intervals + 1, center)


def time_grid_for(grid: FrequencyGrid, time_rms, extra=0.0, widths=10.0, min_points=129, center=0.0):
    """Tau grid covering ``widths`` RMS arrival-time spreads plus ``extra``.

    The step is kept at or below the Nyquist step of ``grid``.
    """
    half = widths * time_rms + abs(extra)
    n = max(min_points, math.ceil(2 * half / nyquist_step(grid)) + 1)
    if n % 2 == 0:
        n += 1
    return TimeGrid.centered(half, n, center)


@dataclass(frozen=True, eq=False)
class WignerMap:
    """Real Wigner function sampled on (phi, tau); ``values[k, j]`` is at (phi_k, tau_j)."""

    phi_grid: FrequencyGrid
    tau_grid: TimeGrid
    values: np.ndarray

    def integral(self) -> float:
        return float(self.phi_grid.weights @ self.values @ self.tau_grid.weights)

    def frequency_marginal(self) -> np.ndarray:
        return self.values @ self.tau_grid.weights

    def time_marginal(self) -> np.ndarray:
        return self.phi_grid.weights @ self.values

    def tau_centroid(self) -> float:
        """First moment in tau of |W|."""
        m = np.abs(self.values).T @ self.phi_grid.weights * self.tau_grid.weights
        return float(np.dot(m, self.tau_grid.points) / np.sum(m))

    def time_width(self) -> float:
        m = self.time_marginal() * self.tau_grid.weights
        t = self.tau_grid.points
        mean = np.sum(m * t) / np.sum(m)
        return float(np.sqrt(np.sum(m * (t - mean) ** 2) / np.sum(m)))


@dataclass(frozen=True)
class SchmidtReport:
    coefficients: tuple  # lambda_k, nonincreasing, sum of squares = 1
    entropy: float  # bits
    schmidt_number: float
    residue: float  # |1 - sum lambda_k^2| before renormalisation


@dataclass(frozen=True, eq=False)
class CollectiveAmplitude:
    """JSA resampled on orthonormal collective coordinates.

    ``u = (a1 w1 + a2 w2) / sqrt(2)`` is the collective (generator) axis and
    ``v = (a1 w1 - a2 w2) / sqrt(2)`` the orthogonal one. The generator
    sum_i a_i w_i equals sqrt(2) u. ``factors`` holds (f(u), g(v)) when the
    rotated amplitude is Schmidt-rank one within tolerance, else None.
    """

    u_grid: FrequencyGrid
    v_grid: FrequencyGrid
    amplitudes: np.ndarray
    alphas: tuple
    leading_weight: float
    factors: tuple | None

    def factored(self):
        if self.factors is None:
            raise NotFactorizable(
                f"rotated amplitude is not a product (leading Schmidt weight "
                f"{self.leading_weight:.6f} < {FACTORIZATION_THRESHOLD}); reduce sigma"
            )
        return self.factors


def _wigner_from_density(rho, grid: FrequencyGrid, tau_grid: TimeGrid) -> WignerMap:
    n = grid.n_points
    if tau_grid.step > nyquist_step(grid) * (1 + 1e-12):
        raise NyquistViolation(
            f"tau step {tau_grid.step:.4g} exceeds the Nyquist step {nyquist_step(grid):.4g}"
        )
    half = (n - 1) // 2
    m = np.arange(-half, half + 1)
    k = np.arange(n)[:, None]
    plus = k + m[None, :]
    minus = k - m[None, :]
    valid = (plus >= 0) & (plus < n) & (minus >= 0) & (minus < n)
    corr = np.where(valid, rho[np.clip(plus, 0, n - 1), np.clip(minus, 0, n - 1)], 0.0)
    kernel = np.exp(-2j * grid.step * np.outer(m, tau_grid.points))
    w = (grid.step / math.pi) * (corr @ kernel)
    residue = float(np.max(np.abs(w.imag))) if w.size else 0.0
    if residue > _IMAG_TOL * max(1.0, float(np.max(np.abs(w.real)))):
        raise ArithmeticError(f"Wigner map has imaginary residue {residue:.3e}")
    return WignerMap(grid, tau_grid, np.ascontiguousarray(w.real))


def wigner_single(s: Spectrum1D, tau_grid: TimeGrid) -> WignerMap:
    """Wigner function of a single-photon spectrum."""
    spectra._check_normalized(s)
    a = s.amplitudes
    return _wigner_from_density(np.outer(a, a.conj()), s.grid, tau_grid)


def reduced_density(j: Jsa2D, mode: int) -> np.ndarray:
    """Single-photon density matrix rho(w, w') of one photon of a JSA."""
    spectra._check_normalized(j)
    a = j.amplitudes
    if mode == 1:
        return (a * j.grid2.weights) @ a.conj().T
    if mode == 2:
        return (a.T * j.grid1.weights) @ a.conj()
    raise DimensionMismatch(f"mode must be 1 or 2, got {mode}")


def wigner_reduced(j: Jsa2D, mode: int, tau_grid: TimeGrid) -> WignerMap:
    """Wigner function of one photon of a (possibly entangled) pair."""
    grid = j.grid1 if mode == 1 else j.grid2
    return _wigner_from_density(reduced_density(j, mode), grid, tau_grid)


def evolve(state, alphas=None, delta_t=0.0):
    """Apply the delay: multiply bin-wise by exp(i sum_i alpha_i w_i dt)."""
    if isinstance(state, Spectrum1D):
        a = spectra.as_signs(alphas, 1)
        phase = np.exp(1j * a[0] * state.grid.points * delta_t)
        return Spectrum1D(state.grid, state.amplitudes * phase)
    if isinstance(state, Jsa2D):
        phase = np.exp(1j * spectra.collective_points(state, alphas) * delta_t)
        return Jsa2D(state.grid1, state.grid2, state.amplitudes * phase)
    raise TypeError(f"cannot evolve {type(state).__name__}")


def schmidt(j: Jsa2D) -> SchmidtReport:
    """Schmidt coefficients of the step-weighted amplitude matrix."""
    spectra._check_normalized(j)
    weighted = j.amplitudes * np.sqrt(np.outer(j.grid1.weights, j.grid2.weights))
    sv = np.linalg.svd(weighted, compute_uv=False)
    total = float(np.sum(sv**2))
    lam = sv / math.sqrt(total)
    p = lam**2
    nz = p[p > 0]
    entropy = float(-np.sum(nz * np.log2(nz)))
    return SchmidtReport(
        coefficients=tuple(float(x) for x in lam),
        entropy=max(entropy, 0.0),
        schmidt_number=float(1.0 / np.sum(p * p)),
        residue=abs(1.0 - total),
    )


def collective_rotate(j: Jsa2D, alphas=None) -> CollectiveAmplitude:
    """Resample a JSA on orthonormal collective coordinates (u, v).

    Square grids with equal steps are required; the rotated grids keep the same
    step. Values are interpolated with cubic splines; points outside the
    original grid are zero.
    """
    spectra._check_normalized(j)
    a = spectra.as_signs(alphas, 2)
    g1, g2 = j.grid1, j.grid2
    h = g1.step
    if g1.n_points != g2.n_points or abs(g2.step - h) > 1e-12 * h:
        raise DimensionMismatch("collective rotation needs square grids with equal steps")

    r = np.array([[a[0], a[1]], [a[0], -a[1]]]) / math.sqrt(2.0)
    corners = np.array([[x, y] for x in (g1.omega_min, g1.omega_max) for y in (g2.omega_min, g2.omega_max)])
    rotated = corners @ r.T
    u_lo, v_lo = rotated.min(axis=0)
    u_hi, v_hi = rotated.max(axis=0)
    nu = math.floor((u_hi - u_lo) / h) + 1
    nv = math.floor((v_hi - v_lo) / h) + 1
    u_c, v_c = 0.5 * (u_lo + u_hi), 0.5 * (v_lo + v_hi)
    u_grid = FrequencyGrid.centered(u_c, 0.5 * (nu - 1) * h, nu)
    v_grid = FrequencyGrid.centered(v_c, 0.5 * (nv - 1) * h, nv)

    uu, vv = np.meshgrid(u_grid.points, v_grid.points, indexing="ij")
    # omega = R^T (u, v)
    w1 = r[0, 0] * uu + r[1, 0] * vv
    w2 = r[0, 1] * uu + r[1, 1] * vv
    coords = np.array([(w1 - g1.omega_min) / h, (w2 - g2.omega_min) / h])
    re = ndimage.map_coordinates(j.amplitudes.real, coords, order=3, mode="constant", cval=0.0)
    im = ndimage.map_coordinates(j.amplitudes.imag, coords, order=3, mode="constant", cval=0.0)
    rot = Jsa2D(u_grid, v_grid, re + 1j * im)
    rot = spectra.normalize(rot)

    weighted = rot.amplitudes * np.sqrt(rot.weights)
    uvec, sv, vh = np.linalg.svd(weighted, full_matrices=False)
    lead = float(sv[0] ** 2 / np.sum(sv**2))
    factors = None
    if lead >= FACTORIZATION_THRESHOLD:
        f = spectra.normalize(Spectrum1D(u_grid, uvec[:, 0] / np.sqrt(u_grid.weights)))
        g = spectra.normalize(Spectrum1D(v_grid, vh[0, :] / np.sqrt(v_grid.weights)))
        # SVD leaves a common phase free; fix it so f is positive where largest
        k = int(np.argmax(np.abs(f.amplitudes)))
        ph = f.amplitudes[k] / abs(f.amplitudes[k])
        f = Spectrum1D(u_grid, f.amplitudes / ph)
        g = Spectrum1D(v_grid, g.amplitudes * ph)
        factors = (f, g)
    return CollectiveAmplitude(u_grid, v_grid, rot.amplitudes, tuple(int(x) for x in a), lead, factors)


@dataclass(frozen=True)
class ShiftReport:
    """Measured Wigner translations under a delay ``delta_t``.

    ``orthonormal_shift`` is the tau shift of the Wigner function of f(u);
    ``per_photon_shift`` rescales it to the common per-photon frequency variable
    (u / sqrt(n)), in which a maximally correlated n-photon state moves by
    n * delta_t. ``marginal_shift`` is the shift of one photon's reduced
    Wigner function. ``resolution_ratio`` divides the collective shift-to-width
    ratio by that of an independent photon with the same bandwidth
    (width 1 / (2 dw)); it does not depend on the variable convention and equals
    sqrt(Var(Omega)) / dw: n for the ideal correlated state, sqrt(n) for
    independent photons.
    """

    delta_t: float
    n: int
    marginal_shift: float
    orthonormal_shift: float
    per_photon_shift: float
    ratio: float | None
    resolution_ratio: float | None
    collective_width: float
    marginal_width: float
    collective_before: WignerMap | None = field(default=None, compare=False, repr=False)
    collective_after: WignerMap | None = field(default=None, compare=False, repr=False)


def collective_wigner_shift_check(j: Jsa2D, alphas=None, delta_t=0.1, tau_grid=None) -> ShiftReport:
    """Measure how far the collective and marginal Wigner maps move under a delay."""
    rot = collective_rotate(j, alphas)
    f, _ = rot.factored()
    f_after = evolve(f, None, math.sqrt(2.0) * delta_t)

    t_u, rms_u = time_spread(f)
    tg_u = tau_grid or time_grid_for(f.grid, rms_u, extra=2 * delta_t, center=t_u)
    wc0 = wigner_single(f, tg_u)
    wc1 = wigner_single(f_after, tg_u)

    j_after = evolve(j, alphas, delta_t)
    t_1, rms_1 = time_spread(j, 1)
    tg_1 = time_grid_for(j.grid1, rms_1, extra=2 * delta_t, center=t_1)
    wm0 = wigner_reduced(j, 1, tg_1)
    wm1 = wigner_reduced(j_after, 1, tg_1)
    a1 = rot.alphas[0]

    ortho = wc1.tau_centroid() - wc0.tau_centroid()
    marg = a1 * (wm1.tau_centroid() - wm0.tau_centroid())
    n = 2
    per_photon = math.sqrt(n) * ortho
    c_width = wc0.time_width()
    m_width = wm0.time_width()
    if delta_t == 0:
        ratio = resolution = None
    else:
        ratio = per_photon / marg
        _, var1, _ = spectra.marginal(j, 1).moments()
        resolution = (ortho / c_width) / (2.0 * delta_t * math.sqrt(var1))
    return ShiftReport(
        delta_t=float(delta_t),
        n=n,
        marginal_shift=marg,
        orthonormal_shift=ortho,
        per_photon_shift=per_photon,
        ratio=ratio,
        resolution_ratio=resolution,
        collective_width=c_width,
        marginal_width=m_width,
        collective_before=wc0,
        collective_after=wc1,
    )


def single_photon_shift(s: Spectrum1D, delta_t, tau_grid=None):
    """(shift, before, after) of the Wigner map of one photon under a delay."""
    t0, rms = time_spread(s)
    tg = tau_grid or time_grid_for(s.grid, rms, extra=2 * delta_t, center=t0)
    w0 = wigner_single(s, tg)
    w1 = wigner_single(evolve(s, None, delta_t), tg)
    return w1.tau_centroid() - w0.tau_centroid(), w0, w1
