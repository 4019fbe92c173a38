"""Single- and two-photon spectral states, their moments, and state builders.

Two representations live side by side:

* grid states (:class:`Spectrum1D`, :class:`Jsa2D`) sample a complex spectral
  amplitude on uniform frequency grids; all integrals use the trapezoid rule;
* :class:`GaussianState` is the analytic n-photon model, a mean vector plus a
  frequency covariance matrix, exact for any photon number.

Units: hbar = 1 and frequencies are dimensionless angular frequencies.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    GridTooNarrow,
    InvalidN,
    NegativeStatistics,
    NotNormalized,
    NotPositiveSemidefinite,
    UnsupportedN,
    ZeroSpectrum,
)

NORM_TOL = 1e-6
COVERAGE_SIGMAS = 5.0
DEFAULT_POINTS = 512
DEFAULT_SPAN = 6.0
_PSD_TOL = 1e-12


class GridTooCoarse(GridTooNarrow):
    """Grid step larger than the narrowest feature of the requested state."""


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform grid ``omega_min + k * step`` for ``k = 0 .. n_points - 1``."""

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if not (np.isfinite(self.omega_min) and np.isfinite(self.omega_max)):
            raise ValueError("grid bounds must be finite")
        if not self.omega_max > self.omega_min:
            raise ValueError(f"omega_max ({self.omega_max}) must exceed omega_min ({self.omega_min})")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")
        object.__setattr__(self, "omega_min", float(self.omega_min))
        object.__setattr__(self, "omega_max", float(self.omega_max))
        object.__setattr__(self, "n_points", int(self.n_points))

    @classmethod
    def centered(cls, center, half_width, n_points=DEFAULT_POINTS):
        return cls(center - half_width, center + half_width, n_points)

    @property
    def step(self) -> float:
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    @property
    def width(self) -> float:
        return self.omega_max - self.omega_min

    @property
    def points(self) -> np.ndarray:
        return self.omega_min + np.arange(self.n_points) * self.step

    @property
    def weights(self) -> np.ndarray:
        """Trapezoid quadrature weights (they include the step)."""
        w = np.full(self.n_points, self.step)
        w[0] = w[-1] = 0.5 * self.step
        return w

    def covers(self, lo, hi) -> bool:
        slack = 1e-9 * max(1.0, abs(self.omega_min), abs(self.omega_max))
        return self.omega_min <= lo + slack and self.omega_max >= hi - slack


def default_grid(mean, sd, n_points=DEFAULT_POINTS, span=DEFAULT_SPAN):
    """Grid spanning ``mean +- span * sd``."""
    return FrequencyGrid.centered(mean, span * sd, n_points)


def _readonly(a):
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Spectrum1D:
    """Complex spectral amplitude S(omega) of one photon on a grid."""

    grid: FrequencyGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        if a.shape != (self.grid.n_points,):
            raise DimensionMismatch(
                f"amplitudes have shape {a.shape}, grid has {self.grid.n_points} points"
            )
        object.__setattr__(self, "amplitudes", _readonly(a))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def norm(self) -> float:
        return float(np.dot(self.grid.weights, self.density))


@dataclass(frozen=True, eq=False)
class Jsa2D:
    """Joint spectral amplitude; axis 0 is photon 1 (``grid1``), axis 1 photon 2."""

    grid1: FrequencyGrid
    grid2: FrequencyGrid
    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        expected = (self.grid1.n_points, self.grid2.n_points)
        if a.shape != expected:
            raise DimensionMismatch(f"amplitudes have shape {a.shape}, grids imply {expected}")
        object.__setattr__(self, "amplitudes", _readonly(a))

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @property
    def weights(self) -> np.ndarray:
        return np.outer(self.grid1.weights, self.grid2.weights)

    def norm(self) -> float:
        return float(np.sum(self.weights * self.density))


@dataclass(frozen=True, eq=False)
class SpectralDensity:
    """Probability density over one frequency axis (e.g. a JSI marginal)."""

    grid: FrequencyGrid
    values: np.ndarray

    def integral(self) -> float:
        return float(np.dot(self.grid.weights, self.values))

    def moments(self):
        return _density_moments(self.grid, self.values)


@dataclass(frozen=True)
class SignVector:
    """Signs alpha_i = +-1 of the collective generator sum_i alpha_i omega_i."""

    values: tuple

    def __post_init__(self):
        vals = tuple(self.values)
        if not vals:
            raise DimensionMismatch("sign vector must not be empty")
        for v in vals:
            if isinstance(v, bool) or v not in (1, -1):
                raise ValueError(f"sign entries must be +1 or -1, got {v!r}")
        object.__setattr__(self, "values", tuple(int(v) for v in vals))

    @classmethod
    def ones(cls, n):
        return cls((1,) * n)

    def __len__(self):
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.array(self.values, dtype=float)


def as_signs(alphas, n) -> np.ndarray:
    """Coerce ``alphas`` (SignVector, sequence or None = all +1) and check its length."""
    if alphas is None:
        alphas = SignVector.ones(n)
    elif not isinstance(alphas, SignVector):
        alphas = SignVector(tuple(alphas))
    if len(alphas) != n:
        raise DimensionMismatch(f"{len(alphas)} signs given for {n} photons")
    return alphas.as_array()


@dataclass(frozen=True)
class ModeStatistics:
    """Photon-number and frequency statistics of one separable spatial mode."""

    mean_n: float
    var_n: float
    mean_omega: float
    var_omega: float

    def __post_init__(self):
        for name in ("mean_n", "var_n", "var_omega"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0:
                raise NegativeStatistics(f"{name} must be finite and >= 0, got {value}")
        if not np.isfinite(self.mean_omega):
            raise NegativeStatistics("mean_omega must be finite")

    @classmethod
    def single_photon(cls, spectrum: Spectrum1D):
        mean, var, _ = moments(spectrum)
        return cls(1.0, 0.0, mean, var)

    @classmethod
    def coherent(cls, beta, spectrum: Spectrum1D):
        mean, var, _ = moments(spectrum)
        n = abs(beta) ** 2
        return cls(n, n, mean, var)


@dataclass(frozen=True, eq=False)
class GaussianState:
    """Analytic n-photon state: mean frequencies and frequency covariance.

    The covariance must be symmetric positive semidefinite; eigenvalues that
    are negative by less than ``1e-12`` (relative to the largest one) are
    clamped to zero.
    """

    mean: np.ndarray
    cov: np.ndarray
    n: int = field(init=False)

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).reshape(-1)
        cov = np.array(self.cov, dtype=float)
        n = mean.size
        if n < 1:
            raise InvalidN("a Gaussian state needs at least one photon")
        if cov.shape != (n, n):
            raise DimensionMismatch(f"covariance shape {cov.shape} does not match {n} means")
        if not (np.all(np.isfinite(cov)) and np.all(np.isfinite(mean))):
            raise NotPositiveSemidefinite("covariance and means must be finite")
        scale = max(1.0, float(np.max(np.abs(cov))))
        if np.max(np.abs(cov - cov.T)) > _PSD_TOL * scale:
            raise NotPositiveSemidefinite("covariance is not symmetric")
        cov = 0.5 * (cov + cov.T)
        if n > 1:
            evals, evecs = np.linalg.eigh(cov)
            tol = _PSD_TOL * max(1.0, float(evals[-1]))
            if evals[0] < -tol:
                raise NotPositiveSemidefinite(
                    f"covariance has negative eigenvalue {evals[0]:.3e}"
                )
            if evals[0] < 0:
                cov = (evecs * np.clip(evals, 0.0, None)) @ evecs.T
                cov = 0.5 * (cov + cov.T)
        elif cov[0, 0] < 0:
            raise NotPositiveSemidefinite(f"negative variance {cov[0, 0]}")
        object.__setattr__(self, "mean", _readonly(mean))
        object.__setattr__(self, "cov", _readonly(cov))
        object.__setattr__(self, "n", n)

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.cov).copy()


# --- quadrature helpers -----------------------------------------------------

def _check_normalized(state):
    norm = state.norm()
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalized(f"state norm is {norm:.9g}, expected 1 (call normalize first)")


def _density_moments(grid, p):
    w = grid.weights * p
    omega = grid.points
    mean = float(np.dot(w, omega)) / float(np.sum(w))
    var = float(np.dot(w, (omega - mean) ** 2)) / float(np.sum(w))
    return mean, var, var + mean * mean


# --- operations ---------------------------------------------------------------

def normalize(s):
    """Rescale a Spectrum1D or Jsa2D by a positive factor to unit quadrature norm."""
    norm = s.norm()
    if norm == 0.0 or not np.any(s.amplitudes):
        raise ZeroSpectrum("cannot normalize an all-zero amplitude")
    scale = 1.0 / np.sqrt(norm)
    if isinstance(s, Spectrum1D):
        return Spectrum1D(s.grid, s.amplitudes * scale)
    return Jsa2D(s.grid1, s.grid2, s.amplitudes * scale)


def moments(s: Spectrum1D):
    """Return ``(mean_omega, var_omega, mean_square_omega)`` of |S|^2."""
    _check_normalized(s)
    return _density_moments(s.grid, s.density)


def marginal(j: Jsa2D, mode: int) -> SpectralDensity:
    """Frequency density of photon ``mode`` (1 or 2), the other one integrated out."""
    _check_normalized(j)
    p = j.density
    if mode == 1:
        return SpectralDensity(j.grid1, p @ j.grid2.weights)
    if mode == 2:
        return SpectralDensity(j.grid2, j.grid1.weights @ p)
    raise DimensionMismatch(f"mode must be 1 or 2, got {mode}")


def covariance_from_grid(j: Jsa2D) -> np.ndarray:
    """2x2 frequency covariance of a normalized JSA by trapezoid quadrature."""
    _check_normalized(j)
    w = j.weights * j.density
    total = np.sum(w)
    m1 = float(np.sum(w.sum(axis=1) * j.grid1.points) / total)
    m2 = float(np.sum(w.sum(axis=0) * j.grid2.points) / total)
    d1 = j.grid1.points - m1
    d2 = j.grid2.points - m2
    c11 = float(np.dot(w.sum(axis=1), d1 * d1) / total)
    c22 = float(np.dot(w.sum(axis=0), d2 * d2) / total)
    c12 = float(d1 @ w @ d2 / total)
    return np.array([[c11, c12], [c12, c22]])


def grid_means(j: Jsa2D):
    _check_normalized(j)
    w = j.weights * j.density
    total = np.sum(w)
    return (
        float(np.sum(w.sum(axis=1) * j.grid1.points) / total),
        float(np.sum(w.sum(axis=0) * j.grid2.points) / total),
    )


def gaussian_spectrum(center, delta_omega, grid=None) -> Spectrum1D:
    """Real Gaussian amplitude whose intensity has mean ``center`` and RMS ``delta_omega``."""
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    if grid is None:
        grid = default_grid(center, delta_omega)
    _check_coverage(grid, center, delta_omega, "grid")
    _check_resolution(grid.step, delta_omega)
    x = grid.points - center
    return normalize(Spectrum1D(grid, np.exp(-x * x / (4.0 * delta_omega**2))))


def build_separable(n, delta_omega, means=None) -> GaussianState:
    """n independent photons, each with frequency RMS ``delta_omega``."""
    if int(n) != n or n < 1:
        raise InvalidN(f"photon number must be an integer >= 1, got {n}")
    n = int(n)
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    means = np.zeros(n) if means is None else np.asarray(means, dtype=float)
    if means.shape != (n,):
        raise DimensionMismatch(f"{means.size} means given for {n} photons")
    return GaussianState(means, np.eye(n) * delta_omega**2)


def build_heisenberg_family(n, delta_omega, sigma, offsets=None, alphas=None) -> GaussianState:
    """Photons correlated along the collective direction ``alphas / sqrt(n)``.

    Every photon keeps variance ``delta_omega**2``; each of the n - 1 directions
    orthogonal to the collective one carries variance ``sigma**2``. Hence
    ``cov = sigma**2 * I + (delta_omega**2 - sigma**2) * a a^T`` with ``a`` the
    sign vector, and Var(sum_i a_i w_i) = n^2 (dw^2 - sigma^2) + n sigma^2.
    ``sigma = 0`` is the ideal (non-physical) maximally correlated limit and
    ``sigma = delta_omega`` the separable one.
    """
    if int(n) != n or n < 2:
        raise InvalidN(f"the correlated family needs n >= 2, got {n}")
    n = int(n)
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    if sigma < 0:
        raise NotPositiveSemidefinite(f"sigma must be >= 0, got {sigma}")
    s2 = float(sigma) ** 2
    d2 = float(delta_omega) ** 2
    if s2 > d2 * n / (n - 1) * (1 + 1e-12):
        raise NotPositiveSemidefinite(
            f"sigma={sigma} exceeds delta_omega*sqrt(n/(n-1))="
            f"{delta_omega * np.sqrt(n / (n - 1)):.6g}; covariance would not be PSD"
        )
    a = as_signs(alphas, n)
    offsets = np.zeros(n) if offsets is None else np.asarray(offsets, dtype=float)
    if offsets.shape != (n,):
        raise DimensionMismatch(f"{offsets.size} offsets given for {n} photons")
    cov = s2 * np.eye(n) + (d2 - s2) * np.outer(a, a)
    np.fill_diagonal(cov, d2)
    return GaussianState(offsets, cov)


def sigma_from_eta(n, delta_omega, eta):
    """Orthogonal-direction width for correlation parameter ``eta``.

    Solves sigma^2 = (1 - eta) V / n with V = n^2 dw^2 / (n (1 - eta) + eta).
    """
    if not 0.0 <= eta <= 1.0:
        raise ValueError(f"eta must lie in [0, 1], got {eta}")
    v = n * n * delta_omega**2 / (n * (1.0 - eta) + eta)
    return float(np.sqrt((1.0 - eta) * v / n))


def _check_coverage(grid, mean, sd, label):
    if not grid.covers(mean - COVERAGE_SIGMAS * sd, mean + COVERAGE_SIGMAS * sd):
        raise GridTooNarrow(
            f"{label} [{grid.omega_min:.6g}, {grid.omega_max:.6g}] does not cover "
            f"mean {mean:.6g} +- {COVERAGE_SIGMAS:g} * {sd:.6g}"
        )


def _check_resolution(step, sd):
    if sd < step * (1 - 1e-9):
        raise GridTooCoarse(f"narrowest width {sd:.4g} is below the grid step {step:.4g}")


def gaussian_to_jsa(g: GaussianState, grid1=None, grid2=None) -> Jsa2D:
    """Sample a two-photon Gaussian state as a real, nonnegative JSA.

    The amplitude is the positive square root of the Gaussian density. Default
    grids span each mean +- 6 marginal standard deviations with 512 points.
    """
    if g.n != 2:
        raise UnsupportedN(f"grid sampling supports n = 2 only, got n = {g.n}")
    evals, evecs = np.linalg.eigh(g.cov)
    if evals[0] <= 0:
        raise NotPositiveSemidefinite(
            "covariance is singular; the ideal correlated limit has no grid representation"
        )
    sd = np.sqrt(np.diag(g.cov))
    grid1 = grid1 or default_grid(g.mean[0], sd[0])
    grid2 = grid2 or default_grid(g.mean[1], sd[1])
    _check_coverage(grid1, g.mean[0], sd[0], "grid1")
    _check_coverage(grid2, g.mean[1], sd[1], "grid2")
    _check_resolution(max(grid1.step, grid2.step), float(np.sqrt(evals[0])))
    prec = (evecs / evals) @ evecs.T
    x = grid1.points[:, None] - g.mean[0]
    y = grid2.points[None, :] - g.mean[1]
    q = prec[0, 0] * x * x + 2 * prec[0, 1] * x * y + prec[1, 1] * y * y
    return normalize(Jsa2D(grid1, grid2, np.exp(-0.25 * q)))


def gaussian_to_spectrum(g: GaussianState, grid=None) -> Spectrum1D:
    if g.n != 1:
        raise UnsupportedN(f"expected a single photon, got n = {g.n}")
    return gaussian_spectrum(g.mean[0], float(np.sqrt(g.cov[0, 0])), grid)


def build_gaussian_pair(mean1, mean2, delta_omega, rho, grid1=None, grid2=None) -> Jsa2D:
    """Two photons of equal RMS ``delta_omega`` with frequency correlation ``rho``."""
    if not abs(rho) < 1:
        raise NotPositiveSemidefinite(f"|rho| must be < 1, got {rho}")
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    d2 = delta_omega**2
    g = GaussianState([mean1, mean2], [[d2, rho * d2], [rho * d2, d2]])
    return gaussian_to_jsa(g, grid1, grid2)


def product_jsa(s1: Spectrum1D, s2: Spectrum1D) -> Jsa2D:
    return Jsa2D(s1.grid, s2.grid, np.outer(s1.amplitudes, s2.amplitudes))


def jsa_to_gaussian(j: Jsa2D) -> GaussianState:
    """Moment-matched analytic description of a grid JSA (means and covariance)."""
    return GaussianState(grid_means(j), covariance_from_grid(j))


def collective_points(j: Jsa2D, alphas: Sequence[int] | None = None) -> np.ndarray:
    """Values of sum_i alpha_i omega_i on the JSA lattice."""
    a = as_signs(alphas, 2)
    return a[0] * j.grid1.points[:, None] + a[1] * j.grid2.points[None, :]
