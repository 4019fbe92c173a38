"""Precision limits for time-delay estimation.

The delay ``theta`` enters through U(theta) = exp(i theta Omega) with the
collective generator Omega = sum_i alpha_i omega_i. For pure states the
quantum Fisher information is 4 Var(Omega); it is computed here analytically,
by grid quadrature, or from the fidelity of slightly displaced states.
"""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import spectra
from .errors import (
    DimensionMismatch,
    InsufficientPoints,
    InvalidEta,
    NonFiniteDensity,
    NonPositiveFisher,
    NonPositiveValue,
    NotNormalized,
    StepTooLarge,
)
from .spectra import GaussianState, Jsa2D, ModeStatistics, Spectrum1D

METHODS = ("analytic-gaussian", "grid-quadrature", "overlap")

# covariance route of the scaling sweep is materialized up to this photon number
MAX_MATERIALIZED_N = 256


@dataclass(frozen=True)
class QfiReport:
    variance_omega: float
    qfi: float
    crb: float
    method: str
    nu: int = 1

    @classmethod
    def from_variance(cls, variance, method, nu=1):
        qfi = 4.0 * variance
        return cls(variance, qfi, cramer_rao(qfi, nu), method, nu)

    @classmethod
    def from_qfi(cls, qfi, method, nu=1):
        return cls(qfi / 4.0, qfi, cramer_rao(qfi, nu), method, nu)


@dataclass(frozen=True)
class CoherentSpec:
    """Single-mode coherent state with amplitude ``beta`` and spectrum ``spectrum``."""

    beta: complex
    spectrum: Spectrum1D

    def __post_init__(self):
        norm = self.spectrum.norm()
        if abs(norm - 1.0) > spectra.NORM_TOL:
            raise NotNormalized(f"coherent-state spectrum has norm {norm:.9g}")

    @property
    def mean_photon_number(self) -> float:
        return abs(self.beta) ** 2


@dataclass(frozen=True)
class ScalingReport:
    eta: float
    delta_omega: float
    points: list  # (n, variance) from the closed form
    cross_check: list  # (n, variance) from the covariance construction
    local_slopes: list  # (n, dlogV/dlogn)
    transition_n: float

    @property
    def n_values(self):
        return [n for n, _ in self.points]

    @property
    def variances(self):
        return [v for _, v in self.points]


def collective_variance(state, alphas=None) -> float:
    """Var(sum_i alpha_i omega_i) for a GaussianState, Jsa2D or Spectrum1D.

    Gaussian states give alpha^T cov alpha exactly; grid states use trapezoid
    quadrature of the centred second moment.
    """
    if isinstance(state, GaussianState):
        a = spectra.as_signs(alphas, state.n)
        return float(a @ state.cov @ a)
    if isinstance(state, Jsa2D):
        spectra._check_normalized(state)
        omega = spectra.collective_points(state, alphas)
        w = state.weights * state.density
        total = np.sum(w)
        mean = np.sum(w * omega) / total
        return float(np.sum(w * (omega - mean) ** 2) / total)
    if isinstance(state, Spectrum1D):
        spectra.as_signs(alphas, 1)
        return spectra.moments(state)[1]
    raise TypeError(f"unsupported state type {type(state).__name__}")


def separable_mode_variance(modes, alphas=None) -> float:
    """Generator variance of a mode-separable state.

    Sum over modes of <n_i> dw_i^2 + Var(n_i) wbar_i^2, where wbar_i is the mean
    frequency. The signs enter squared, so they drop out; they are only checked
    for length.
    """
    modes = list(modes)
    if alphas is not None:
        spectra.as_signs(alphas, len(modes))
    total = 0.0
    for m in modes:
        if not isinstance(m, ModeStatistics):
            raise TypeError("modes must be ModeStatistics instances")
        total += m.mean_n * m.var_omega + m.var_n * m.mean_omega**2
    return total


def coherent_variance(c: CoherentSpec) -> float:
    """|beta|^2 times the mean-square frequency of the spectrum."""
    _, _, mean_square = spectra.moments(c.spectrum)
    return abs(c.beta) ** 2 * mean_square


def _phase_overlap(state, alphas, dtheta):
    if isinstance(state, Jsa2D):
        omega = spectra.collective_points(state, alphas)
        w = state.weights * state.density
    elif isinstance(state, Spectrum1D):
        a = spectra.as_signs(alphas, 1)
        omega = a[0] * state.grid.points
        w = state.grid.weights * state.density
    else:
        raise TypeError(f"overlap QFI needs a grid state, got {type(state).__name__}")
    # centring removes a global phase and keeps the sum well conditioned
    centre = np.sum(w * omega) / np.sum(w)
    return abs(np.sum(w * np.exp(1j * (omega - centre) * dtheta)))


def _raw_overlap_qfi(state, alphas, dtheta):
    return 8.0 * (1.0 - _phase_overlap(state, alphas, dtheta)) / dtheta**2


def overlap_qfi(state, alphas=None, dtheta=None, richardson=None) -> float:
    """QFI from the fidelity between the state and its delayed copy.

    With ``dtheta=None`` the step is ``0.01 / sqrt(Var)`` and the estimates at
    h and h/2 are Richardson-combined, cancelling the O(h^2) bias. An explicit
    ``dtheta`` returns the raw finite-difference estimate unless
    ``richardson=True``.
    """
    if not isinstance(state, (Jsa2D, Spectrum1D)):
        raise TypeError(f"overlap QFI needs a grid state, got {type(state).__name__}")
    spectra._check_normalized(state)
    variance = collective_variance(state, alphas)
    if dtheta is None:
        if variance <= 0.0:
            return 0.0
        dtheta = 0.01 / math.sqrt(variance)
        richardson = True if richardson is None else richardson
    if not dtheta > 0:
        raise StepTooLarge(f"dtheta must be positive, got {dtheta}")
    if dtheta * math.sqrt(max(variance, 0.0)) >= 0.1:
        raise StepTooLarge(
            f"dtheta * sqrt(Var) = {dtheta * math.sqrt(variance):.3g} >= 0.1; reduce dtheta"
        )
    coarse = _raw_overlap_qfi(state, alphas, dtheta)
    if not richardson:
        return coarse
    fine = _raw_overlap_qfi(state, alphas, dtheta / 2)
    return (4.0 * fine - coarse) / 3.0


def classical_fisher(p_family, dtheta, dx, eps=1e-12) -> float:
    """Fisher information from densities sampled at theta - dtheta, theta, theta + dtheta.

    ``dx`` is the volume element of one outcome bin. The derivative is a central
    difference; bins where the density is below ``eps`` are skipped.
    """
    if not dtheta > 0:
        raise ValueError("dtheta must be positive")
    p_minus, p0, p_plus = (np.asarray(p, dtype=float) for p in p_family)
    if not (p_minus.shape == p0.shape == p_plus.shape):
        raise DimensionMismatch("densities must share one outcome grid")
    for p in (p_minus, p0, p_plus):
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise NonFiniteDensity("densities must be finite and nonnegative")
        total = float(np.sum(p)) * dx
        if abs(total - 1.0) > spectra.NORM_TOL:
            raise NotNormalized(f"density integrates to {total:.9g}")
    keep = p0 > eps
    dp = (p_plus - p_minus)[keep] / (2.0 * dtheta)
    return float(np.sum(dp * dp / p0[keep]) * dx)


def time_density(state, pad=4):
    """Arrival-time probability density of a grid state and the time step.

    The time-domain amplitude is (1/sqrt(2 pi)) int S(w) exp(-i w t) dw,
    evaluated with a zero-padded FFT; ``t = 0`` sits at the centre index.
    """
    if isinstance(state, Spectrum1D):
        steps = (state.grid.step,)
    elif isinstance(state, Jsa2D):
        steps = (state.grid1.step, state.grid2.step)
    else:
        raise TypeError(f"time density needs a grid state, got {type(state).__name__}")
    shape = tuple(pad * n for n in state.amplitudes.shape)
    axes = tuple(range(len(shape)))
    amp = np.fft.fftshift(np.fft.fftn(state.amplitudes, s=shape, axes=axes), axes=axes)
    scale = np.prod(steps) ** 2 / (2 * np.pi) ** len(steps)
    dts = tuple(2 * np.pi / (m * h) for m, h in zip(shape, steps))
    return scale * np.abs(amp) ** 2, dts


def time_of_flight_fisher(state, alphas=None, dtheta=None, pad=4) -> float:
    """Classical Fisher information of ideal arrival-time detection.

    Every photon's arrival time is recorded; the delay shifts the joint
    arrival-time density and the FI of that location family is returned.
    """
    from .phasespace import evolve

    spectra._check_normalized(state)
    if dtheta is None:
        variance = collective_variance(state, alphas)
        dtheta = 1e-3 / math.sqrt(variance) if variance > 0 else 1e-3
    densities = []
    for shift in (-dtheta, 0.0, dtheta):
        p, dts = time_density(evolve(state, alphas, shift), pad)
        densities.append(p)
    return classical_fisher(densities, dtheta, float(np.prod(dts)))


def cramer_rao(fisher, nu=1) -> float:
    """Lower bound 1 / sqrt(nu F) on the delay uncertainty."""
    if not fisher > 0 or not math.isfinite(fisher):
        raise NonPositiveFisher(f"Fisher information must be positive, got {fisher}")
    if int(nu) != nu or nu < 1:
        raise ValueError(f"nu must be an integer >= 1, got {nu}")
    return 1.0 / math.sqrt(nu * fisher)


def qfi_report(state, alphas=None, nu=1, method=None) -> QfiReport:
    """Bundle variance, QFI and bound for ``state``.

    ``method`` defaults to analytic-gaussian for Gaussian states and
    grid-quadrature for grid states; ``"overlap"`` needs a grid state.
    Coherent states use Var = |beta|^2 <w^2> by quadrature of their spectrum.
    """
    if isinstance(state, CoherentSpec):
        if method not in (None, "grid-quadrature"):
            raise ValueError(f"method {method!r} is not available for coherent states")
        return QfiReport.from_variance(coherent_variance(state), "grid-quadrature", nu)
    if method is None:
        method = "analytic-gaussian" if isinstance(state, GaussianState) else "grid-quadrature"
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    if method == "overlap":
        return QfiReport.from_qfi(overlap_qfi(state, alphas), method, nu)
    if method == "analytic-gaussian" and not isinstance(state, GaussianState):
        raise TypeError("analytic-gaussian needs a GaussianState")
    if method == "grid-quadrature" and isinstance(state, GaussianState):
        raise TypeError("grid-quadrature needs a grid state")
    return QfiReport.from_variance(collective_variance(state, alphas), method, nu)


def correlated_variance(n, delta_omega, eta) -> float:
    """Closed form n^2 dw^2 / (n (1 - eta) + eta)."""
    return n * n * delta_omega**2 / (n * (1.0 - eta) + eta)


def _covariance_route(n, delta_omega, eta, closed):
    sigma = math.sqrt((1.0 - eta) * closed / n)
    if n == 1:
        return collective_variance(spectra.build_separable(1, delta_omega))
    if n <= MAX_MATERIALIZED_N:
        g = spectra.build_heisenberg_family(n, delta_omega, sigma)
        return collective_variance(g)
    # eigen-decomposition route: the collective direction carries
    # n dw^2 - (n - 1) sigma^2, projected onto alpha (|alpha|^2 = n)
    return n * (n * delta_omega**2 - (n - 1) * sigma**2)


def _local_slopes(ns, vs):
    logn = np.log(np.asarray(ns, dtype=float))
    logv = np.log(np.asarray(vs, dtype=float))
    k = len(ns)
    if k == 1:
        return [float("nan")]
    slopes = np.empty(k)
    slopes[0] = (logv[1] - logv[0]) / (logn[1] - logn[0])
    slopes[-1] = (logv[-1] - logv[-2]) / (logn[-1] - logn[-2])
    if k > 2:
        slopes[1:-1] = (logv[2:] - logv[:-2]) / (logn[2:] - logn[:-2])
    return slopes.tolist()


def scaling_sweep(eta, delta_omega, n_list, max_workers=1) -> ScalingReport:
    """Generator variance of the correlated family versus photon number.

    Each point is computed from the closed form and, independently, from the
    covariance construction with sigma^2 = (1 - eta) V / n; the two must agree
    to 1e-9 relative. ``transition_n`` is eta / (1 - eta), or inf at eta = 1.
    """
    if not (isinstance(eta, (int, float)) and 0.0 <= eta <= 1.0):
        raise InvalidEta(f"eta must lie in [0, 1], got {eta}")
    if delta_omega <= 0:
        raise ValueError("delta_omega must be positive")
    ns = [int(n) for n in n_list]
    if not ns:
        raise InsufficientPoints("n_list is empty")
    if any(n < 1 for n in ns) or any(b <= a for a, b in itertools.pairwise(ns)):
        raise ValueError("n_list must be strictly increasing integers >= 1")

    closed = [correlated_variance(n, delta_omega, eta) for n in ns]

    def check(i):
        return _covariance_route(ns[i], delta_omega, eta, closed[i])

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            crossed = list(pool.map(check, range(len(ns))))
    else:
        crossed = [check(i) for i in range(len(ns))]
    for n, a, b in zip(ns, closed, crossed):
        if abs(a - b) > 1e-9 * abs(a):
            raise ArithmeticError(f"closed form {a!r} and covariance route {b!r} disagree at n={n}")

    transition = math.inf if eta == 1.0 else eta / (1.0 - eta)
    return ScalingReport(
        eta=float(eta),
        delta_omega=float(delta_omega),
        points=list(zip(ns, closed)),
        cross_check=list(zip(ns, crossed)),
        local_slopes=list(zip(ns, _local_slopes(ns, closed))),
        transition_n=transition,
    )


def fit_scaling_exponent(points) -> float:
    """Least-squares slope of log(value) against log(n)."""
    points = list(points)
    if len(points) < 3:
        raise InsufficientPoints(f"need at least 3 points, got {len(points)}")
    arr = np.asarray(points, dtype=float)
    if np.any(arr <= 0):
        raise NonPositiveValue("power-law fit needs strictly positive n and values")
    slope, _ = np.polyfit(np.log(arr[:, 0]), np.log(arr[:, 1]), 1)
    return float(slope)
