"""Quantum precision limits for time-delay estimation with multi-photon spectral states."""
from .errors import TfqmError
from .metrology import (
    CoherentSpec,
    QfiReport,
    ScalingReport,
    classical_fisher,
    coherent_variance,
    collective_variance,
    cramer_rao,
    fit_scaling_exponent,
    overlap_qfi,
    qfi_report,
    scaling_sweep,
    separable_mode_variance,
    time_of_flight_fisher,
)
from .phasespace import (
    TimeGrid,
    WignerMap,
    collective_rotate,
    collective_wigner_shift_check,
    evolve,
    schmidt,
    wigner_reduced,
    wigner_single,
)
from .spectra import (
    FrequencyGrid,
    GaussianState,
    Jsa2D,
    ModeStatistics,
    SignVector,
    Spectrum1D,
    build_gaussian_pair,
    build_heisenberg_family,
    build_separable,
    covariance_from_grid,
    gaussian_spectrum,
    gaussian_to_jsa,
    marginal,
    moments,
    normalize,
)

__version__ = "0.1.0"

__all__ = [
    "CoherentSpec",
    "FrequencyGrid",
    "GaussianState",
    "Jsa2D",
    "ModeStatistics",
    "QfiReport",
    "ScalingReport",
    "SignVector",
    "Spectrum1D",
    "TfqmError",
    "TimeGrid",
    "WignerMap",
    "build_gaussian_pair",
    "build_heisenberg_family",
    "build_separable",
    "classical_fisher",
    "coherent_variance",
    "collective_rotate",
    "collective_variance",
    "collective_wigner_shift_check",
    "covariance_from_grid",
    "cramer_rao",
    "evolve",
    "fit_scaling_exponent",
    "gaussian_spectrum",
    "gaussian_to_jsa",
    "marginal",
    "moments",
    "normalize",
    "overlap_qfi",
    "qfi_report",
    "scaling_sweep",
    "schmidt",
    "separable_mode_variance",
    "time_of_flight_fisher",
    "wigner_reduced",
    "wigner_single",
]
