"""Steady states and spectra of a damped collective bosonic mode coupled to
a structured bath: mean field, Keldysh-Nambu Green's functions, dissipative
mode spectra, critical behavior, effective temperature, and two independent
brute-force validators."""

from .bath import (
    BathFamily,
    BathSpec,
    SelfEnergy,
    calibration_constant,
    self_energy,
    self_energy_fn,
    spectral_density,
)
from .errors import (
    BracketError,
    DomainError,
    ExtrapolationError,
    FitDegeneracyError,
    NumericalError,
    QuadratureError,
    RootPolishError,
    SingularIntegrandError,
    SpinbathError,
    StabilityError,
    TruncationError,
)
from .greens import (
    FreqGrid,
    NambuMatrix,
    distribution_matrix,
    effective_temperature,
    gr_inverse,
    keldysh_correlator,
    keldysh_matrix_fdt,
    spectral_response,
)
from .model import (
    BosonModel,
    MeanField,
    SpinModelParams,
    bosonize,
    critical_coupling,
    mean_field_amplitude,
    saddle_residual,
    solve_saddle,
)
from .observables import (
    ExponentFit,
    SweepResult,
    fit_divergence_exponent,
    steady_density,
    sweep_response,
)
from .oracle import (
    DiscretizedBath,
    FockTruncation,
    LindbladResult,
    drift_eigenvalues,
    drift_matrix,
    lindblad_steady_state,
    lyapunov_density,
)
from .spectrum import (
    ModeSet,
    characteristic_roots,
    find_transition,
    fluctuation_roots,
    track_roots,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    # model
    "SpinModelParams",
    "BosonModel",
    "MeanField",
    "bosonize",
    "critical_coupling",
    "mean_field_amplitude",
    "saddle_residual",
    "solve_saddle",
    # bath
    "BathFamily",
    "BathSpec",
    "SelfEnergy",
    "spectral_density",
    "self_energy",
    "self_energy_fn",
    "calibration_constant",
    # greens
    "NambuMatrix",
    "FreqGrid",
    "gr_inverse",
    "spectral_response",
    "keldysh_correlator",
    "distribution_matrix",
    "keldysh_matrix_fdt",
    "effective_temperature",
    # spectrum
    "ModeSet",
    "characteristic_roots",
    "fluctuation_roots",
    "find_transition",
    "track_roots",
    # observables
    "SweepResult",
    "ExponentFit",
    "steady_density",
    "fit_divergence_exponent",
    "sweep_response",
    # oracle
    "FockTruncation",
    "LindbladResult",
    "DiscretizedBath",
    "lindblad_steady_state",
    "lyapunov_density",
    "drift_matrix",
    "drift_eigenvalues",
    # errors
    "SpinbathError",
    "DomainError",
    "NumericalError",
    "QuadratureError",
    "SingularIntegrandError",
    "RootPolishError",
    "BracketError",
    "StabilityError",
    "TruncationError",
    "ExtrapolationError",
    "FitDegeneracyError",
]
