"""Floquet-Lindblad dynamics of periodically kicked open quantum systems.

A small library for two workflows: build the weak-coupling Markovian
generator of a delta-kicked system coupled to stationary baths, and
compare the resulting relaxation against closed-form rates, Bloch
trajectories, and spin-echo signals.  Brute-force validators live in
:mod:`floqlind.oracle`; the config-driven table writer in
:mod:`floqlind.cli`.
"""

from .bath import Lorentzian, PhononCutoff, SpectralDensity, Tabulated
from .dynamics import (
    TLSParams,
    Trajectory,
    closed_form_parallel,
    closed_form_perp,
    evolve,
    t1_time,
    t2_prime,
)
from .echo import (
    DiscreteDetuning,
    EchoSignal,
    ExtractionResult,
    GaussianDetuning,
    UniformDetuning,
    averaged_phase,
    echo_signal,
    extract_tau_c,
    read_rate_measurements,
)
from .errors import (
    ConfigError,
    DimensionError,
    DomainError,
    ExtrapolationError,
    HermiticityError,
    InconsistentDataError,
    InvalidStateError,
    OutOfRangeError,
    StabilityError,
    TruncationError,
    UndefinedRatioError,
    UnsupportedFrameError,
    UnsupportedRegimeError,
)
from .floquet import (
    FloquetDecomposition,
    HarmonicDecomposition,
    KickedModel,
    decompose,
    floor_frac,
    floquet_operator,
    harmonic_decomposition,
    propagator,
    propagator_left_limit,
    reconstruct_heisenberg,
)
from .lindblad import (
    CPTPReport,
    LindbladGenerator,
    RateResult,
    TruncationInfo,
    build_generator,
    choi_matrix,
    combine_rates,
    rate_parallel_closed,
    rate_perp_closed,
    semigroup,
    verify_cptp,
)
from .operators import (
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    PAULIS,
    bloch_from_density,
    density_from_bloch,
    require_hermitian,
    vec,
    unvec,
)
from .oracle import (
    RegularizationSpec,
    SeriesRate,
    integrate_master_equation,
    quadrature_harmonics,
    regularized_propagator,
    series_rate_parallel,
)

__version__ = "0.1.0"

__all__ = [
    "CPTPReport",
    "ConfigError",
    "DimensionError",
    "DiscreteDetuning",
    "DomainError",
    "EchoSignal",
    "ExtractionResult",
    "ExtrapolationError",
    "FloquetDecomposition",
    "GaussianDetuning",
    "HarmonicDecomposition",
    "HermiticityError",
    "InconsistentDataError",
    "InvalidStateError",
    "KickedModel",
    "LindbladGenerator",
    "Lorentzian",
    "OutOfRangeError",
    "PAULIS",
    "PAULI_X",
    "PAULI_Y",
    "PAULI_Z",
    "PhononCutoff",
    "RateResult",
    "RegularizationSpec",
    "SeriesRate",
    "SpectralDensity",
    "StabilityError",
    "TLSParams",
    "Tabulated",
    "Trajectory",
    "TruncationError",
    "TruncationInfo",
    "UndefinedRatioError",
    "UniformDetuning",
    "UnsupportedFrameError",
    "UnsupportedRegimeError",
    "averaged_phase",
    "bloch_from_density",
    "build_generator",
    "choi_matrix",
    "closed_form_parallel",
    "closed_form_perp",
    "combine_rates",
    "decompose",
    "density_from_bloch",
    "echo_signal",
    "evolve",
    "extract_tau_c",
    "floor_frac",
    "floquet_operator",
    "harmonic_decomposition",
    "integrate_master_equation",
    "propagator",
    "propagator_left_limit",
    "quadrature_harmonics",
    "rate_parallel_closed",
    "rate_perp_closed",
    "read_rate_measurements",
    "reconstruct_heisenberg",
    "regularized_propagator",
    "require_hermitian",
    "semigroup",
    "series_rate_parallel",
    "t1_time",
    "t2_prime",
    "unvec",
    "vec",
    "verify_cptp",
]
