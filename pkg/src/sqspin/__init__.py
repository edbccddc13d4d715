"""Phase structure and metrology of the single spherical quantum spin.

A single harmonic oscillator with inverse mass g, constrained to <x^2> = 1
and <x> = h0, develops ordered/disordered phases in equilibrium (g, T) and
under dissipation (g, gamma).  This package solves the self-consistency
equations, computes the quantum and photon-counting Fisher information for
estimating g, and validates every closed form against a truncated-Fock-space
oracle.
"""

__version__ = "0.1.0"

from .errors import (
    DomainError,
    NoSignChange,
    NonFinite,
    PhaseError,
    SeriesDivergence,
    SolverFailure,
    SqspinError,
    StencilOutOfPhase,
    TruncationError,
)
from .fock import (
    FockOperator,
    FockStateVector,
    build_operators,
    ladder,
    moments,
    probabilities_numeric,
    qfi_numeric,
    sqs_state,
)
from .metrology import (
    FisherResult,
    PhotonCountDistribution,
    QfiResult,
    SqueezeParams,
    cramer_rao_bound,
    derivative_state_coefficients,
    fisher_information,
    fisher_vs_squeezing,
    photon_count_probabilities,
    qfi_disordered,
    qfi_equilibrium,
    qfi_ness,
    squeezing_parameters,
)
from .model import (
    CRITICAL_TOL,
    EquilibriumSolution,
    NessSolution,
    Phase,
    PhaseDiagramGrid,
    equilibrium_critical_temperature,
    ness_critical_gs,
    ness_unconstrained_moments,
    phase_diagram,
    solve_equilibrium,
    solve_ness,
)
from .numerics import DiffConfig, central_diff, coth, find_root, grow_bracket, laguerre_assoc, log_gamma

__all__ = [
    "CRITICAL_TOL",
    "DiffConfig",
    "DomainError",
    "EquilibriumSolution",
    "FisherResult",
    "FockOperator",
    "FockStateVector",
    "NessSolution",
    "NoSignChange",
    "NonFinite",
    "Phase",
    "PhaseDiagramGrid",
    "PhaseError",
    "PhotonCountDistribution",
    "QfiResult",
    "SeriesDivergence",
    "SolverFailure",
    "SqspinError",
    "SqueezeParams",
    "StencilOutOfPhase",
    "TruncationError",
    "build_operators",
    "central_diff",
    "coth",
    "cramer_rao_bound",
    "derivative_state_coefficients",
    "equilibrium_critical_temperature",
    "find_root",
    "fisher_information",
    "fisher_vs_squeezing",
    "grow_bracket",
    "ladder",
    "laguerre_assoc",
    "log_gamma",
    "moments",
    "ness_critical_gs",
    "ness_unconstrained_moments",
    "phase_diagram",
    "photon_count_probabilities",
    "probabilities_numeric",
    "qfi_disordered",
    "qfi_equilibrium",
    "qfi_ness",
    "qfi_numeric",
    "solve_equilibrium",
    "solve_ness",
    "sqs_state",
    "squeezing_parameters",
    "__version__",
]
