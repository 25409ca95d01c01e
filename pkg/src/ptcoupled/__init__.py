"""Spectral analysis of quadratic Hamiltonians and the PT-symmetric coupled oscillator pair."""

from .adjoint_spectrum import (
    AdjointMatrix,
    GroundStateParams,
    LadderOperator,
    ModeFrequencies,
    PhaseRegion,
    adjoint_matrix,
    closed_form_frequencies,
    eigenfrequencies,
    energy,
    ground_state_params,
    ladder_coefficients,
    mode_frequencies,
    phase_classify,
    rescale,
)
from .errors import (
    CapacityError,
    DegenerateModeError,
    InvalidArgumentError,
    NumericalFailureError,
    PTCoupledError,
    SingularParametersError,
)
from .operator_core import (
    CanonicalBasis,
    PaperParams,
    QuadraticHamiltonian,
    from_monomials,
    pt_paper_hamiltonian,
    symplectic_form,
)

__version__ = "0.1.0"
