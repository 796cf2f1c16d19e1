"""Generalized quantum measurement toolkit.

POVM/PVM measures with the generalized Born rule, instrument-model synthesis
and single-measure state tomography; nonideal-measurement relations with the
entropy-based complementarity bound on joint measurements; a neutron
interferometry model and a generalized two-photon correlation experiment; and
an exact joint-distribution feasibility decision for four bivariate
dichotomic distributions, cross-checked against the CHSH characterization.
"""

from .aspect import (
    CHSH_SIGN_PATTERNS,
    STANDARD_GAMMA_PAIRS,
    AspectConfig,
    ChshReport,
    CompositeResult,
    arm_povm,
    bell_state,
    chsh_value,
    correlator,
    joint_probabilities,
    polarization_pvm,
    quadrivariate_povm,
    standard_composite,
)
from .errors import (
    DimensionMismatchError,
    IncompleteMeasureError,
    InfeasibleProbabilitiesError,
    InternalConsistencyError,
    NoSignalingError,
    PovmkitError,
    UnsupportedMeasureError,
    ValidationError,
)
from .feasibility import (
    JointDecision,
    MarginalSet,
    NoSignalingReport,
    check_no_signaling,
    joint_exists,
    phase1_simplex,
)
from .measures import (
    InstrumentModel,
    PovmMeasure,
    PvmMeasure,
    born_probabilities,
    is_complete,
    povm_from_instrument,
    povm_violations,
    pvm_violations,
    reconstruct_state,
    tetrahedral_qubit_povm,
)
from .nonideality import (
    DECOMPOSITION_TOL,
    MartensReport,
    NonidealityMatrix,
    apply_nonideality,
    check_martens,
    martens_bound,
    nonideality_entropy,
    solve_nonideality,
)
from .operators import (
    DEFAULT_TOL,
    State,
    UncertaintyComparison,
    as_operator,
    commutator_bound,
    is_hermitian,
    is_positive,
    is_projector,
    is_unitary,
    partial_trace,
    tensor,
    trace_distance,
)
from .srt import (
    SrtConfig,
    TradeoffPoint,
    interference_nonideality_entropy,
    interference_nonideality_matrix,
    interference_pvm,
    path_nonideality_entropy,
    path_nonideality_matrix,
    path_pvm,
    srt_bivariate,
    srt_povm,
    tradeoff_sweep,
)
from .tables import ProbabilityTable

__version__ = "0.1.0"

__all__ = [
    "AspectConfig",
    "CHSH_SIGN_PATTERNS",
    "ChshReport",
    "CompositeResult",
    "DECOMPOSITION_TOL",
    "DEFAULT_TOL",
    "DimensionMismatchError",
    "IncompleteMeasureError",
    "InfeasibleProbabilitiesError",
    "InstrumentModel",
    "InternalConsistencyError",
    "JointDecision",
    "MarginalSet",
    "MartensReport",
    "NoSignalingError",
    "NoSignalingReport",
    "NonidealityMatrix",
    "PovmMeasure",
    "PovmkitError",
    "ProbabilityTable",
    "PvmMeasure",
    "STANDARD_GAMMA_PAIRS",
    "SrtConfig",
    "State",
    "TradeoffPoint",
    "UncertaintyComparison",
    "UnsupportedMeasureError",
    "ValidationError",
    "apply_nonideality",
    "arm_povm",
    "as_operator",
    "bell_state",
    "born_probabilities",
    "check_martens",
    "check_no_signaling",
    "chsh_value",
    "commutator_bound",
    "correlator",
    "interference_nonideality_entropy",
    "interference_nonideality_matrix",
    "interference_pvm",
    "is_complete",
    "is_hermitian",
    "is_positive",
    "is_projector",
    "is_unitary",
    "joint_exists",
    "joint_probabilities",
    "martens_bound",
    "nonideality_entropy",
    "partial_trace",
    "path_nonideality_entropy",
    "path_nonideality_matrix",
    "path_pvm",
    "phase1_simplex",
    "polarization_pvm",
    "povm_from_instrument",
    "povm_violations",
    "pvm_violations",
    "quadrivariate_povm",
    "reconstruct_state",
    "solve_nonideality",
    "srt_bivariate",
    "srt_povm",
    "standard_composite",
    "tensor",
    "tetrahedral_qubit_povm",
    "trace_distance",
    "tradeoff_sweep",
]
