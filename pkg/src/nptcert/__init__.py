"""Uncertainty-relation certificates of bipartite entanglement for NPT states."""

from .errors import (
    CertificationError,
    ConditionNotMet,
    ConvergenceFailure,
    DegenerateCoefficients,
    DimensionMismatch,
    InvalidBipartition,
    NonNegativeEigenvalue,
    NotHermitian,
    NotOrthogonal,
    ParameterOutOfRange,
    TruncationUnreliable,
    UnnormalizedState,
)
from .hermitian import (
    Bipartition,
    HermitianOperator,
    anticommutator,
    commutator,
    expectation,
    load_operator,
    matrix_payload,
    operator_from_payload,
    partial_transpose,
    projector,
    save_operator,
    tensor_product,
    validate_hermitian,
)
from .spectral import NptVerdict, Spectrum, classify_npt, eig_hermitian
from .certificates import (
    PseudoSpinPair,
    SRReport,
    WitnessOperator,
    build_pseudospin,
    ghz_correlators,
    ghz_inequality,
    hur_weak_test,
    orthogonal_pair_construct,
    pt_of_operator,
    sr_pt_test,
    sr_report,
    two_qubit_equivalence,
    variance_positivity,
    witness_from_eigvec,
    witness_value,
)
from .states import (
    make_bell,
    make_ghz_mixed,
    make_single_photon_entangled,
    make_werner,
    random_density,
    random_separable,
)

__version__ = "0.1.0"
