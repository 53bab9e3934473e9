"""Pseudo-spin observable pairs and uncertainty-relation separability certificates.

A pair (H1, H2) is built on two orthonormal vectors v1, v2 as

    H1 = alpha1 |v1><v2| + conj(alpha1) |v2><v1|
    H2 = alpha2 |v1><v2| + conj(alpha2) |v2><v1|

with x = Re(alpha1 conj(alpha2)) and y = Im(alpha1 conj(alpha2)).  The
default coefficients alpha1 = 1/2, alpha2 = -i/2 give y = 1/4, x = 0 and
reproduce (sigma_x/2, sigma_y/2) on the computational qubit basis.  For a
matrix diagonal in span{v1, v2} with diagonal values l1, l2 the certificate
margin reduces to 4 y^2 l1 l2, which is negative exactly when l1 l2 < 0.
hbar = 1 throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    ConditionNotMet,
    DegenerateCoefficients,
    DimensionMismatch,
    NonNegativeEigenvalue,
    NotOrthogonal,
    UnnormalizedState,
)
from .hermitian import (
    Bipartition,
    HermitianOperator,
    expectation,
    partial_transpose,
    projector,
    trace_product,
    validate_hermitian,
)
from .spectral import NptVerdict, Spectrum, classify_npt

VIOLATION_TOL = 1e-10
TRACE_TOL = 1e-9
ORTHOGONALITY_TOL = 1e-10

# Margin of the printed three-qubit inequality divided by the margin of the
# generic certificate evaluated with the same observables.  Calibrated
# numerically once (it is 64**2, the square of the moment normalization);
# asserted against random states in the test suite.
GHZ_MARGIN_SCALE = 4096.0


@dataclass(frozen=True, eq=False)
class PseudoSpinPair:
    """Rank-<=2 observable pair with its construction data."""

    h1: HermitianOperator
    h2: HermitianOperator
    alpha1: complex
    alpha2: complex
    x: float
    y: float
    v1: np.ndarray
    v2: np.ndarray


@dataclass(frozen=True)
class SRReport:
    """Moments and verdict of one Schroedinger-Robertson evaluation."""

    var_h1: float
    var_h2: float
    commutator_mean: float   # |<[H1,H2]>|
    sym_covariance: float    # <dH1 dH2 + dH2 dH1>
    lhs: float
    rhs: float
    margin: float
    violated: bool
    tolerance: float


@dataclass(frozen=True)
class HurWeakReport:
    """Second-moment (weak) Heisenberg form: <H1^2><H2^2> >= |<[H1,H2]>|^2 / 4."""

    second_moment_h1: float
    second_moment_h2: float
    commutator_mean: float
    lhs: float
    rhs: float
    margin: float
    violated: bool
    tolerance: float


@dataclass(frozen=True, eq=False)
class WitnessOperator:
    """Partial transpose of a negative-eigenvalue projector."""

    w: HermitianOperator
    source_eigenvalue: float
    bipartition: Bipartition


@dataclass(frozen=True)
class TwoQubitEquivalence:
    sr_margin: float
    hur_margin: float
    det: float


@dataclass(frozen=True)
class GhzInequalityResult:
    lhs: float
    rhs: float
    margin: float


def build_pseudospin(v1, v2, alpha1: complex = 0.5, alpha2: complex = -0.5j,
                     dims=None) -> PseudoSpinPair:
    """Construct the observable pair on two orthonormal vectors.

    Raises NotOrthogonal when the vectors are not orthonormal to 1e-10 and
    DegenerateCoefficients when Im(alpha1 conj(alpha2)) vanishes (the
    certificate would reduce to 0 >= 0 regardless of the state).
    """
    v1 = np.asarray(v1, dtype=np.complex128).reshape(-1)
    v2 = np.asarray(v2, dtype=np.complex128).reshape(-1)
    if v1.shape != v2.shape:
        raise DimensionMismatch(f"vector lengths {v1.shape[0]} vs {v2.shape[0]}")
    for name, v in (("v1", v1), ("v2", v2)):
        if abs(np.linalg.norm(v) - 1.0) > ORTHOGONALITY_TOL:
            raise NotOrthogonal(f"{name} is not a unit vector")
    overlap = abs(np.vdot(v1, v2))
    if overlap > ORTHOGONALITY_TOL:
        raise NotOrthogonal(f"|<v1|v2>| = {overlap:.3e} exceeds {ORTHOGONALITY_TOL}")
    alpha1 = complex(alpha1)
    alpha2 = complex(alpha2)
    prod = alpha1 * np.conj(alpha2)
    x = float(prod.real)
    y = float(prod.imag)
    if y == 0.0:
        raise DegenerateCoefficients(
            f"Im(alpha1 * conj(alpha2)) = 0 for alpha1={alpha1}, alpha2={alpha2}"
        )
    dims = (len(v1),) if dims is None else tuple(dims)
    dyad = np.outer(v1, v2.conj())
    h1 = validate_hermitian(alpha1 * dyad + np.conj(alpha1) * dyad.conj().T, dims, tol=1e-12)
    h2 = validate_hermitian(alpha2 * dyad + np.conj(alpha2) * dyad.conj().T, dims, tol=1e-12)
    return PseudoSpinPair(h1, h2, alpha1, alpha2, x, y, v1.copy(), v2.copy())


def _require_state_like(rho: HermitianOperator) -> None:
    tr = rho.trace()
    if abs(tr - 1.0) > TRACE_TOL:
        raise UnnormalizedState(f"trace {tr!r} differs from 1 beyond {TRACE_TOL}")


def sr_moments(h1: HermitianOperator, h2: HermitianOperator,
               rho: HermitianOperator, tol: float = VIOLATION_TOL) -> SRReport:
    """Generic SR evaluation for two arbitrary Hermitian observables over rho.

    rho may be any unit-trace Hermitian matrix, in particular a partial
    transpose; no positivity is assumed.
    """
    if h1.dim != rho.dim or h2.dim != rho.dim:
        raise DimensionMismatch(
            f"observable dims {h1.dim}, {h2.dim} vs state dim {rho.dim}"
        )
    _require_state_like(rho)
    r = rho.matrix
    p1 = r @ h1.matrix
    p2 = r @ h2.matrix
    e1 = float(np.trace(p1).real)
    e2 = float(np.trace(p2).real)
    m11 = float(trace_product(p1, h1.matrix).real)
    m22 = float(trace_product(p2, h2.matrix).real)
    m12 = trace_product(p1, h2.matrix)  # <H1 H2>, generally complex
    m21 = trace_product(p2, h1.matrix)
    var1 = m11 - e1 * e1
    var2 = m22 - e2 * e2
    comm_mean = abs(m12 - m21)
    sym_cov = float((m12 + m21).real) - 2.0 * e1 * e2
    lhs = var1 * var2
    rhs = comm_mean ** 2 / 4.0 + sym_cov ** 2 / 4.0
    margin = lhs - rhs
    return SRReport(var1, var2, comm_mean, sym_cov, lhs, rhs, margin,
                    margin < -tol, tol)


def sr_report(pair: PseudoSpinPair, rho: HermitianOperator,
              tol: float = VIOLATION_TOL) -> SRReport:
    """SR certificate for a pseudo-spin pair over rho (pass rho^PT for PT form)."""
    return sr_moments(pair.h1, pair.h2, rho, tol)


def hur_weak_test(pair: PseudoSpinPair, rho: HermitianOperator,
                  tol: float = VIOLATION_TOL) -> HurWeakReport:
    """Weak form with raw second moments in place of variances.

    Its margin never sits below the SR margin on the same inputs, so a weak
    violation implies an SR violation.
    """
    if pair.h1.dim != rho.dim:
        raise DimensionMismatch(f"observable dim {pair.h1.dim} vs state dim {rho.dim}")
    _require_state_like(rho)
    r = rho.matrix
    p1 = r @ pair.h1.matrix
    p2 = r @ pair.h2.matrix
    m11 = float(trace_product(p1, pair.h1.matrix).real)
    m22 = float(trace_product(p2, pair.h2.matrix).real)
    comm_mean = abs(trace_product(p1, pair.h2.matrix) - trace_product(p2, pair.h1.matrix))
    lhs = m11 * m22
    rhs = comm_mean ** 2 / 4.0
    margin = lhs - rhs
    return HurWeakReport(m11, m22, comm_mean, lhs, rhs, margin, margin < -tol, tol)


def pt_of_operator(op: HermitianOperator, bip: Bipartition) -> HermitianOperator:
    """Partial transpose of an observable.

    Same machinery as the state-side map; exposed so a PT-form certificate
    <O>_{rho^PT} can be re-expressed as <O^PT>_rho for laboratory use.
    """
    return partial_transpose(op, bip)


def sr_pt_test(rho: HermitianOperator, bip: Bipartition,
               tol: float = VIOLATION_TOL, normalize: bool = False):
    """Full certification workflow for a state and bipartition.

    Diagonalizes rho^PT, pairs the largest eigenvalue with the most negative
    one (with the smallest when the state is PPT) and evaluates the SR
    certificate over rho^PT.  Returns (NptVerdict, PseudoSpinPair, SRReport);
    the report is violated exactly when the state is NPT.
    """
    spectrum, verdict = classify_npt(rho, bip, tol=tol, normalize=normalize)
    pair = build_pseudospin(
        spectrum.vector(verdict.chosen_positive_index),
        spectrum.vector(verdict.chosen_negative_index),
        dims=rho.dims,
    )
    rho_pt = partial_transpose(rho, bip)
    if normalize:
        tr = rho_pt.trace()
        rho_pt = validate_hermitian(rho_pt.matrix / tr, rho_pt.dims, rho_pt.tolerance)
    report = sr_moments(pair.h1, pair.h2, rho_pt, tol)
    return verdict, pair, report


def witness_from_eigvec(v2, lambda2: float, bip: Bipartition,
                        dims) -> WitnessOperator:
    """Entanglement witness W = (|v2><v2|)^PT from a negative PT eigenvalue.

    Tr{W rho} equals lambda2 for the state whose partial transpose produced
    (lambda2, v2), and is nonnegative on every separable state.
    """
    if lambda2 >= 0.0:
        raise NonNegativeEigenvalue(f"source eigenvalue {lambda2} is not negative")
    proj = projector(v2, dims)
    return WitnessOperator(partial_transpose(proj, bip), float(lambda2), bip)


def witness_value(witness: WitnessOperator, rho: HermitianOperator) -> float:
    return expectation(witness.w, rho)


def variance_positivity(rho_pt: HermitianOperator, spectrum: Spectrum,
                        tol: float = VIOLATION_TOL):
    """Negative-variance observables from a doubly negative PT spectrum.

    When rho_pt has at least two eigenvalues below -tol, an observable pair
    built on the two most negative eigenvectors has second moment
    |alpha|^2 (l_a + l_b) < 0, hence a negative variance.  Returns the
    flagged (observable, variance) entries, empty otherwise.
    """
    w = spectrum.eigenvalues
    negatives = np.where(w < -tol)[0]
    if len(negatives) < 2:
        return []
    # eigenvalues are sorted descending, so the last two are the most negative
    i_a, i_b = int(negatives[-1]), int(negatives[-2])
    pair = build_pseudospin(spectrum.vector(i_b), spectrum.vector(i_a), dims=rho_pt.dims)
    flags = []
    for h in (pair.h1, pair.h2):
        e = expectation(h, rho_pt)
        m2 = float(trace_product(rho_pt.matrix @ h.matrix, h.matrix).real)
        var = m2 - e * e
        if var < 0.0:
            flags.append((h, var))
    return flags


def orthogonal_pair_construct(rho_pt: HermitianOperator, v1, v2,
                              alpha1: complex = 0.5, alpha2: complex = -0.5j,
                              tol: float = VIOLATION_TOL):
    """Certificate from orthogonal vectors that need not be eigenvectors.

    Requires <v1|rho_pt|v1> > 0 and <v2|rho_pt|v2> < 0.  The report is
    evaluated but violation is not guaranteed for such pairs.
    """
    v1 = np.asarray(v1, dtype=np.complex128).reshape(-1)
    v2 = np.asarray(v2, dtype=np.complex128).reshape(-1)
    d1 = float(np.vdot(v1, rho_pt.matrix @ v1).real)
    d2 = float(np.vdot(v2, rho_pt.matrix @ v2).real)
    if not (d1 > 0.0 and d2 < 0.0):
        raise ConditionNotMet(
            f"diagonal values <v1|rho|v1> = {d1:.3e}, <v2|rho|v2> = {d2:.3e} "
            "must be strictly positive / negative"
        )
    pair = build_pseudospin(v1, v2, alpha1, alpha2, dims=rho_pt.dims)
    return pair, sr_moments(pair.h1, pair.h2, rho_pt, tol)


def two_qubit_equivalence(rho: HermitianOperator,
                          tol: float = VIOLATION_TOL) -> TwoQubitEquivalence:
    """SR certificate with (sigma_x/2, sigma_y/2) against the 2x2 determinant.

    For a unit-trace Hermitian [[a, c], [conj(c), b]] the SR margin equals
    (ab - |c|^2)/4 and the HUR-only margin (covariance term dropped) equals
    (ab - |c|^2 + 4 cr^2 ci^2)/4.
    """
    if rho.dims != (2,):
        raise DimensionMismatch(f"expected a single-qubit operator, got dims {rho.dims}")
    _require_state_like(rho)
    e0 = np.array([1.0, 0.0], dtype=np.complex128)
    e1 = np.array([0.0, 1.0], dtype=np.complex128)
    pair = build_pseudospin(e0, e1, dims=(2,))
    rep = sr_moments(pair.h1, pair.h2, rho, tol)
    hur_margin = rep.lhs - rep.commutator_mean ** 2 / 4.0
    a = float(rho.matrix[0, 0].real)
    b = float(rho.matrix[1, 1].real)
    det = a * b - abs(rho.matrix[0, 1]) ** 2
    return TwoQubitEquivalence(rep.margin, hur_margin, float(det))


# ---------------------------------------------------------------------------
# Three-qubit special case (bipartition {first two | third}).
# ---------------------------------------------------------------------------

_PAULI = {
    "i": np.eye(2, dtype=np.complex128),
    "x": np.array([[0, 1], [1, 0]], dtype=np.complex128),
    "y": np.array([[0, -1j], [1j, 0]], dtype=np.complex128),
    "z": np.array([[1, 0], [0, -1]], dtype=np.complex128),
}


def pauli_string_expectation(rho: HermitianOperator, letters: str) -> float:
    """<P1 x P2 x ...> for a Pauli string such as "zzi" on a qubit register."""
    if rho.dims != (2,) * len(letters):
        raise DimensionMismatch(
            f"state dims {rho.dims} do not match Pauli string {letters!r}"
        )
    op = _PAULI[letters[0]]
    for ch in letters[1:]:
        op = np.kron(op, _PAULI[ch])
    return float(trace_product(op, rho.matrix).real)


def ghz_correlators(rho: HermitianOperator):
    """The four Pauli correlator combinations entering the three-qubit test."""
    e = lambda s: pauli_string_expectation(rho, s)
    a_z = e("iii") + e("zzi") - e("ziz") - e("izz")
    b_z = e("zii") + e("izi") - e("iiz") - e("zzz")
    c_xy = e("xxy") + e("xyx") + e("yxx") - e("yyy")
    d_xy = e("xxx") - e("xyy") - e("yxy") - e("yyx")
    return a_z, b_z, c_xy, d_xy


def ghz_inequality(a_z: float, b_z: float, c_xy: float,
                   d_xy: float) -> GhzInequalityResult:
    """Separability test (4A - B^2)(4A - C^2) >= 16 D^2 + B^2 C^2.

    The margin equals GHZ_MARGIN_SCALE times the generic SR margin obtained
    with the explicit observable pair on (|001> +/- |110>)/sqrt(2).
    """
    lhs = (4.0 * a_z - b_z ** 2) * (4.0 * a_z - c_xy ** 2)
    rhs = 16.0 * d_xy ** 2 + b_z ** 2 * c_xy ** 2
    return GhzInequalityResult(lhs, rhs, lhs - rhs)


def ghz_pair(dims=(2, 2, 2)) -> PseudoSpinPair:
    """The explicit observable pair built on (|001> +/- |110>)/sqrt(2)."""
    v = np.zeros(8, dtype=np.complex128)
    w = np.zeros(8, dtype=np.complex128)
    v[0b001] = 1.0 / np.sqrt(2.0)
    v[0b110] = 1.0 / np.sqrt(2.0)
    w[0b001] = 1.0 / np.sqrt(2.0)
    w[0b110] = -1.0 / np.sqrt(2.0)
    return build_pseudospin(v, w, dims=dims)


# ---------------------------------------------------------------------------
# JSON certificate payload (schema shared by the CLI).
# ---------------------------------------------------------------------------

def certificate_payload(rho: HermitianOperator, bip: Bipartition,
                        tol: float = VIOLATION_TOL) -> dict:
    """Full certificate for one state and bipartition as a JSON-ready dict."""
    from .hermitian import matrix_payload  # local import to keep module DAG flat

    spectrum, verdict = classify_npt(rho, bip, tol=tol)
    pair = build_pseudospin(
        spectrum.vector(verdict.chosen_positive_index),
        spectrum.vector(verdict.chosen_negative_index),
        dims=rho.dims,
    )
    rho_pt = partial_transpose(rho, bip)
    rep = sr_moments(pair.h1, pair.h2, rho_pt, tol)
    weak = hur_weak_test(pair, rho_pt, tol=tol)
    witness_entry = None
    if verdict.is_npt:
        lam2 = float(spectrum.eigenvalues[verdict.chosen_negative_index])
        wit = witness_from_eigvec(
            spectrum.vector(verdict.chosen_negative_index), lam2, bip, rho.dims
        )
        witness_entry = {
            "matrix": matrix_payload(wit.w),
            "trace_value": witness_value(wit, rho),
        }
    lam1 = float(spectrum.eigenvalues[verdict.chosen_positive_index])
    lam2 = float(spectrum.eigenvalues[verdict.chosen_negative_index])
    return {
        "verdict": "violated" if rep.violated else "satisfied",
        "is_npt": verdict.is_npt,
        "pt_eigenvalues": [float(x) for x in spectrum.eigenvalues],
        "chosen_pair": {"lambda1": lam1, "lambda2": lam2},
        "observables": {
            "H1": matrix_payload(pair.h1),
            "H2": matrix_payload(pair.h2),
        },
        "sr": {"lhs": rep.lhs, "rhs": rep.rhs, "margin": rep.margin},
        "hur_weak": {
            "lhs": weak.lhs,
            "rhs": weak.rhs,
            "margin": weak.margin,
            "violated": weak.violated,
        },
        "witness": witness_entry,
    }
