"""Truncated-Fock-space layer: bosonic operators, moment inequalities,
beam-splitter dynamics and nonclassicality witnesses.

Conventions.  Quadrature-type observables are unnormalized,

    X^(m) = a^dag^m + a^m,      Y^(m) = -i (a^dag^m - a^m),

so for m = 1 they are sqrt(2) times the standard quadratures.  The
squeezed-vacuum factory is phased so that <a^2> = e^{i phi} sinh(r) cosh(r):
at phi = 0 the Y (momentum) quadrature is squeezed, which is the orientation
the fixed beam-splitter generator theta * (a1^dag a2 - a1 a2^dag) maps onto
the (X1 + X2, Y1 - Y2) observable pair.  The two-mode squeezed factory uses
Fock amplitudes proportional to (-tanh r)^k, which squeezes that same pair.

Truncation.  An operator of raising order j evaluated on a state is exact
when the state carries no weight on the top j levels of either mode; the
reliability guard bounds the total population at levels >= cutoff - order
and refuses (by default) when it exceeds 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import scipy.linalg

from .certificates import SRReport, sr_moments
from .errors import DimensionMismatch, ParameterOutOfRange, TruncationUnreliable
from .hermitian import Bipartition, HermitianOperator, partial_transpose, validate_hermitian

DEFAULT_CUTOFF = 30
TAIL_THRESHOLD = 1e-8
# Factories guard the first-order workflow (moments reach 2 levels above the
# state support at m = 1); each operation re-checks at its own depth.
FACTORY_GUARD_ORDER = 2
VIOLATION_TOL = 1e-10


@dataclass(frozen=True)
class FockSpace:
    """One or two bosonic modes truncated at number-state ``cutoff``."""

    modes: int
    cutoff: int

    def __post_init__(self):
        if self.modes not in (1, 2):
            raise ParameterOutOfRange(f"modes = {self.modes} must be 1 or 2")
        if self.cutoff < 2:
            raise ParameterOutOfRange(f"cutoff = {self.cutoff} must be >= 2")

    @property
    def dim_per_mode(self) -> int:
        return self.cutoff + 1

    @property
    def dims(self) -> tuple:
        return (self.dim_per_mode,) * self.modes

    @property
    def total_dim(self) -> int:
        return self.dim_per_mode ** self.modes


@dataclass(frozen=True)
class TruncationDiagnostics:
    tail_weight: float
    reliable: bool


def space_of(rho: HermitianOperator) -> FockSpace:
    dims = rho.dims
    if len(set(dims)) != 1:
        raise DimensionMismatch(f"unequal mode dimensions {dims}")
    return FockSpace(modes=len(dims), cutoff=dims[0] - 1)


def destroy(cutoff: int) -> np.ndarray:
    """Single-mode annihilation matrix: <k-1| a |k> = sqrt(k)."""
    return np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=np.float64)), k=1).astype(np.complex128)


def ladder_ops(space: FockSpace):
    """Per-mode (a, a^dag) embedded in the full space."""
    a = destroy(space.cutoff)
    ad = a.conj().T
    if space.modes == 1:
        return [(a, ad)]
    eye = np.eye(space.dim_per_mode, dtype=np.complex128)
    return [(np.kron(a, eye), np.kron(ad, eye)),
            (np.kron(eye, a), np.kron(eye, ad))]


def mode_populations(rho: HermitianOperator) -> np.ndarray:
    """Per-mode number-state populations, shape (modes, cutoff+1)."""
    space = space_of(rho)
    diag = np.real(np.diagonal(rho.matrix))
    if space.modes == 1:
        return diag.reshape(1, -1)
    d = space.dim_per_mode
    grid = diag.reshape(d, d)
    return np.stack([grid.sum(axis=1), grid.sum(axis=0)])


def truncation_diagnostics(rho: HermitianOperator,
                           order: int = FACTORY_GUARD_ORDER) -> TruncationDiagnostics:
    """Population at levels >= cutoff - order, summed over modes."""
    space = space_of(rho)
    pops = mode_populations(rho)
    start = max(space.cutoff - order, 0)
    tail = float(pops[:, start:].sum())
    return TruncationDiagnostics(tail_weight=tail, reliable=tail < TAIL_THRESHOLD)


def _guard(rho: HermitianOperator, order: int, allow_unreliable: bool) -> TruncationDiagnostics:
    diag = truncation_diagnostics(rho, order)
    if not diag.reliable and not allow_unreliable:
        raise TruncationUnreliable(
            f"tail weight {diag.tail_weight:.3e} at order {order} exceeds {TAIL_THRESHOLD}"
        )
    return diag


# ---------------------------------------------------------------------------
# State factories
# ---------------------------------------------------------------------------

def _finalize(matrix, space: FockSpace, order: int,
              allow_unreliable: bool) -> HermitianOperator:
    tr = float(np.trace(matrix).real)
    rho = validate_hermitian(np.asarray(matrix) / tr, space.dims, tol=1e-12)
    _guard(rho, order, allow_unreliable)
    return rho


def vacuum(space: FockSpace) -> HermitianOperator:
    v = np.zeros(space.total_dim, dtype=np.complex128)
    v[0] = 1.0
    return validate_hermitian(np.outer(v, v.conj()), space.dims, tol=1e-12)


def fock(n: int, space: FockSpace, allow_unreliable: bool = False) -> HermitianOperator:
    if space.modes != 1:
        raise ParameterOutOfRange("fock factory builds single-mode states")
    if not 0 <= n <= space.cutoff:
        raise ParameterOutOfRange(f"n = {n} outside 0..{space.cutoff}")
    v = np.zeros(space.dim_per_mode, dtype=np.complex128)
    v[n] = 1.0
    return _finalize(np.outer(v, v.conj()), space, FACTORY_GUARD_ORDER, allow_unreliable)


def coherent(alpha: complex, space: FockSpace,
             allow_unreliable: bool = False) -> HermitianOperator:
    """|alpha> with amplitudes alpha^k / sqrt(k!), renormalized after truncation."""
    if space.modes != 1:
        raise ParameterOutOfRange("coherent factory builds single-mode states")
    if not np.isfinite(alpha):
        raise ParameterOutOfRange(f"alpha = {alpha!r} is not finite")
    amps = np.zeros(space.dim_per_mode, dtype=np.complex128)
    amps[0] = 1.0
    for i in range(1, space.dim_per_mode):
        amps[i] = amps[i - 1] * alpha / math.sqrt(i)
    amps /= np.linalg.norm(amps)
    return _finalize(np.outer(amps, amps.conj()), space, FACTORY_GUARD_ORDER, allow_unreliable)


def squeezed_vacuum(r: float, phi: float, space: FockSpace,
                    allow_unreliable: bool = False) -> HermitianOperator:
    """Squeezed vacuum with <a^2> = e^{i phi} sinh(r) cosh(r).

    Even-level amplitudes follow the recurrence
    c_{2k+2} = c_{2k} e^{i phi} tanh(r) sqrt((2k+1)(2k+2)) / (2(k+1)).
    """
    if space.modes != 1:
        raise ParameterOutOfRange("squeezed_vacuum factory builds single-mode states")
    if not (np.isfinite(r) and np.isfinite(phi)):
        raise ParameterOutOfRange("squeezing parameters must be finite")
    z = np.exp(1j * phi) * np.tanh(r)
    amps = np.zeros(space.dim_per_mode, dtype=np.complex128)
    amps[0] = 1.0
    k = 0
    while 2 * k + 2 <= space.cutoff:
        amps[2 * k + 2] = amps[2 * k] * z * math.sqrt((2 * k + 1) * (2 * k + 2)) / (2 * (k + 1))
        k += 1
    amps /= np.linalg.norm(amps)
    return _finalize(np.outer(amps, amps.conj()), space, FACTORY_GUARD_ORDER, allow_unreliable)


def thermal(nbar: float, space: FockSpace,
            allow_unreliable: bool = False) -> HermitianOperator:
    """Thermal state with mean occupation nbar (diagonal geometric weights)."""
    if space.modes != 1:
        raise ParameterOutOfRange("thermal factory builds single-mode states")
    if not (np.isfinite(nbar) and nbar >= 0):
        raise ParameterOutOfRange(f"nbar = {nbar!r} must be finite and >= 0")
    k = np.arange(space.dim_per_mode, dtype=np.float64)
    weights = (nbar / (1.0 + nbar)) ** k / (1.0 + nbar) if nbar > 0 else (k == 0).astype(float)
    return _finalize(np.diag(weights.astype(np.complex128)), space,
                     FACTORY_GUARD_ORDER, allow_unreliable)


def two_mode_squeezed(r: float, space: FockSpace,
                      allow_unreliable: bool = False) -> HermitianOperator:
    """Two-mode squeezed vacuum, amplitudes c_k = (-tanh r)^k / cosh r on |k,k>."""
    if space.modes != 2:
        raise ParameterOutOfRange("two_mode_squeezed needs a two-mode space")
    if not np.isfinite(r):
        raise ParameterOutOfRange(f"r = {r!r} is not finite")
    d = space.dim_per_mode
    coeff = (-np.tanh(r)) ** np.arange(d)
    coeff = coeff / np.linalg.norm(coeff)
    v = np.zeros(space.total_dim, dtype=np.complex128)
    v[np.arange(d) * d + np.arange(d)] = coeff
    return _finalize(np.outer(v, v.conj()), space, FACTORY_GUARD_ORDER, allow_unreliable)


def single_photon_entangled(space: FockSpace) -> HermitianOperator:
    """(|01> + |10>)/sqrt(2) embedded in the truncated two-mode space."""
    if space.modes != 2:
        raise ParameterOutOfRange("single_photon_entangled needs a two-mode space")
    d = space.dim_per_mode
    v = np.zeros(space.total_dim, dtype=np.complex128)
    v[1] = 1.0 / np.sqrt(2.0)      # |0,1>
    v[d] = 1.0 / np.sqrt(2.0)      # |1,0>
    return validate_hermitian(np.outer(v, v.conj()), space.dims, tol=1e-12)


def with_vacuum_ancilla(rho: HermitianOperator) -> HermitianOperator:
    """Extend a single-mode state to two modes with vacuum in the second."""
    space = space_of(rho)
    if space.modes != 1:
        raise ParameterOutOfRange("state already has two modes")
    vac = np.zeros((space.dim_per_mode, space.dim_per_mode), dtype=np.complex128)
    vac[0, 0] = 1.0
    return validate_hermitian(np.kron(rho.matrix, vac),
                              (space.dim_per_mode, space.dim_per_mode), tol=1e-12)


# ---------------------------------------------------------------------------
# Beam splitter
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class BeamSplitterResult:
    state: HermitianOperator
    unitarity_defect: float


@lru_cache(maxsize=8)
def _beam_splitter_unitary(cutoff: int, theta: float):
    space = FockSpace(2, cutoff)
    (a1, ad1), (a2, ad2) = ladder_ops(space)
    generator = theta * (ad1 @ a2 - a1 @ ad2)   # anti-Hermitian by construction
    u = scipy.linalg.expm(generator)
    defect = float(np.max(np.abs(u.conj().T @ u - np.eye(space.total_dim))))
    return u, defect


def beam_splitter(rho: HermitianOperator, theta: float,
                  allow_unreliable: bool = False) -> BeamSplitterResult:
    """U rho U^dag with U = exp[theta (a1^dag a2 - a1 a2^dag)].

    theta = pi/4 is the 50:50 splitter.  The total photon number is
    conserved, so the truncation tail is not spread by the map.
    """
    space = space_of(rho)
    if space.modes != 2:
        raise ParameterOutOfRange("beam splitter acts on two-mode states")
    _guard(rho, FACTORY_GUARD_ORDER, allow_unreliable)
    u, defect = _beam_splitter_unitary(space.cutoff, float(theta))
    out = u @ rho.matrix @ u.conj().T
    return BeamSplitterResult(validate_hermitian(out, space.dims), defect)


# ---------------------------------------------------------------------------
# Moment evaluation
# ---------------------------------------------------------------------------

class _MomentEngine:
    """Expectations of kron-factored operators without forming full products.

    For a two-mode state, Tr{rho (M1 x M2)} is contracted against the
    reshaped density matrix in O(d^4) time and no d^2 x d^2 temporaries.
    """

    def __init__(self, rho: HermitianOperator):
        self.space = space_of(rho)
        d = self.space.dim_per_mode
        if self.space.modes == 2:
            self._r4 = rho.matrix.reshape(d, d, d, d)
        self._r2 = rho.matrix

    def kron_moment(self, m1: np.ndarray, m2: np.ndarray) -> complex:
        return complex(np.einsum("ijkl,ki,lj->", self._r4, m1, m2, optimize=True))

    def moment(self, m: np.ndarray) -> complex:
        return complex(np.einsum("ij,ji->", self._r2, m))


@lru_cache(maxsize=16)
def _mode_factors(cutoff: int, m: int):
    """Single-mode building blocks of order m at a given cutoff."""
    a = destroy(cutoff)
    am = np.linalg.matrix_power(a, m)
    adm = am.conj().T
    x = adm + am
    y = -1j * (adm - am)
    c = am @ adm - adm @ am
    return {"a": am, "ad": adm, "x": x, "y": y, "c": c,
            "xx": x @ x, "yy": y @ y, "xy_anti": x @ y + y @ x,
            "aa": am @ am, "adad": adm @ adm,
            "a_ad": am @ adm, "ad_a": adm @ am}


@dataclass(frozen=True, eq=False)
class CvObservableSet:
    """Full-space observables of orders (m, n); members built on demand."""

    space: FockSpace
    m: int
    n: int

    def _f1(self):
        return _mode_factors(self.space.cutoff, self.m)

    def _f2(self):
        return _mode_factors(self.space.cutoff, self.n)

    def _eye(self):
        return np.eye(self.space.dim_per_mode, dtype=np.complex128)

    def _op(self, matrix) -> HermitianOperator:
        return validate_hermitian(matrix, self.space.dims, tol=1e-9)

    @property
    def x1(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["x"], self._eye()))

    @property
    def y1(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["y"], self._eye()))

    @property
    def x2(self) -> HermitianOperator:
        return self._op(np.kron(self._eye(), self._f2()["x"]))

    @property
    def y2(self) -> HermitianOperator:
        return self._op(np.kron(self._eye(), self._f2()["y"]))

    @property
    def h1(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["x"], self._eye())
                        + np.kron(self._eye(), self._f2()["x"]))

    @property
    def h2_sum(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["y"], self._eye())
                        + np.kron(self._eye(), self._f2()["y"]))

    @property
    def h2_tilde(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["y"], self._eye())
                        - np.kron(self._eye(), self._f2()["y"]))

    @property
    def c1(self) -> HermitianOperator:
        return self._op(np.kron(self._f1()["c"], self._eye()))

    @property
    def c2(self) -> HermitianOperator:
        return self._op(np.kron(self._eye(), self._f2()["c"]))

    @property
    def x_mn(self) -> HermitianOperator:
        b_dag = np.kron(self._f1()["ad"], self._f2()["a"])
        return self._op(b_dag + b_dag.conj().T)

    @property
    def y_mn(self) -> HermitianOperator:
        b_dag = np.kron(self._f1()["ad"], self._f2()["a"])
        return self._op(-1j * (b_dag - b_dag.conj().T))

    @property
    def pair_h1(self) -> HermitianOperator:
        a_dag = np.kron(self._f1()["ad"], self._f2()["ad"])
        return self._op(a_dag + a_dag.conj().T)

    @property
    def pair_h2(self) -> HermitianOperator:
        a_dag = np.kron(self._f1()["ad"], self._f2()["ad"])
        return self._op(-1j * (a_dag - a_dag.conj().T))

    @property
    def comm_pair(self) -> HermitianOperator:
        """[a1^m a2^n, a1^dag^m a2^dag^n] as a (diagonal) full-space matrix."""
        f1, f2 = self._f1(), self._f2()
        comm = np.kron(f1["a_ad"], f2["a_ad"]) - np.kron(f1["ad_a"], f2["ad_a"])
        return self._op(comm)


def observable_set(space: FockSpace, m: int, n: int) -> CvObservableSet:
    if space.modes != 2:
        raise ParameterOutOfRange("observable sets are two-mode objects")
    if m < 1 or n < 1:
        raise ParameterOutOfRange(f"orders m = {m}, n = {n} must be >= 1")
    return CvObservableSet(space, m, n)


@dataclass(frozen=True)
class CvInequalityReport:
    inequality: str
    m: int
    n: int
    lhs: float
    rhs: float
    margin: float
    hur_variant_margin: float
    sum_hur_margin: float
    commutator_term: float
    covariance_term: float
    violated: bool
    tolerance: float
    diagnostics: TruncationDiagnostics


def ineq10(rho: HermitianOperator, m: int, n: int, tol: float = VIOLATION_TOL,
           allow_unreliable: bool = False) -> CvInequalityReport:
    """Quadrature-type separability test of orders (m, n), moments over rho.

    Var(X1+X2) Var(Y1-Y2) >= <C1+C2>^2 + cov_S^2 with C_i = [a_i^m, a_i^dag^m]
    and cov_S the symmetric-mean covariance of the two observables.  The HUR
    variant drops the covariance term; the sum form replaces the product of
    variances by their sum against 2|<C1+C2>|.
    """
    space = space_of(rho)
    if space.modes != 2:
        raise ParameterOutOfRange("inequality 10 needs a two-mode state")
    diag = _guard(rho, 2 * max(m, n), allow_unreliable)
    f1 = _mode_factors(space.cutoff, m)
    f2 = _mode_factors(space.cutoff, n)
    eye = np.eye(space.dim_per_mode, dtype=np.complex128)
    eng = _MomentEngine(rho)
    km = eng.kron_moment

    e1 = (km(f1["x"], eye) + km(eye, f2["x"])).real
    e2 = (km(f1["y"], eye) - km(eye, f2["y"])).real
    m11 = (km(f1["xx"], eye) + km(eye, f2["xx"]) + 2.0 * km(f1["x"], f2["x"])).real
    m22 = (km(f1["yy"], eye) + km(eye, f2["yy"]) - 2.0 * km(f1["y"], f2["y"])).real
    anti = (km(f1["xy_anti"], eye) - km(eye, f2["xy_anti"])
            - 2.0 * km(f1["x"], f2["y"]) + 2.0 * km(f1["y"], f2["x"])).real
    c_mean = (km(f1["c"], eye) + km(eye, f2["c"])).real

    var1 = m11 - e1 * e1
    var2 = m22 - e2 * e2
    cov_half = (anti - 2.0 * e1 * e2) / 2.0
    lhs = var1 * var2
    comm_term = c_mean ** 2
    cov_term = cov_half ** 2
    rhs = comm_term + cov_term
    margin = lhs - rhs
    hur_margin = lhs - comm_term
    sum_margin = var1 + var2 - 2.0 * abs(c_mean)
    return CvInequalityReport("10", m, n, lhs, rhs, margin, hur_margin, sum_margin,
                              comm_term, cov_term, margin < -tol, tol, diag)


def ineq11(rho: HermitianOperator, m: int, n: int, tol: float = VIOLATION_TOL,
           allow_unreliable: bool = False) -> CvInequalityReport:
    """Cross-mode separability test of orders (m, n), moments over rho.

    (Var X_mn + <C1 C2>)(Var Y_mn + <C1 C2>) >= <[a1^m a2^n, h.c.]>^2 + cov_S^2
    with X_mn = a1^dag^m a2^n + h.c. and Y_mn = -i(a1^dag^m a2^n - h.c.).
    """
    space = space_of(rho)
    if space.modes != 2:
        raise ParameterOutOfRange("inequality 11 needs a two-mode state")
    diag = _guard(rho, 2 * max(m, n), allow_unreliable)
    f1 = _mode_factors(space.cutoff, m)
    f2 = _mode_factors(space.cutoff, n)
    eng = _MomentEngine(rho)
    km = eng.kron_moment

    b_dag_mean = km(f1["ad"], f2["a"])          # <a1^dag^m a2^n>
    e_x = 2.0 * b_dag_mean.real
    e_y = 2.0 * b_dag_mean.imag
    bb = km(f1["aa"], f2["adad"])               # <B^2>, B = a1^m a2^dag^n
    b_bdag = km(f1["a_ad"], f2["ad_a"]).real    # <B B^dag>
    bdag_b = km(f1["ad_a"], f2["a_ad"]).real    # <B^dag B>
    m_xx = 2.0 * bb.real + b_bdag + bdag_b
    m_yy = -2.0 * bb.real + b_bdag + bdag_b
    anti = -4.0 * bb.imag                        # <{X_mn, Y_mn}> = 2i<B^2 - B^dag^2>
    c_prod = km(f1["c"], f2["c"]).real
    comm_aa = (km(f1["a_ad"], f2["a_ad"]) - km(f1["ad_a"], f2["ad_a"])).real

    var_x = m_xx - e_x * e_x
    var_y = m_yy - e_y * e_y
    cov_half = (anti - 2.0 * e_x * e_y) / 2.0
    lhs = (var_x + c_prod) * (var_y + c_prod)
    comm_term = comm_aa ** 2
    cov_term = cov_half ** 2
    rhs = comm_term + cov_term
    margin = lhs - rhs
    hur_margin = lhs - comm_term
    sum_margin = var_x + var_y + 2.0 * c_prod - 2.0 * abs(comm_aa)
    return CvInequalityReport("11", m, n, lhs, rhs, margin, hur_margin, sum_margin,
                              comm_term, cov_term, margin < -tol, tol, diag)


def _mode_split() -> Bipartition:
    return Bipartition(frozenset({0}), 2)


def fock_partial_transpose(rho: HermitianOperator) -> HermitianOperator:
    """Explicit partial transpose on the second mode in the Fock basis."""
    return partial_transpose(rho, _mode_split())


@dataclass(frozen=True)
class MomentRelationCheck:
    lhs: complex
    rhs: complex
    defect: float


def pt_moment_relation_check(rho: HermitianOperator, m: int, n: int, p: int, q: int,
                             allow_unreliable: bool = False) -> MomentRelationCheck:
    """Compare <a1^dag^m a1^n a2^dag^p a2^q> over rho^PT against the
    index-swapped moment <a1^dag^m a1^n a2^dag^q a2^p> over rho.

    Both sides are computed independently: the left by an explicit Fock-basis
    partial transpose, the right by reordering the mode-2 exponents.
    """
    space = space_of(rho)
    if space.modes != 2:
        raise ParameterOutOfRange("moment relation needs a two-mode state")
    order = max(m, n, p, q)
    _guard(rho, 2 * order, allow_unreliable)
    a = destroy(space.cutoff)
    ad = a.conj().T
    m1 = np.linalg.matrix_power(ad, m) @ np.linalg.matrix_power(a, n)
    m2_lhs = np.linalg.matrix_power(ad, p) @ np.linalg.matrix_power(a, q)
    m2_rhs = np.linalg.matrix_power(ad, q) @ np.linalg.matrix_power(a, p)
    lhs = _MomentEngine(fock_partial_transpose(rho)).kron_moment(m1, m2_lhs)
    rhs = _MomentEngine(rho).kron_moment(m1, m2_rhs)
    return MomentRelationCheck(lhs, rhs, abs(lhs - rhs))


# ---------------------------------------------------------------------------
# Single-mode nonclassicality witnesses
# ---------------------------------------------------------------------------

def normal_order_terms(j: int, k: int):
    """Expansion of a^j a^dag^k into normally ordered terms.

    Returns [(coefficient, dag_power, a_power), ...] such that
    a^j a^dag^k = sum coeff * a^dag^dag_power a^a_power, with
    coeff = C(j, i) C(k, i) i! for i = 0..min(j, k).
    """
    terms = []
    for i in range(min(j, k) + 1):
        coeff = math.comb(j, i) * math.comb(k, i) * math.factorial(i)
        terms.append((coeff, k - i, j - i))
    return terms


def _normal_ordered_variance(rho: HermitianOperator, terms) -> float:
    """<:(Delta B)^2:> for B given as [(coeff, dag_power, a_power), ...].

    Normal ordering is applied symbolically: the square of B is expanded at
    the level of exponent pairs (daggers simply add), and only moments
    <a^dag^j a^k> of the truncated state are evaluated numerically.
    """
    space = space_of(rho)
    a = destroy(space.cutoff)
    ad = a.conj().T
    powers_a = {}
    powers_ad = {}

    def mom(jdag: int, ka: int) -> complex:
        if jdag not in powers_ad:
            powers_ad[jdag] = np.linalg.matrix_power(ad, jdag)
        if ka not in powers_a:
            powers_a[ka] = np.linalg.matrix_power(a, ka)
        return complex(np.einsum("ij,ji->", rho.matrix, powers_ad[jdag] @ powers_a[ka]))

    mean = sum(c * mom(jd, ka) for c, jd, ka in terms)
    square = 0.0 + 0.0j
    for c1, jd1, ka1 in terms:
        for c2, jd2, ka2 in terms:
            square += c1 * c2 * mom(jd1 + jd2, ka1 + ka2)
    return float((square - mean * mean).real)


def amplitude_squeezing(rho: HermitianOperator, m: int, phi: float,
                        allow_unreliable: bool = False) -> float:
    """Normal-ordered variance of a^m e^{-i phi} + a^dag^m e^{i phi}.

    Negative exactly when the state is m-th order amplitude squeezed at
    phase phi; coherent states give 0 at every (m, phi).
    """
    space = space_of(rho)
    if space.modes != 1:
        raise ParameterOutOfRange("amplitude squeezing is a single-mode witness")
    _guard(rho, 2 * m, allow_unreliable)
    terms = [(np.exp(-1j * phi), 0, m), (np.exp(1j * phi), m, 0)]
    return _normal_ordered_variance(rho, terms)


def amplitude_squeezing_scan(rho: HermitianOperator, m: int, points: int = 64,
                             allow_unreliable: bool = False):
    """Minimum of the normal-ordered variance over a phase grid."""
    best_phi, best = 0.0, np.inf
    for phi in np.linspace(0.0, np.pi, points, endpoint=False):
        val = amplitude_squeezing(rho, m, float(phi), allow_unreliable)
        if val < best:
            best, best_phi = val, float(phi)
    return best, best_phi


def photon_stat_nonclassicality(rho: HermitianOperator, m: int,
                                allow_unreliable: bool = False) -> float:
    """Normal-ordered variance of a^dag^m a^m:
    <a^dag^2m a^2m> - <a^dag^m a^m>^2; m = 1 is the sub-Poissonian test."""
    space = space_of(rho)
    if space.modes != 1:
        raise ParameterOutOfRange("photon statistics is a single-mode witness")
    _guard(rho, 2 * m, allow_unreliable)
    return _normal_ordered_variance(rho, [(1.0, m, m)])


# ---------------------------------------------------------------------------
# Consistency of the printed inequalities with the generic certificate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CrosscheckResult:
    margin_eq: float
    margin_generic: float
    defect: float
    generic_report: SRReport


def cv_pipeline_crosscheck(rho: HermitianOperator, m: int, n: int, which: int,
                           allow_unreliable: bool = False) -> CrosscheckResult:
    """Evaluate a printed inequality over rho and the generic SR certificate
    over the explicit Fock-basis rho^PT with the generating observable pair.

    The two margins agree to rounding because the printed forms are exactly
    the PT-mapped moments of the generic pair in the truncated space.
    """
    space = space_of(rho)
    obs = observable_set(space, m, n)
    if which == 10:
        rep = ineq10(rho, m, n, allow_unreliable=allow_unreliable)
        h1, h2 = obs.h1, obs.h2_sum
    elif which == 11:
        rep = ineq11(rho, m, n, allow_unreliable=allow_unreliable)
        h1, h2 = obs.pair_h1, obs.pair_h2
    else:
        raise ParameterOutOfRange(f"which = {which} must be 10 or 11")
    generic = sr_moments(h1, h2, fock_partial_transpose(rho))
    return CrosscheckResult(rep.margin, generic.margin,
                            abs(rep.margin - generic.margin), generic)


# ---------------------------------------------------------------------------
# CV state specs (CLI surface)
# ---------------------------------------------------------------------------

def cv_state_from_spec(spec: dict) -> HermitianOperator:
    """Build a CV state from a spec such as
    {"family": "squeezed_vacuum", "r": 0.5, "phi": 0, "cutoff": 30}."""
    family = spec.get("family")
    cutoff = int(spec.get("cutoff", DEFAULT_CUTOFF))
    allow = bool(spec.get("allow_unreliable", False))
    one = FockSpace(1, cutoff)
    two = FockSpace(2, cutoff)
    if family == "coherent":
        return coherent(complex(spec["alpha"]), one, allow)
    if family == "fock":
        return fock(int(spec["n"]), one, allow)
    if family == "squeezed_vacuum":
        return squeezed_vacuum(float(spec["r"]), float(spec.get("phi", 0.0)), one, allow)
    if family == "thermal":
        return thermal(float(spec["nbar"]), one, allow)
    if family == "vacuum":
        return vacuum(one)
    if family == "two_mode_squeezed":
        return two_mode_squeezed(float(spec["r"]), two, allow)
    if family == "single_photon_entangled":
        return single_photon_entangled(two)
    raise ParameterOutOfRange(f"unknown CV state family {family!r}")
