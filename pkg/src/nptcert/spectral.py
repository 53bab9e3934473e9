"""Hermitian eigendecomposition and NPT classification of partially transposed states.

The eigensolver is a cyclic Jacobi diagonalization with complex Givens
rotations.  It is deterministic for identical input bits: fixed pair
ordering, fixed rotation formulas, stable descending sort with ties broken
by original index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, UnnormalizedState
from .hermitian import Bipartition, HermitianOperator, partial_transpose, validate_hermitian

MAX_SWEEPS = 100
OFF_DIAGONAL_RTOL = 1e-13  # threshold on ||offdiag||_F relative to ||M||_F
NEGATIVITY_TOL = 1e-10
TRACE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalues (descending) with orthonormal eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def vector(self, index: int) -> np.ndarray:
        return self.eigenvectors[:, index].copy()


@dataclass(frozen=True)
class NptVerdict:
    is_npt: bool
    min_eigenvalue: float
    negativity_count: int
    chosen_positive_index: int
    chosen_negative_index: int


def _off_norm(a: np.ndarray) -> float:
    # Compute directly from the off-diagonal entries; subtracting squared
    # norms cancels catastrophically once the matrix is nearly diagonal.
    off = a - np.diag(np.diagonal(a))
    return float(np.linalg.norm(off))


def eig_hermitian(op: HermitianOperator, max_sweeps: int = MAX_SWEEPS,
                  rtol: float = OFF_DIAGONAL_RTOL) -> Spectrum:
    """Diagonalize a HermitianOperator by cyclic Jacobi rotations.

    Raises ConvergenceFailure if the off-diagonal Frobenius norm has not
    dropped below rtol * ||M||_F after max_sweeps full sweeps.
    """
    m = op.matrix
    n = m.shape[0]
    a = np.array(m, dtype=np.complex128)
    v = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(m))
    if fro == 0.0 or n == 1:
        w = np.diagonal(a).real.copy()
        return Spectrum(w, v)
    thresh = rtol * fro
    # A pair below this cannot by itself keep the off-norm above threshold.
    pair_skip = thresh / n
    for sweep in range(max_sweeps + 1):
        if _off_norm(a) <= thresh:
            break
        if sweep == max_sweeps:
            raise ConvergenceFailure(
                f"Jacobi did not converge in {max_sweeps} sweeps (dim {n})"
            )
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= pair_skip:
                    continue
                # Factor the 2x2 block rotation as a phase times a real
                # Jacobi rotation zeroing the (p,q) entry.
                phase = np.conj(apq / mag)
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                colp = a[:, p].copy()
                colq = a[:, q].copy()
                a[:, p] = c * colp - (phase * s) * colq
                a[:, q] = s * colp + (phase * c) * colq
                rowp = a[p, :].copy()
                rowq = a[q, :].copy()
                a[p, :] = c * rowp - (np.conj(phase) * s) * rowq
                a[q, :] = s * rowp + (np.conj(phase) * c) * rowq
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp - (phase * s) * vq
                v[:, q] = s * vp + (phase * c) * vq
    w = np.diagonal(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return Spectrum(w[order], np.ascontiguousarray(v[:, order]))


def classify_npt(rho: HermitianOperator, bip: Bipartition,
                 tol: float = NEGATIVITY_TOL, normalize: bool = False):
    """Spectrum of rho^PT together with an NPT verdict.

    Requires unit trace within 1e-9 unless normalize=True, in which case any
    positive trace is rescaled away first.
    """
    tr = rho.trace()
    if abs(tr - 1.0) > TRACE_TOL:
        if not normalize:
            raise UnnormalizedState(f"trace {tr!r} differs from 1 beyond {TRACE_TOL}")
        if tr <= 0.0:
            raise UnnormalizedState(f"trace {tr!r} is not positive")
        rho = validate_hermitian(rho.matrix / tr, rho.dims, rho.tolerance)
    spectrum = eig_hermitian(partial_transpose(rho, bip))
    w = spectrum.eigenvalues
    min_eig = float(w[-1])
    count = int(np.sum(w < -tol))
    verdict = NptVerdict(
        is_npt=min_eig < -tol,
        min_eigenvalue=min_eig,
        negativity_count=count,
        chosen_positive_index=0,
        chosen_negative_index=len(w) - 1,
    )
    return spectrum, verdict
