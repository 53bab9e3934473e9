"""Dense complex-matrix algebra over multipartite tensor-product spaces.

Basis ordering is row-major lexicographic over subsystem indices: the
composite basis state |i1 i2 ... ik> sits at flat index
i1*(d2*...*dk) + i2*(d3*...*dk) + ... + ik, i.e. the last subsystem index
runs fastest.  This matches numpy.kron and is a format contract for the
JSON matrix files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidBipartition, NotHermitian

HERMITICITY_TOL = 1e-9


@dataclass(frozen=True)
class Bipartition:
    """Split of subsystem indices {0..k-1} into party one and its complement.

    party_one must be a non-empty proper subset; party_two is derived.
    """

    party_one: frozenset
    num_subsystems: int

    def __post_init__(self):
        ids = frozenset(int(i) for i in self.party_one)
        object.__setattr__(self, "party_one", ids)
        if not ids:
            raise InvalidBipartition("party one is empty")
        if not ids < set(range(self.num_subsystems)):
            raise InvalidBipartition(
                f"party one {sorted(ids)} is not a proper subset of "
                f"0..{self.num_subsystems - 1}"
            )

    @property
    def party_two(self) -> frozenset:
        return frozenset(range(self.num_subsystems)) - self.party_one

    @classmethod
    def parse(cls, text: str, num_subsystems: int) -> "Bipartition":
        """Parse a string such as "0,1|2" and validate it against k subsystems."""
        try:
            left, right = text.split("|")
            one = frozenset(int(t) for t in left.split(",") if t.strip() != "")
            two = frozenset(int(t) for t in right.split(",") if t.strip() != "")
        except ValueError as exc:
            raise InvalidBipartition(f"cannot parse bipartition {text!r}") from exc
        bip = cls(one, num_subsystems)
        if two != bip.party_two:
            raise InvalidBipartition(
                f"declared party two {sorted(two)} is not the complement of "
                f"{sorted(one)} in 0..{num_subsystems - 1}"
            )
        return bip

    def __str__(self) -> str:
        one = ",".join(str(i) for i in sorted(self.party_one))
        two = ",".join(str(i) for i in sorted(self.party_two))
        return f"{one}|{two}"


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    """Validated Hermitian matrix with declared subsystem dimensions.

    ``matrix`` is exactly Hermitian (symmetrized on construction) and
    ``deviation`` records how far the raw input was from Hermitian in
    max-norm.  Unit trace is *not* part of the type; it is checked where
    an operation requires a state.
    """

    matrix: np.ndarray
    dims: tuple
    tolerance: float = HERMITICITY_TOL
    deviation: float = 0.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> float:
        return float(np.trace(self.matrix).real)


def validate_hermitian(matrix, dims, tol: float = HERMITICITY_TOL) -> HermitianOperator:
    """Validate and symmetrize a matrix into a HermitianOperator.

    The returned operator stores (M + M†)/2 and the max-norm deviation of
    the input from Hermiticity.  Raises DimensionMismatch for a non-square
    matrix or an inconsistent dimension profile, NotHermitian when the
    deviation exceeds tol * max(1, max-norm) or entries are not finite.
    """
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"matrix shape {m.shape} is not square")
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims):
        raise DimensionMismatch(f"invalid dimension profile {dims}")
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(
            f"profile {dims} has total {int(np.prod(dims))}, matrix is {m.shape[0]}x{m.shape[0]}"
        )
    if not np.isfinite(m).all():
        raise NotHermitian("matrix has non-finite entries")
    deviation = float(np.max(np.abs(m - m.conj().T))) if m.size else 0.0
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if deviation > tol * scale:
        raise NotHermitian(
            f"max |M - M^dag| = {deviation:.3e} exceeds {tol:.1e} * {scale:.3e}"
        )
    sym = (m + m.conj().T) / 2.0
    return HermitianOperator(sym, dims, tol, deviation)


def identity(dims, scale: float = 1.0) -> HermitianOperator:
    dims = tuple(int(d) for d in dims)
    n = int(np.prod(dims))
    return HermitianOperator(np.eye(n, dtype=np.complex128) * scale, dims)


def projector(vector, dims=None) -> HermitianOperator:
    """Rank-one projector |v><v| (the vector is normalized first)."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    dims = (len(v),) if dims is None else tuple(dims)
    return validate_hermitian(np.outer(v, v.conj()), dims, tol=1e-12)


def tensor_product(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """Kronecker product; the profile is the concatenation of the factors'."""
    return HermitianOperator(
        np.kron(a.matrix, b.matrix), a.dims + b.dims, min(a.tolerance, b.tolerance)
    )


def partial_transpose(rho: HermitianOperator, bip: Bipartition) -> HermitianOperator:
    """Transpose the party-two subsystem indices of a multipartite operator.

    Pure index permutation: trace is preserved exactly and applying the map
    twice returns the input bit-for-bit.
    """
    dims = rho.dims
    if bip.num_subsystems != len(dims):
        raise InvalidBipartition(
            f"bipartition is over {bip.num_subsystems} subsystems, operator has {len(dims)}"
        )
    k = len(dims)
    t = rho.matrix.reshape(dims + dims)
    perm = list(range(2 * k))
    for s in bip.party_two:
        perm[s], perm[k + s] = perm[k + s], perm[s]
    out = np.ascontiguousarray(t.transpose(perm).reshape(rho.matrix.shape))
    # the permutation of an exactly Hermitian matrix is exactly Hermitian, so
    # re-validation is bit-neutral and the involution stays exact
    return validate_hermitian(out, dims, rho.tolerance)


def trace_product(a, b) -> complex:
    """Tr{AB} for two equally sized square arrays, without forming AB."""
    return complex(np.einsum("ij,ji->", a, b))


def expectation(op: HermitianOperator, rho: HermitianOperator) -> float:
    """Re Tr{O rho}.  Both arguments Hermitian, so the imaginary part is noise."""
    value, _ = expectation_with_imag(op, rho)
    return value


def expectation_with_imag(op: HermitianOperator, rho: HermitianOperator):
    """Tr{O rho} split into (real value, imaginary diagnostic).

    The diagnostic should sit at machine level (<= 1e-9 by contract) for
    exactly Hermitian operands.
    """
    if op.dim != rho.dim:
        raise DimensionMismatch(f"operator dim {op.dim} vs state dim {rho.dim}")
    t = trace_product(op.matrix, rho.matrix)
    return float(t.real), float(t.imag)


def commutator(a: HermitianOperator, b: HermitianOperator) -> np.ndarray:
    """AB - BA as a plain complex matrix (anti-Hermitian for Hermitian inputs)."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} vs {b.dim}")
    return a.matrix @ b.matrix - b.matrix @ a.matrix


def anticommutator(a: HermitianOperator, b: HermitianOperator) -> HermitianOperator:
    """AB + BA, Hermitian for Hermitian inputs."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"dims {a.dim} vs {b.dim}")
    m = a.matrix @ b.matrix + b.matrix @ a.matrix
    return validate_hermitian(m, a.dims, tol=1e-6)


# ---------------------------------------------------------------------------
# JSON matrix file format:
#   {"dims": [d1, ..., dk], "matrix": [[re, im], ...]}
# with the matrix flattened row-major, length (d1*...*dk)^2.
# ---------------------------------------------------------------------------

def matrix_payload(op: HermitianOperator) -> dict:
    flat = op.matrix.reshape(-1)
    return {
        "dims": list(op.dims),
        "matrix": [[float(z.real), float(z.imag)] for z in flat],
    }


def operator_from_payload(payload: dict, tol: float = HERMITICITY_TOL) -> HermitianOperator:
    try:
        dims = tuple(int(d) for d in payload["dims"])
        entries = payload["matrix"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed matrix payload: {exc}") from exc
    n = int(np.prod(dims))
    if len(entries) != n * n:
        raise DimensionMismatch(
            f"matrix payload has {len(entries)} entries, expected {n * n} for dims {dims}"
        )
    try:
        flat = np.array([complex(re, im) for re, im in entries], dtype=np.complex128)
    except (TypeError, ValueError) as exc:
        raise DimensionMismatch(f"malformed matrix entry: {exc}") from exc
    return validate_hermitian(flat.reshape(n, n), dims, tol)


def save_operator(op: HermitianOperator, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_payload(op), fh)


def load_operator(path, tol: float = HERMITICITY_TOL) -> HermitianOperator:
    with open(path) as fh:
        payload = json.load(fh)
    return operator_from_payload(payload, tol)
