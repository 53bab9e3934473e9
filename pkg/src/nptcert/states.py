"""Factories for the benchmark states used by tests and the CLI.

Random generation uses numpy's default_rng (PCG64), which is seedable and
produces the same stream on every platform, so fixtures built from a fixed
seed reproduce bit-exactly.
"""

from __future__ import annotations

import numpy as np

from .errors import ParameterOutOfRange
from .hermitian import HermitianOperator, tensor_product, validate_hermitian

FACTORY_TOL = 1e-12


def _state(matrix, dims) -> HermitianOperator:
    return validate_hermitian(matrix, dims, tol=FACTORY_TOL)


def make_ghz_mixed(p: float) -> HermitianOperator:
    """p |GHZ><GHZ| + (1-p) I/8 on three qubits, GHZ = (|000> + |111>)/sqrt(2)."""
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"p = {p!r} outside [0, 1]")
    ghz = np.zeros(8, dtype=np.complex128)
    ghz[0] = ghz[7] = 1.0 / np.sqrt(2.0)
    rho = p * np.outer(ghz, ghz.conj()) + (1.0 - p) * np.eye(8) / 8.0
    return _state(rho, (2, 2, 2))


def make_bell() -> HermitianOperator:
    """|Phi+><Phi+| with Phi+ = (|00> + |11>)/sqrt(2)."""
    v = np.zeros(4, dtype=np.complex128)
    v[0] = v[3] = 1.0 / np.sqrt(2.0)
    return _state(np.outer(v, v.conj()), (2, 2))


def make_single_photon_entangled() -> HermitianOperator:
    """(|01> + |10>)/sqrt(2) as a two-qubit density operator."""
    v = np.zeros(4, dtype=np.complex128)
    v[1] = v[2] = 1.0 / np.sqrt(2.0)
    return _state(np.outer(v, v.conj()), (2, 2))


def make_werner(p: float) -> HermitianOperator:
    """p |Psi-><Psi-| + (1-p) I/4.

    Standard two-qubit soundness fixture; not part of the source material
    for this library, included as an extra benchmark family.
    """
    if not 0.0 <= p <= 1.0:
        raise ParameterOutOfRange(f"p = {p!r} outside [0, 1]")
    v = np.zeros(4, dtype=np.complex128)
    v[1] = 1.0 / np.sqrt(2.0)
    v[2] = -1.0 / np.sqrt(2.0)
    rho = p * np.outer(v, v.conj()) + (1.0 - p) * np.eye(4) / 4.0
    return _state(rho, (2, 2))


def random_density(dim: int, seed, dims=None) -> HermitianOperator:
    """G G^dag / Tr with G complex Gaussian: a full-rank unit-trace state."""
    if dim < 2:
        raise ParameterOutOfRange(f"dim = {dim} must be >= 2")
    rng = np.random.default_rng(seed)
    return _random_density_from(rng, dim, dims)


def _random_density_from(rng, dim: int, dims=None) -> HermitianOperator:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    rho /= np.trace(rho).real
    return _state(rho, (dim,) if dims is None else tuple(dims))


def random_separable(dims, terms: int, seed) -> HermitianOperator:
    """Convex mixture of random product states with Dirichlet-uniform weights."""
    dims = tuple(int(d) for d in dims)
    if any(d < 2 for d in dims):
        raise ParameterOutOfRange(f"all subsystem dims must be >= 2, got {dims}")
    if terms < 1:
        raise ParameterOutOfRange(f"terms = {terms} must be >= 1")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    total = int(np.prod(dims))
    rho = np.zeros((total, total), dtype=np.complex128)
    for w in weights:
        factor = _random_density_from(rng, dims[0])
        for d in dims[1:]:
            factor = tensor_product(factor, _random_density_from(rng, d))
        rho += w * factor.matrix
    return _state(rho, dims)


def make_product(dims, seed) -> HermitianOperator:
    """Single product of independent random densities, one per subsystem."""
    return random_separable(dims, terms=1, seed=seed)


_FAMILIES = {
    "ghz_mixed", "bell", "werner", "single_photon_entangled",
    "random_density", "random_separable", "product",
}


def state_from_spec(spec: dict) -> HermitianOperator:
    """Build a finite-dimensional state from a StateSpec mapping.

    Examples: {"family": "ghz_mixed", "p": 0.5},
    {"family": "random_separable", "dims": [2, 2], "terms": 4, "seed": 7}.
    """
    family = spec.get("family")
    if family not in _FAMILIES:
        raise ParameterOutOfRange(f"unknown state family {family!r}")
    if family == "ghz_mixed":
        return make_ghz_mixed(float(spec["p"]))
    if family == "bell":
        return make_bell()
    if family == "werner":
        return make_werner(float(spec["p"]))
    if family == "single_photon_entangled":
        return make_single_photon_entangled()
    if family == "random_density":
        return random_density(int(spec["dim"]), spec.get("seed", 0),
                              dims=spec.get("dims"))
    if family == "random_separable":
        return random_separable(spec["dims"], int(spec.get("terms", 4)),
                                spec.get("seed", 0))
    return make_product(spec["dims"], spec.get("seed", 0))
