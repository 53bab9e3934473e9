"""Independent oracles used to freeze expected values.

Everything here is deliberately coded against numpy/scipy primitives and
plain index bookkeeping, not against the library's own code paths.
"""

import numpy as np


def pt_oracle(mat, dims, party_two):
    """Partial transpose by explicit index arithmetic (slow, loop-based)."""
    dims = tuple(dims)
    n = int(np.prod(dims))
    out = np.zeros_like(mat)

    def unravel(flat):
        idx = []
        rem = flat
        for d in reversed(dims):
            idx.append(rem % d)
            rem //= d
        return list(reversed(idx))

    def ravel(idx):
        flat = 0
        for i, d in zip(idx, dims):
            flat = flat * d + i
        return flat

    for r in range(n):
        for c in range(n):
            ri, ci = unravel(r), unravel(c)
            for s in party_two:
                ri[s], ci[s] = ci[s], ri[s]
            out[ravel(ri), ravel(ci)] = mat[r, c]
    return out


def eigvals_oracle(mat):
    """Reference eigenvalues, descending, via LAPACK."""
    return np.sort(np.linalg.eigvalsh(mat))[::-1]


def random_hermitian(rng, n, scale=1.0):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * (g + g.conj().T) / 2.0


def random_unit_trace_hermitian(rng, n):
    h = random_hermitian(rng, n)
    h += (1.0 - np.trace(h).real) / n * np.eye(n)
    return h


def random_density_oracle(rng, n):
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_separable_oracle(rng, dims, terms):
    total = int(np.prod(dims))
    rho = np.zeros((total, total), dtype=complex)
    weights = rng.dirichlet(np.ones(terms))
    for w in weights:
        block = np.array([[1.0]], dtype=complex)
        for d in dims:
            block = np.kron(block, random_density_oracle(rng, d))
        rho += w * block
    return rho


# ---------------------------------------------------------------------------
# Continuous-variable oracles
# ---------------------------------------------------------------------------

def destroy_oracle(cutoff):
    a = np.zeros((cutoff + 1, cutoff + 1), dtype=complex)
    for k in range(1, cutoff + 1):
        a[k - 1, k] = np.sqrt(k)
    return a


_MANCINI_OPS = {}


def _mancini_operators(cutoff):
    if cutoff not in _MANCINI_OPS:
        a = destroy_oracle(cutoff)
        ad = a.conj().T
        eye = np.eye(cutoff + 1, dtype=complex)
        x = (a + ad) / np.sqrt(2.0)
        p = 1j * (ad - a) / np.sqrt(2.0)
        u = np.kron(x, eye) + np.kron(eye, x)
        v = np.kron(p, eye) - np.kron(eye, p)
        comm1 = np.kron(x @ p - p @ x, eye)
        comm2 = np.kron(eye, x @ p - p @ x)
        _MANCINI_OPS[cutoff] = (u, v, u @ u, v @ v, comm1, comm2)
    return _MANCINI_OPS[cutoff]


def mancini_margin(rho_matrix, cutoff):
    """Product-form quadrature criterion in standard units.

    Margin = Var(x1+x2) Var(p1-p2) - ((c1+c2)/2)^2 with x = (a+a^dag)/sqrt2,
    p = i(a^dag-a)/sqrt2 and c_i = Im <[x_i, p_i]>, all built from the
    truncated ladder matrices.  Negative on no separable state.
    """
    u, v, uu, vv, comm1, comm2 = _mancini_operators(cutoff)

    def mean(op):
        return np.einsum("ij,ji->", rho_matrix, op)

    var_u = (mean(uu) - mean(u) ** 2).real
    var_v = (mean(vv) - mean(v) ** 2).real
    c1 = mean(comm1).imag
    c2 = mean(comm2).imag
    return var_u * var_v - ((c1 + c2) / 2.0) ** 2


def bs_fock1_output(theta, cutoff):
    """Exact beam-splitter image of |1,0>: cos(theta)|10> - sin(theta)|01>."""
    d = cutoff + 1
    v = np.zeros(d * d, dtype=complex)
    v[d] = np.cos(theta)    # |1,0>
    v[1] = -np.sin(theta)   # |0,1>
    return np.outer(v, v.conj())


def coherent_vector(alpha, cutoff):
    amps = np.zeros(cutoff + 1, dtype=complex)
    amps[0] = 1.0
    for k in range(1, cutoff + 1):
        amps[k] = amps[k - 1] * alpha / np.sqrt(k)
    return amps / np.linalg.norm(amps)
