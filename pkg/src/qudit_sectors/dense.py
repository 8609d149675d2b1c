"""Dense state vectors and density matrices for small D^n.

This is the numerical cross-check for the exact modules: every object is
built straight from its matrix definition. Qudit 1 is the most significant
base-D digit of a basis index.
"""

from typing import Iterable, Optional, Sequence

import numpy as np

from .graphs import AdjacencyMatrix
from .pauli import PauliOp
from .ring import SizeGuardError, check_dim, mod_inverse
from .sectors import SectorDistribution

STATE_GUARD = 4096
DECOMPOSE_GUARD = 256
HERMITIAN_TOL = 1e-10
NPT_TOL = 1e-12


def _guard(D: int, n: int, limit: int = STATE_GUARD):
    if D ** n > limit:
        raise SizeGuardError(f"D^n = {D ** n} exceeds the dense guard {limit}")


def _n_of(dim: int, D: int) -> int:
    n = 0
    size = 1
    while size < dim:
        size *= D
        n += 1
    if size != dim:
        raise ValueError(f"matrix size {dim} is not a power of D={D}")
    return n


def roots_of_unity(D: int) -> np.ndarray:
    k = np.arange(D)
    return np.cos(2 * np.pi * k / D) + 1j * np.sin(2 * np.pi * k / D)


def shift_matrix(D: int) -> np.ndarray:
    """X|k> = |k+1 mod D>."""
    X = np.zeros((D, D), dtype=complex)
    for k in range(D):
        X[(k + 1) % D, k] = 1.0
    return X


def clock_matrix(D: int) -> np.ndarray:
    """Z|k> = w^k |k>."""
    return np.diag(roots_of_unity(D))


def kron_all(ops: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for op in ops:
        out = np.kron(out, op)
    return out


def pauli_matrix(P: PauliOp) -> np.ndarray:
    """Dense w_{2D}^q X^r Z^s."""
    D = P.D
    _guard(D, P.n)
    X, Z = shift_matrix(D), clock_matrix(D)
    ops = [np.linalg.matrix_power(X, a) @ np.linalg.matrix_power(Z, b) for a, b in zip(P.r, P.s)]
    phase = np.exp(1j * np.pi * P.q / D)
    return phase * kron_all(ops)


def basis_digits(D: int, n: int) -> np.ndarray:
    """Row k holds the base-D digits of k, qudit 1 first."""
    if n == 0:
        return np.zeros((1, 0), dtype=np.int64)
    return np.indices((D,) * n).reshape(n, -1).T.astype(np.int64)


def graph_state_vector(G: AdjacencyMatrix) -> np.ndarray:
    """D^{-n/2} sum_r w^{sum_{i<j} gamma_ij r_i r_j} |r>."""
    D, n = G.D, G.n
    _guard(D, n)
    r = basis_digits(D, n)
    upper = np.triu(G.array(), 1)
    expo = (((r @ upper) * r).sum(axis=1)) % D
    return roots_of_unity(D)[expo] / np.sqrt(D ** n)


def special_state(kind: str, D: int = 2, n: int = 3) -> np.ndarray:
    """ghz: (1/sqrt D) sum |j>^n; w3: equal superposition of weight-one qubit strings; plus: uniform qudit."""
    check_dim(D)
    if kind == "ghz":
        _guard(D, n)
        psi = np.zeros(D ** n, dtype=complex)
        step = sum(D ** k for k in range(n))
        for j in range(D):
            psi[j * step] = 1.0
        return psi / np.sqrt(D)
    if kind == "w3":
        psi = np.zeros(8, dtype=complex)
        psi[[4, 2, 1]] = 1.0
        return psi / np.sqrt(3)
    if kind == "plus":
        return np.ones(D, dtype=complex) / np.sqrt(D)
    raise ValueError(f"unknown special state {kind!r}")


def local_gate(kind: str, D: int, param: Optional[int] = None) -> np.ndarray:
    """fourier: F = D^{-1/2} sum w^{jk}|j><k|; mult(l): |k> -> |kl>; cz(g): sum |k><k| (x) Z^{gk}."""
    check_dim(D)
    w = roots_of_unity(D)
    if kind == "fourier":
        j = np.arange(D)
        return w[np.outer(j, j) % D] / np.sqrt(D)
    if kind == "mult":
        if param is None or mod_inverse(param, D) is None:
            raise ValueError(f"multiplier {param} is not invertible mod {D}")
        M = np.zeros((D, D), dtype=complex)
        for k in range(D):
            M[(k * param) % D, k] = 1.0
        return M
    if kind == "cz":
        g = 0 if param is None else param
        U = np.zeros((D * D, D * D), dtype=complex)
        for k in range(D):
            for l in range(D):
                U[k * D + l, k * D + l] = w[(g * k * l) % D]
        return U
    raise ValueError(f"unknown gate {kind!r}")


def apply_local(op: np.ndarray, psi: np.ndarray, site: int, D: int) -> np.ndarray:
    """Apply a single-qudit operator to one site of a state vector."""
    n = _n_of(psi.shape[0], D)
    t = psi.reshape((D,) * n)
    t = np.tensordot(op, t, axes=([1], [site]))
    t = np.moveaxis(t, 0, site)
    return t.reshape(-1)


def density(psi: np.ndarray) -> np.ndarray:
    return np.outer(psi, psi.conj())


def apply_noise(rho: np.ndarray, kind: str, p: float, D: int) -> np.ndarray:
    """global: (1-p) rho + p 1/D^n. local: on each qudit, (1-p) rho + p (marginal with that qudit replaced by 1/D)."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    dim = rho.shape[0]
    n = _n_of(dim, D)
    _guard(D, n)
    if kind in ("global", "global_white"):
        return (1 - p) * rho + p * np.eye(dim) / dim
    if kind not in ("local", "local_white"):
        raise ValueError(f"unknown noise model {kind!r}")
    out = rho
    for i in range(n):
        t = out.reshape((D,) * (2 * n))
        marg = np.trace(t, axis1=i, axis2=n + i)
        full = np.multiply.outer(marg, np.eye(D) / D)
        full = np.moveaxis(full, [2 * n - 2, 2 * n - 1], [i, n + i])
        out = (1 - p) * out + p * full.reshape(dim, dim)
    return out


def partial_trace(rho: np.ndarray, keep: Iterable[int], D: int) -> np.ndarray:
    """Reduced state on the 0-based sites in keep (in ascending order)."""
    n = _n_of(rho.shape[0], D)
    keep = sorted(set(keep))
    if not keep or keep[0] < 0 or keep[-1] >= n:
        raise ValueError(f"bad subset {keep} for n={n}")
    t = rho.reshape((D,) * (2 * n))
    m = n
    for i in reversed([i for i in range(n) if i not in keep]):
        t = np.trace(t, axis1=i, axis2=m + i)
        m -= 1
    k = D ** len(keep)
    return t.reshape(k, k)


def partial_transpose(rho: np.ndarray, parties, D: int) -> np.ndarray:
    """<i,j| rho^{T_A} |k,l> = <k,j| rho |i,l> for every site in parties."""
    n = _n_of(rho.shape[0], D)
    if isinstance(parties, int):
        parties = [parties]
    parties = list(parties)
    if not parties or any(not 0 <= a < n for a in parties):
        raise ValueError(f"bad party {parties} for n={n}")
    t = rho.reshape((D,) * (2 * n))
    for a in parties:
        t = np.swapaxes(t, a, n + a)
    return t.reshape(rho.shape)


def hermitian_eigenvalues(M: np.ndarray, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    M = np.asarray(M)
    if M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    dev = np.max(np.abs(M - M.conj().T)) if M.size else 0.0
    if dev > tol * max(1.0, np.max(np.abs(M))):
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3g})")
    return np.linalg.eigvalsh((M + M.conj().T) / 2)


def von_neumann_entropy(rho: np.ndarray) -> float:
    """-Tr rho log2 rho with 0 log 0 = 0."""
    ev = hermitian_eigenvalues(rho)
    ev = ev[ev > 1e-15]
    return float(-(ev * np.log2(ev)).sum())


def reduction_operator(rho: np.ndarray, party: int, D: int) -> np.ndarray:
    """1_A (x) Tr_A[rho] - rho, with the identity placed on site party."""
    n = _n_of(rho.shape[0], D)
    if not 0 <= party < n:
        raise ValueError(f"bad party {party}")
    rest = partial_trace(rho, [i for i in range(n) if i != party], D)
    t = np.multiply.outer(rest.reshape((D,) * (2 * n - 2)), np.eye(D))
    t = np.moveaxis(t, [2 * n - 2, 2 * n - 1], [party, n + party])
    return t.reshape(rho.shape) - rho


def ppt_eigenvector(G: AdjacencyMatrix) -> np.ndarray:
    """v_s = w^{sum_{2<=i<j} g_ij s_i s_j} (w^{sum_j g_1j s_j} [s_1 = 0] - [s_1 = 1])."""
    D, n = G.D, G.n
    if n < 2 or mod_inverse(G.gamma[0][1], D) is None:
        raise ValueError("the edge between vertices 1 and 2 must be invertible")
    s = basis_digits(D, n)
    gam = G.array()
    rest = np.triu(gam[1:, 1:], 1)
    inner = (((s[:, 1:] @ rest) * s[:, 1:]).sum(axis=1)) % D
    lead = (s[:, 1:] @ gam[0, 1:]) % D
    w = roots_of_unity(D)
    v = w[inner] * (w[lead] * (s[:, 0] == 0) - (s[:, 0] == 1))
    return v.astype(complex)


def verify_ppt_eigenvector(G: AdjacencyMatrix, p: float):
    """Residual ||rho^{T_1} v - lambda v|| / ||v|| with lambda = p/D^n - (1-p)/D.

    Returns (residual, lambda).
    """
    D, n = G.D, G.n
    _guard(D, n)
    v = ppt_eigenvector(G)
    rho = apply_noise(density(graph_state_vector(G)), "global", p, D)
    pt = partial_transpose(rho, 0, D)
    lam = p / D ** n - (1 - p) / D
    res = np.linalg.norm(pt @ v - lam * v) / np.linalg.norm(v)
    return float(res), lam


def pauli_decompose(rho: np.ndarray, D: int) -> np.ndarray:
    """w[r, s] = Tr[(X^r Z^s)^dagger rho], indexed by base-D integers of r and s.

    For fixed r the coefficients are sum_k w^{-k.s} rho[k+r, k], an n-dimensional DFT.
    """
    dim = rho.shape[0]
    n = _n_of(dim, D)
    _guard(D, n, DECOMPOSE_GUARD)
    digs = basis_digits(D, n)
    place = D ** np.arange(n - 1, -1, -1) if n else np.zeros(0, dtype=np.int64)
    cols = np.arange(dim)
    out = np.empty((dim, dim), dtype=complex)
    for ridx in range(dim):
        shifted = ((digs + digs[ridx]) % D) @ place
        diag = rho[shifted, cols].reshape((D,) * n) if n else rho[shifted, cols]
        out[ridx] = np.fft.fftn(diag).reshape(-1) if n else diag
    return out


def pauli_reconstruct(w: np.ndarray, D: int) -> np.ndarray:
    """(1/D^n) sum w[r, s] X^r Z^s."""
    dim = w.shape[0]
    n = _n_of(dim, D)
    digs = basis_digits(D, n)
    out = np.zeros((dim, dim), dtype=complex)
    for ridx in range(dim):
        for sidx in range(dim):
            c = w[ridx, sidx]
            if abs(c) < 1e-14:
                continue
            P = PauliOp(D, 0, tuple(digs[ridx]), tuple(digs[sidx]))
            out += c * pauli_matrix(P)
    return out / dim


def sector_from_dense(rho: np.ndarray, D: int) -> SectorDistribution:
    """l_j = sum over swt(r, s) = j of |w_{r,s}|^2 (real valued)."""
    w = pauli_decompose(rho, D)
    n = _n_of(rho.shape[0], D)
    nz = basis_digits(D, n) != 0
    weight = (nz[:, None, :] | nz[None, :, :]).sum(axis=2)
    mass = np.abs(w) ** 2
    vals = [float(mass[weight == j].sum()) for j in range(n + 1)]
    return SectorDistribution(D, n, tuple(vals))


def min_pt_eigenvalue(rho: np.ndarray, parties, D: int) -> float:
    return float(hermitian_eigenvalues(partial_transpose(rho, parties, D))[0])


def npt_threshold_bisect(psi: np.ndarray, kind: str, parties, D: int, tol: float = 1e-6) -> float:
    """Largest p for which the noisy state still has a negative partial transpose.

    Bisection on the sign of the smallest partial-transpose eigenvalue; returns
    0 if the pure state is already PPT.
    """
    rho0 = density(psi)

    def neg(p):
        return min_pt_eigenvalue(apply_noise(rho0, kind, p, D), parties, D) < -NPT_TOL

    if not neg(0.0):
        return 0.0
    if neg(1.0):
        return 1.0
    lo, hi = 0.0, 1.0
    while hi - lo > tol / 4:
        mid = 0.5 * (lo + hi)
        if neg(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def schmidt_overlap(psi: np.ndarray, D: int) -> float:
    """Largest squared Schmidt coefficient over all bipartitions (overlap with biseparable states)."""
    n = _n_of(psi.shape[0], D)
    best = 0.0
    t = psi.reshape((D,) * n)
    for mask in range(1, 2 ** (n - 1)):
        A = [i for i in range(n) if (mask >> i) & 1]
        B = [i for i in range(n) if not (mask >> i) & 1]
        M = np.transpose(t, A + B).reshape(D ** len(A), D ** len(B))
        sv = np.linalg.svd(M, compute_uv=False)
        best = max(best, float(sv[0] ** 2))
    return best
