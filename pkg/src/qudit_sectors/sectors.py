"""Sector lengths of stabilizer and graph states.

For a graph state the stabilizer X^r Z^{Gamma r} acts on swt(r, Gamma r)
qudits, so the j-body sector length counts the exponent vectors r of that
weight. Everything in this module is exact integer arithmetic.
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, gcd
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .graphs import AdjacencyMatrix
from .pauli import GROUP_GUARD, StabilizerGroupSpec, enumerate_group, verify_stabilizer_group
from .ring import SizeGuardError, check_dim, gcd_with_dim, symplectic_weight

BRUTE_GUARD = 2 ** 28
LISTING_MAX_N = 20
THREADS_ENV = "QUDIT_SECTORS_THREADS"


@dataclass(frozen=True)
class SectorDistribution:
    """l_0..l_n for one state. Entries are ints for exact counts, reals after
    damping, or None where a noise model leaves them undefined."""

    D: int
    n: int
    values: tuple

    def __post_init__(self):
        check_dim(self.D)
        if len(self.values) != self.n + 1:
            raise ValueError(f"expected {self.n + 1} sector lengths, got {len(self.values)}")
        object.__setattr__(self, "values", tuple(self.values))

    def __getitem__(self, j):
        return self.values[j]

    def __len__(self):
        return len(self.values)

    @property
    def full_body(self):
        return self.values[self.n]

    def total(self):
        return sum(v for v in self.values if v is not None)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _block_size(D: int, n: int, target: int = 1 << 15) -> int:
    L = 0
    while L < n and D ** (L + 1) <= target:
        L += 1
    return max(L, 1) if n else 0


# ---------------------------------------------------------------- qubits


def _bit_columns(G: AdjacencyMatrix) -> List[int]:
    # bit i of column k is gamma_{i,k}; vertex i sits at bit i
    return [sum(1 << i for i in range(G.n) if G.gamma[i][k]) for k in range(G.n)]


def _xor_table(cols: Sequence[int]) -> np.ndarray:
    """table[m] = XOR of cols[k] over the set bits k of m."""
    table = np.zeros(1, dtype=np.uint64)
    for c in cols:
        table = np.concatenate([table, table ^ np.uint64(c)])
    return table


def _qubit_histogram(G: AdjacencyMatrix, lo: int, hi: int, L: int, low_table: np.ndarray,
                     cols: Sequence[int]) -> np.ndarray:
    n = G.n
    counts = np.zeros(n + 1, dtype=np.int64)
    low = np.arange(1 << L, dtype=np.uint64)
    # Gamma r for the high prefix, updated incrementally on each counter step
    s_high = 0
    for k in range(n - L):
        if (lo >> k) & 1:
            s_high ^= cols[L + k]
    h = lo
    while h < hi:
        r = low | np.uint64(h << L)
        w = np.bitwise_count(r | (low_table ^ np.uint64(s_high)))
        counts += np.bincount(w, minlength=n + 1)
        # binary increment: every flipped bit adds its column
        k = 0
        while k < n - L and (h >> k) & 1:
            s_high ^= cols[L + k]
            k += 1
        if k < n - L:
            s_high ^= cols[L + k]
        h += 1
    return counts


def _sector_qubit(G: AdjacencyMatrix, workers: int) -> List[int]:
    n = G.n
    cols = _bit_columns(G)
    L = min(n, 16)
    low_table = _xor_table(cols[:L])
    n_high = 1 << (n - L)
    chunks = _chunks(n_high, workers)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda c: _qubit_histogram(G, c[0], c[1], L, low_table, cols), chunks))
    else:
        parts = [_qubit_histogram(G, a, b, L, low_table, cols) for a, b in chunks]
    total = sum(parts)
    return [int(x) for x in total]


# ---------------------------------------------------------------- general D


def _digit_table(D: int, L: int) -> np.ndarray:
    """All vectors of (Z/DZ)^L as rows, first position most significant."""
    if L == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((D,) * L).reshape(L, -1).T
    return grids.astype(np.int64)


def _general_histogram(G: AdjacencyMatrix, lo: int, hi: int, L: int, low_r: np.ndarray,
                       low_s: np.ndarray) -> np.ndarray:
    D, n = G.D, G.n
    H = n - L
    gam = G.array()
    counts = np.zeros(n + 1, dtype=np.int64)
    low_nz = low_r != 0
    # high digit t sits at position L + t; t = 0 is the least significant
    digs = [0] * H
    x = lo
    for t in range(H):
        x, digs[t] = divmod(x, D)
    s_high = np.zeros(n, dtype=np.int64)
    for t in range(H):
        s_high = (s_high + digs[t] * gam[L + t]) % D
    for _ in range(lo, hi):
        S = (low_s + s_high) % D
        w = (low_nz | (S[:, :L] != 0)).sum(axis=1)
        if H:
            high_nz = np.array(digs, dtype=np.int64) != 0
            w = w + (high_nz[None, :] | (S[:, L:] != 0)).sum(axis=1)
        counts += np.bincount(w, minlength=n + 1)
        # base-D increment; each digit step adds one row of Gamma (the wrap to 0 is free mod D)
        t = 0
        while t < H:
            digs[t] += 1
            s_high = (s_high + gam[L + t]) % D
            if digs[t] < D:
                break
            digs[t] = 0
            t += 1
    return counts


def _sector_general(G: AdjacencyMatrix, workers: int) -> List[int]:
    D, n = G.D, G.n
    L = min(n, _block_size(D, n))
    gam = G.array()
    low_r = _digit_table(D, L)
    low_s = (low_r @ gam[:L, :]) % D
    n_high = D ** (n - L)
    chunks = _chunks(n_high, workers)
    if workers > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda c: _general_histogram(G, c[0], c[1], L, low_r, low_s), chunks))
    else:
        parts = [_general_histogram(G, a, b, L, low_r, low_s) for a, b in chunks]
    total = sum(parts)
    return [int(x) for x in total]


def _chunks(total: int, workers: int) -> List[Tuple[int, int]]:
    parts = max(1, min(total, workers * 4 if workers > 1 else 1))
    step = -(-total // parts)
    return [(a, min(a + step, total)) for a in range(0, total, step)]


def sector_brute(G: AdjacencyMatrix, guard: int = BRUTE_GUARD, workers: Optional[int] = None,
                 method: str = "auto") -> SectorDistribution:
    """Histogram of swt(r, Gamma r) over all r in (Z/DZ)^n.

    method "auto" uses bitmasks for qubits and digit arrays otherwise;
    "digits" forces the general path (used to cross-check the qubit path).
    """
    D, n = G.D, G.n
    if D ** n > guard:
        raise SizeGuardError(f"D^n = {D ** n} exceeds the enumeration guard {guard}")
    workers = workers or _threads()
    if D == 2 and method == "auto" and n <= 63:
        vals = _sector_qubit(G, workers)
    else:
        vals = _sector_general(G, workers)
    return SectorDistribution(D, n, tuple(vals))


def sector_from_group(spec: StabilizerGroupSpec, guard: int = GROUP_GUARD) -> SectorDistribution:
    """Histogram of the weights of every element of a valid stabilizer group."""
    verdict = verify_stabilizer_group(spec, guard)
    if not verdict.valid:
        raise ValueError(f"not a stabilizer group: {verdict.kind}")
    counts = [0] * (spec.n + 1)
    for _, r, s in enumerate_group(spec, guard):
        counts[symplectic_weight(r, s)] += 1
    return SectorDistribution(spec.D, spec.n, tuple(counts))


# ---------------------------------------------------------------- closed forms


def ghz_analytic(D: int, n: int) -> SectorDistribution:
    check_dim(D)
    if n < 2:
        raise ValueError("GHZ needs n >= 2")
    vals = []
    for j in range(n + 1):
        num = comb(n, j) * ((D - 1) ** j + (-1) ** j * (D - 1))
        q, rem = divmod(num, D)
        assert rem == 0
        vals.append(q + ((D - 1) * D ** (n - 1) if j == n else 0))
    return SectorDistribution(D, n, tuple(vals))


def ame4_analytic(D: int) -> SectorDistribution:
    check_dim(D)
    if D % 2 == 0:
        raise ValueError("the four-qudit AME ring formula needs odd D")
    return SectorDistribution(D, 4, (1, 0, 0, 4 * (D * D - 1), (D * D - 1) * (D * D - 3)))


def ring_pair_count(n: int, k: int) -> int:
    """N(n, k) = C(n-2k-1, k-1) n / k: placements of k white pairs on an n-ring."""
    if n < 3:
        raise ValueError("ring needs n >= 3")
    if not 1 <= k <= n // 3:
        raise ValueError(f"k must lie in 1..{n // 3}")
    num = comb(n - 2 * k - 1, k - 1) * n
    q, rem = divmod(num, k)
    assert rem == 0
    return q


def _line_full_body(n: int) -> int:
    # a_n = a_{n-1} + a_{n-3} with a_1, a_2, a_3 = 1, 3, 4
    seq = [1, 3, 4]
    while len(seq) < n:
        seq.append(seq[-1] + seq[-3])
    return seq[n - 1]


def family_full_body(kind: str, n: int) -> int:
    """Closed-form full-body sector length of the qubit families."""
    if kind == "star":
        if n < 2:
            raise ValueError("star needs n >= 2")
        return 2 ** (n - 1) + (1 if n % 2 == 0 else 0)
    if kind == "dandelion":
        if n < 5:
            raise ValueError("dandelion needs n >= 5")
        return 5 * 2 ** (n - 4) + (4 if n % 2 == 0 else 0)
    if kind == "line":
        if n < 1:
            raise ValueError("line needs n >= 1")
        return _line_full_body(n)
    if kind == "ring":
        if n < 3:
            raise ValueError("ring needs n >= 3")
        return 1 + sum(ring_pair_count(n, k) for k in range(1, n // 3 + 1))
    raise ValueError(f"no closed form for family {kind!r}")


# ---------------------------------------------------------------- puzzle


def puzzle_colorings(G: AdjacencyMatrix, list_solutions: bool = False):
    """Count colourings where every white vertex has an odd number of black neighbours.

    Returns (count, colourings); colourings are bitstrings with vertex 1 first
    and '1' meaning black, or None when not requested.
    """
    if G.D != 2:
        raise ValueError("the colouring puzzle is defined for qubit graphs")
    n = G.n
    if list_solutions and n > LISTING_MAX_N:
        raise SizeGuardError(f"listing colourings is limited to n <= {LISTING_MAX_N}")
    if n > 63:
        raise SizeGuardError("bitmask enumeration needs n <= 63")
    cols = _bit_columns(G)
    full = (1 << n) - 1
    L = min(n, 16)
    table = _xor_table(cols[:L])
    low = np.arange(1 << L, dtype=np.uint64)
    count = 0
    found = []
    for h in range(1 << (n - L)):
        parity = 0
        for k in range(n - L):
            if (h >> k) & 1:
                parity ^= cols[L + k]
        black = low | np.uint64(h << L)
        odd = table ^ np.uint64(parity)
        white = np.uint64(full) & ~black
        ok = (white & ~odd) == 0
        count += int(ok.sum())
        if list_solutions:
            for m in black[ok].tolist():
                found.append("".join("1" if (m >> i) & 1 else "0" for i in range(n)))
    return count, (sorted(found) if list_solutions else None)


# ---------------------------------------------------------------- combination


def tensor_convolve(a: SectorDistribution, b: SectorDistribution) -> SectorDistribution:
    """Sector lengths of a tensor product: convolution of the two vectors."""
    if a.D != b.D:
        raise ValueError(f"dimension mismatch: {a.D} vs {b.D}")
    out = [0] * (a.n + b.n + 1)
    for i, x in enumerate(a.values):
        for j, y in enumerate(b.values):
            out[i + j] += x * y
    return SectorDistribution(a.D, a.n + b.n, tuple(out))


def trivial_distribution(D: int) -> SectorDistribution:
    """Zero-qudit distribution (1,), the unit of tensor_convolve."""
    return SectorDistribution(D, 0, (1,))


def purity_from_sectors(d: SectorDistribution):
    """Tr rho^2 = sum_j l_j / D^n; a Fraction when every entry is exact."""
    if any(v is None for v in d.values):
        raise ValueError("purity needs every sector length")
    total = sum(d.values)
    if all(isinstance(v, (int, Fraction)) for v in d.values):
        return Fraction(total) / d.D ** d.n
    return total / d.D ** d.n


# ---------------------------------------------------------------- lower bound on l_n


def _gcd_profile(gammas: Sequence[int], D: int) -> Tuple[int, ...]:
    return tuple(sorted(gcd_with_dim(g, D) for g in gammas))


@lru_cache(maxsize=None)
def _n_recursive(D: int, profile: Tuple[int, ...]) -> int:
    """N_m for a multiset of gcds via the subset recurrence.

    Subsets are grouped by sub-multiset, weighted by the product of binomials.
    """
    m = len(profile)
    if m == 0:
        return 0
    g = D
    for x in profile:
        g = gcd(g, x)
    total = D ** (m - 1) * (D - g)
    values = sorted(set(profile))
    mult = [profile.count(v) for v in values]
    for take in product(*(range(c + 1) for c in mult)):
        k = sum(take)
        if k == 0 or k == m:
            continue
        ways = 1
        for c, t in zip(mult, take):
            ways *= comb(c, t)
        sub = tuple(v for v, t in zip(values, take) for _ in range(t))
        total -= ways * _n_recursive(D, sub)
    return total


def n_nonzero_count(gammas: Sequence[int], D: int) -> int:
    """N_m(gamma): vectors r with all r_j != 0 and sum gamma_j r_j != 0."""
    return _n_recursive(D, _gcd_profile(gammas, D))


def n_nonzero_explicit(m: int, D: int) -> int:
    """N_m when every gamma_j is invertible: ((D-1)^{m+1} + (-1)^{m+1}(D-1)) / D."""
    num = (D - 1) ** (m + 1) + (-1) ** (m + 1) * (D - 1)
    q, rem = divmod(num, D)
    assert rem == 0
    return q


def n_nonzero_brute(gammas: Sequence[int], D: int) -> int:
    m = len(gammas)
    return sum(1 for r in product(range(1, D), repeat=m) if sum(g * x for g, x in zip(gammas, r)) % D)


def full_body_lower_bound(G: AdjacencyMatrix) -> int:
    """(D-1)^n + sum_i (D-1)^{n-1-m_i} N_{m_i}(weights around i)."""
    D, n = G.D, G.n
    bound = (D - 1) ** n
    for i in range(n):
        nbrs = G.neighbors(i)
        m = len(nbrs)
        if m == 0:
            continue
        weights = [G.gamma[i][j] for j in nbrs]
        N = n_nonzero_count(weights, D)
        if all(gcd_with_dim(w, D) == 1 for w in weights):
            explicit = n_nonzero_explicit(m, D)
            if explicit != N:
                raise ArithmeticError(f"N_{m} recurrence {N} disagrees with closed form {explicit}")
        bound += (D - 1) ** (n - 1 - m) * N
    return bound


# ---------------------------------------------------------------- GHZ weight counts


def ghz_f_recursive(D: int, n: int) -> List[int]:
    """f_0..f_n with f_0 = 1 and f_m = D^{m-1} - sum_{j<m} C(m,j) f_j."""
    f = [1]
    for m in range(1, n + 1):
        f.append(D ** (m - 1) - sum(comb(m, j) * f[j] for j in range(m)))
    return f


def ghz_coefficients_recursive(n: int) -> List[int]:
    """Coefficients a_0..a_{n-1} of f_n(D) from the vector recursion.

    Seeded with a^{(0)} = (1,), the constant polynomial f_0 = 1.
    """
    a = [[1]]
    for m in range(1, n + 1):
        vec = [0] * m
        vec[m - 1] = 1
        for j in range(m):
            for i, c in enumerate(a[j]):
                vec[i] -= comb(m, j) * c
        a.append(vec)
    return a[n]


def ghz_coefficients_explicit(n: int) -> List[int]:
    """a_i^{(n)} = (-1)^n [i = 0] + (-1)^{n+i+1} C(n, i+1)."""
    if n == 0:
        return [1]
    return [(-1) ** n * (i == 0) + (-1) ** (n + i + 1) * comb(n, i + 1) for i in range(n)]


def ghz_weight_counts(D: int, n: int) -> List[int]:
    """k^n_j = C(n,j) f_j(D), the Z-only GHZ stabilizers of weight j.

    Computed by the scalar recursion and by the explicit coefficients; they must agree.
    """
    check_dim(D)
    if n < 1:
        raise ValueError("n must be >= 1")
    f_rec = ghz_f_recursive(D, n)
    out = []
    for j in range(n + 1):
        coeffs = ghz_coefficients_explicit(j)
        f_exp = sum(c * D ** i for i, c in enumerate(coeffs))
        if f_exp != f_rec[j]:
            raise ArithmeticError(f"f_{j}({D}): recursion {f_rec[j]} vs explicit {f_exp}")
        out.append(comb(n, j) * f_rec[j])
    return out


# ---------------------------------------------------------------- output


def distribution_csv(dists: Sequence[SectorDistribution]) -> str:
    n_max = max(d.n for d in dists)
    head = "D,n," + ",".join(f"l{j}" for j in range(n_max + 1))
    rows = [head]
    for d in dists:
        rows.append(",".join([str(d.D), str(d.n)] + [_fmt(v) for v in d.values]))
    return "\n".join(rows) + "\n"


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, int):
        return str(v)
    return f"{float(v):.12g}"
