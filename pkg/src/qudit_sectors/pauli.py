"""Generalized Pauli operators on n qudits in the normal form w^q X^r Z^s.

The phase exponent q counts powers of the 2D-th root of unity, so the
qudit phase w_D = exp(2 pi i / D) contributes 2 to q. Conventions:
X|k> = |k+1>, Z|k> = w_D^k |k>, hence Z X = w_D X Z.
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from .ring import SizeGuardError, check_dim, dot_mod, reduce_vec, symplectic_weight

GROUP_GUARD = 2 ** 24


@dataclass(frozen=True)
class PauliOp:
    D: int
    q: int
    r: Tuple[int, ...]
    s: Tuple[int, ...]

    def __post_init__(self):
        check_dim(self.D)
        if len(self.r) != len(self.s):
            raise ValueError("X and Z exponent vectors must have equal length")
        object.__setattr__(self, "q", int(self.q) % (2 * self.D))
        object.__setattr__(self, "r", reduce_vec(self.r, self.D))
        object.__setattr__(self, "s", reduce_vec(self.s, self.D))

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def weight(self) -> int:
        return symplectic_weight(self.r, self.s)

    def is_identity_up_to_phase(self) -> bool:
        return not any(self.r) and not any(self.s)

    def key(self) -> tuple:
        return (self.q, self.r, self.s)

    def __matmul__(self, other: "PauliOp") -> "PauliOp":
        return compose(self, other)

    def __repr__(self) -> str:
        return f"PauliOp(D={self.D}, q={self.q}, r={self.r}, s={self.s})"


def identity(D: int, n: int) -> PauliOp:
    return PauliOp(D, 0, (0,) * n, (0,) * n)


def single(D: int, n: int, site: int, x: int = 0, z: int = 0) -> PauliOp:
    """X^x Z^z acting on one qudit (0-based site)."""
    r = [0] * n
    s = [0] * n
    r[site] = x
    s[site] = z
    return PauliOp(D, 0, tuple(r), tuple(s))


def _check_pair(P: PauliOp, Q: PauliOp):
    if P.D != Q.D:
        raise ValueError(f"dimension mismatch: {P.D} vs {Q.D}")
    if P.n != Q.n:
        raise ValueError(f"length mismatch: {P.n} vs {Q.n}")


def _mul(a: tuple, b: tuple, D: int) -> tuple:
    # raw (q, r, s) product used by the group enumeration
    qa, ra, sa = a
    qb, rb, sb = b
    cross = sum(x * y for x, y in zip(sa, rb))
    q = (qa + qb + 2 * cross) % (2 * D)
    r = tuple((x + y) % D for x, y in zip(ra, rb))
    s = tuple((x + y) % D for x, y in zip(sa, sb))
    return (q, r, s)


def compose(P: PauliOp, Q: PauliOp) -> PauliOp:
    """Normal-form product P.Q: moving Z^s past X^r' costs w_D^(s.r')."""
    _check_pair(P, Q)
    q, r, s = _mul(P.key(), Q.key(), P.D)
    return PauliOp(P.D, q, r, s)


def power(P: PauliOp, k: int) -> PauliOp:
    if k < 0:
        raise ValueError("negative powers are not supported; use k mod order instead")
    out = identity(P.D, P.n)
    base = P
    while k:
        if k & 1:
            out = compose(out, base)
        base = compose(base, base)
        k >>= 1
    return out


def order(P: PauliOp) -> int:
    """Smallest k > 0 with P^k equal to the identity including its phase."""
    ident = identity(P.D, P.n).key()
    cur = P.key()
    k = 1
    while cur != ident:
        cur = _mul(cur, P.key(), P.D)
        k += 1
    return k


def commutation_phase(P: PauliOp, Q: PauliOp) -> int:
    """c with P Q = w_D^c Q P, i.e. (r'.s - r.s') mod D."""
    _check_pair(P, Q)
    D = P.D
    return (dot_mod(Q.r, P.s, D) - dot_mod(P.r, Q.s, D)) % D


@dataclass
class StabilizerGroupSpec:
    D: int
    n: int
    generators: List[PauliOp]
    orders: List[int] = field(default_factory=list)

    def __post_init__(self):
        check_dim(self.D)
        for g in self.generators:
            if g.D != self.D or g.n != self.n:
                raise ValueError("generator does not match the group's D and n")
        if not self.orders:
            self.orders = [order(g) for g in self.generators]


@dataclass(frozen=True)
class GroupVerdict:
    kind: str  # "valid", "not_abelian", "wrong_cardinality", "contains_phase"
    count: Optional[int] = None
    pair: Optional[Tuple[int, int]] = None
    element: Optional[PauliOp] = None

    @property
    def valid(self) -> bool:
        return self.kind == "valid"


def enumerate_group(spec: StabilizerGroupSpec, guard: int = GROUP_GUARD) -> Dict[tuple, None]:
    """Breadth-first closure of the generators, keyed on (q, r, s)."""
    D = spec.D
    start = identity(D, spec.n).key()
    seen = {start: None}
    queue = deque([start])
    gens = [g.key() for g in spec.generators]
    while queue:
        cur = queue.popleft()
        for g in gens:
            nxt = _mul(cur, g, D)
            if nxt not in seen:
                seen[nxt] = None
                if len(seen) > guard:
                    raise SizeGuardError(f"group has more than {guard} elements")
                queue.append(nxt)
    return seen


def _first_noncommuting(gens: Sequence[PauliOp]):
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if commutation_phase(gens[i], gens[j]):
                return (i, j)
    return None


def verify_stabilizer_group(spec: StabilizerGroupSpec, guard: int = GROUP_GUARD) -> GroupVerdict:
    """Check: abelian, exactly D^n elements, no nontrivial multiple of the identity."""
    if spec.D ** spec.n > guard:
        raise SizeGuardError(f"D^n = {spec.D ** spec.n} exceeds guard {guard}")
    pair = _first_noncommuting(spec.generators)
    if pair is not None:
        return GroupVerdict("not_abelian", pair=pair)
    elements = enumerate_group(spec, guard)
    for q, r, s in elements:
        if q and not any(r) and not any(s):
            return GroupVerdict("contains_phase", count=len(elements), element=PauliOp(spec.D, q, r, s))
    count = len(elements)
    if count != spec.D ** spec.n:
        return GroupVerdict("wrong_cardinality", count=count)
    return GroupVerdict("valid", count=count)


def _prime_factors(m: int) -> List[int]:
    out = []
    p = 2
    while p * p <= m:
        if m % p == 0:
            out.append(p)
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out.append(m)
    return out


def _ilog(value: int, p: int) -> int:
    k = 0
    while value > 1:
        if value % p:
            raise ArithmeticError(f"{value} is not a power of {p}")
        value //= p
        k += 1
    return k


def group_structure(spec: StabilizerGroupSpec, guard: int = GROUP_GUARD) -> List[int]:
    """Invariant factors D_1 | D_2 | ... of the generated abelian group.

    For each prime p the counts of elements killed by p^k fix the p-primary
    part: log_p(c_k / c_{k-1}) is the number of cyclic factors of order >= p^k.
    Subgroups with fewer than D^n elements are accepted; non-abelian sets and
    sets generating a phase times the identity are rejected.
    """
    verdict = verify_stabilizer_group(spec, guard)
    if verdict.kind == "not_abelian":
        raise ValueError(f"generators {verdict.pair} do not commute")
    if verdict.kind == "contains_phase":
        raise ValueError(f"group contains a nontrivial phase: {verdict.element}")
    elements = enumerate_group(spec, guard)
    D = spec.D
    orders = []
    ident = identity(D, spec.n).key()
    for e in elements:
        k, cur = 1, e
        while cur != ident:
            cur = _mul(cur, e, D)
            k += 1
        orders.append(k)
    size = len(elements)
    per_prime = {}
    for p in _prime_factors(size):
        exps = []  # exponents of the cyclic p-factors, descending
        prev = 1
        k = 1
        while True:
            pk = p ** k
            c = sum(1 for o in orders if pk % o == 0)
            d = _ilog(c // prev, p)
            if d == 0:
                break
            exps.append(d)
            prev = c
            k += 1
        # exps[k-1] = number of factors with exponent >= k; take the conjugate partition
        parts = [sum(1 for d in exps if d >= i) for i in range(1, exps[0] + 1)] if exps else []
        per_prime[p] = sorted(parts, reverse=True)
    width = max((len(v) for v in per_prime.values()), default=0)
    factors = [1] * width
    for p, parts in per_prime.items():
        for i, e in enumerate(parts):
            factors[i] *= p ** e
    return sorted(factors)


def ghz_stabilizer_spec(D: int, n: int) -> StabilizerGroupSpec:
    """Generators X^{(x)n} and Z_{i-1} Z_i^{-1} of the n-qudit GHZ state."""
    check_dim(D)
    gens = [PauliOp(D, 0, (1,) * n, (0,) * n)]
    for i in range(1, n):
        s = [0] * n
        s[i - 1] = 1
        s[i] = D - 1
        gens.append(PauliOp(D, 0, (0,) * n, tuple(s)))
    return StabilizerGroupSpec(D, n, gens)
