"""Upper bounds on sector lengths of (n_1, ..., n_k)-separable states.

A single block of m qudits obeys l_j <= D^m - 1 for j >= 1. Product states
convolve their sector vectors, so the bound for a partition is the
convolution of the single-block bounds.
"""

import csv
import io
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import List, Sequence, Tuple

from .ring import SizeGuardError, check_dim

PARTITION_GUARD = 30
MODES = ("generic", "qubit_tight")

Partition = Tuple[int, ...]


@dataclass(frozen=True)
class SeparabilityBound:
    D: int
    partition: Partition
    values: Tuple[int, ...]
    mode: str = "generic"

    def __getitem__(self, j: int) -> int:
        return self.values[j]

    @property
    def n(self) -> int:
        return sum(self.partition)


def enumerate_partitions(n: int) -> List[Partition]:
    """All partitions of n, parts non-increasing, in reverse lexicographic order."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > PARTITION_GUARD:
        raise SizeGuardError(f"partition enumeration is limited to n <= {PARTITION_GUARD}")
    out = []

    def rec(rest: int, cap: int, prefix: list):
        if rest == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(rest, cap), 0, -1):
            prefix.append(part)
            rec(rest - part, part, prefix)
            prefix.pop()

    rec(n, n, [])
    return out


def canonical_partition(parts: Sequence[int]) -> Partition:
    p = tuple(sorted((int(x) for x in parts), reverse=True))
    if not p or p[-1] < 1:
        raise ValueError(f"invalid partition {parts!r}")
    return p


def block_bound(D: int, m: int, mode: str = "generic") -> Tuple[int, ...]:
    """b_0..b_m for a single block of m qudits."""
    vals = [1] + [D ** m - 1] * m
    if mode == "qubit_tight":
        # largest full-body sector length of any m-qubit state
        vals[m] = 2 ** (m - 1) + (1 if m % 2 == 0 else 0)
    return tuple(vals)


def _convolve(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return tuple(out)


@lru_cache(maxsize=None)
def _bound_values(D: int, partition: Partition, mode: str) -> Tuple[int, ...]:
    if len(partition) == 1:
        return block_bound(D, partition[0], mode)
    head = _bound_values(D, partition[:1], mode)
    tail = _bound_values(D, partition[1:], mode)
    return _convolve(head, tail)


def bound(D: int, partition: Sequence[int], mode: str = "generic") -> SeparabilityBound:
    """b_j^P = sum over j_1 + ... + j_k = j of prod_i b_{j_i}^{(n_i)}."""
    check_dim(D)
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "qubit_tight" and D != 2:
        raise ValueError("qubit_tight bounds need D = 2")
    P = canonical_partition(partition)
    return SeparabilityBound(D, P, _bound_values(D, P, mode), mode)


def fully_separable_bound(D: int, n: int, j: int) -> int:
    """C(n, j) (D-1)^j."""
    check_dim(D)
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    return comb(n, j) * (D - 1) ** j


def refines(P: Sequence[int], Q: Sequence[int]) -> bool:
    """True when the parts of P can be grouped to form the parts of Q."""
    P = sorted(P, reverse=True)
    Q = sorted(Q, reverse=True)
    if sum(P) != sum(Q):
        return False

    def fit(i: int, bins: List[int]) -> bool:
        if i == len(P):
            return all(b == 0 for b in bins)
        tried = set()
        for k, room in enumerate(bins):
            if room >= P[i] and room not in tried:
                tried.add(room)
                bins[k] -= P[i]
                if fit(i + 1, bins):
                    return True
                bins[k] += P[i]
        return False

    return fit(0, list(Q))


def format_partition(P: Sequence[int]) -> str:
    return "(" + ",".join(str(x) for x in P) + ")"


def bounds_csv(D: int, n: int, mode: str = "generic") -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["D", "partition", "j", "bound", "mode"])
    for P in enumerate_partitions(n):
        b = bound(D, P, mode)
        for j, v in enumerate(b.values):
            w.writerow([D, format_partition(P), j, v, mode])
    return buf.getvalue()
