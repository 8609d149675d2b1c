"""Arithmetic over Z/DZ and small vector helpers shared by the other modules."""

import numbers
from math import gcd
from typing import Optional, Sequence


def check_dim(D: int) -> int:
    if not isinstance(D, numbers.Integral) or isinstance(D, bool) or D < 2:
        raise ValueError(f"qudit dimension must be an integer >= 2, got {D!r}")
    return int(D)


def reduce_vec(v: Sequence[int], D: int) -> tuple:
    """Canonical representative of every entry in [0, D)."""
    return tuple(int(x) % D for x in v)


def mod_inverse(x: int, D: int) -> Optional[int]:
    """Inverse of x modulo D, or None when gcd(x, D) != 1."""
    check_dim(D)
    x %= D
    if gcd(x, D) != 1:
        return None
    return pow(x, -1, D)


def gcd_with_dim(gamma: int, D: int) -> int:
    """gcd(D, gamma) with the convention gcd(D, 0) = D."""
    check_dim(D)
    return gcd(D, gamma % D)


def gcd_many(values: Sequence[int], D: int) -> int:
    """gcd of D and all given ring elements."""
    g = D
    for v in values:
        g = gcd(g, v % D)
    return g


def symplectic_weight(r: Sequence[int], s: Sequence[int], D: Optional[int] = None) -> int:
    """Number of positions i where r_i or s_i is nonzero (mod D if given)."""
    if len(r) != len(s):
        raise ValueError(f"length mismatch: {len(r)} vs {len(s)}")
    if D is None:
        return sum(1 for a, b in zip(r, s) if a or b)
    return sum(1 for a, b in zip(r, s) if a % D or b % D)


def dot_mod(a: Sequence[int], b: Sequence[int], D: int) -> int:
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b)) % D


def digits(index: int, D: int, n: int) -> tuple:
    """Base-D digits of index, most significant first (qudit 1 is the leading digit)."""
    out = [0] * n
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, D)
    return tuple(out)


def from_digits(ds: Sequence[int], D: int) -> int:
    idx = 0
    for d in ds:
        idx = idx * D + d
    return idx


class SizeGuardError(ValueError):
    """Raised when an enumeration or dense construction would exceed its size guard."""
