"""White-noise thresholds for stabilizer and graph states.

Two noise models are supported: global white noise mixes the whole state
with 1/D^n, local white noise depolarizes every qudit independently. Each
threshold is the largest p for which a criterion still certifies
entanglement (or non-separability for a given partition).
"""

import csv
import io
import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .bounds import bound, canonical_partition, format_partition
from .graphs import AdjacencyMatrix, gcd_reduce, make_family, read_graph
from .ring import SizeGuardError, check_dim, gcd_with_dim
from .sectors import SectorDistribution, sector_brute

MODELS = ("global_white", "local_white")
_MODEL_ALIASES = {"global": "global_white", "local": "local_white",
                  "global_white": "global_white", "local_white": "local_white"}

GLOBAL_CRITERIA = ("sector", "ppt", "ppt_gcd", "reduction", "entropy", "witness", "huber", "posmap")
LOCAL_CRITERIA = ("sector", "ppt_local", "distillation")
CRITERIA = tuple(dict.fromkeys(GLOBAL_CRITERIA + LOCAL_CRITERIA))

OVERLAP_GUARD = 2 ** 20


def model_kind(kind: str) -> str:
    try:
        return _MODEL_ALIASES[kind]
    except KeyError:
        raise ValueError(f"unknown noise model {kind!r}; use global or local") from None


@dataclass(frozen=True)
class NoiseModel:
    kind: str
    p: object = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", model_kind(self.kind))
        if not 0 <= self.p <= 1:
            raise ValueError(f"p = {self.p} is not a probability")


# ---------------------------------------------------------------- damping law


def damp_sector(d: SectorDistribution, model: NoiseModel) -> SectorDistribution:
    """Sector lengths of the noisy state.

    Global noise scales every l_j with j >= 1 by (1-p)^2. Local noise is only
    resolved for the full body, scaled by (1-p)^(2n); other entries are None.
    """
    keep = 1 - model.p
    if model.kind == "global_white":
        vals = [d.values[0]] + [v * keep ** 2 for v in d.values[1:]]
        return SectorDistribution(d.D, d.n, tuple(vals))
    vals = [None] * (d.n + 1)
    vals[0] = d.values[0]
    if d.n == 0:
        return SectorDistribution(d.D, 0, tuple(vals))
    vals[d.n] = d.values[d.n] * keep ** (2 * d.n)
    return SectorDistribution(d.D, d.n, tuple(vals))


def damped_value(d: SectorDistribution, model: NoiseModel, j: int):
    """One damped sector length; local noise below the full body is an error."""
    if model.kind == "local_white" and 0 < j < d.n:
        raise ValueError("local white noise only determines the full-body sector length")
    return damp_sector(d, model).values[j]


# ---------------------------------------------------------------- sector criterion


def sector_threshold(ell: int, b: int, kind: str, n: int) -> float:
    """Noise level below which l_j of the noisy state still exceeds the bound b.

    global: 1 - sqrt(b / l). local (full body only): 1 - (b / l)^(1/(2n)).
    Returns 0 when b >= l.
    """
    kind = model_kind(kind)
    if ell <= 0:
        raise ValueError("sector length must be positive")
    if b >= ell:
        return 0.0
    if b <= 0:
        return 1.0
    root = 2 if kind == "global_white" else 2 * n
    # logs keep huge integer sector lengths from underflowing the ratio
    return -math.expm1((math.log(b) - math.log(ell)) / root)


# ---------------------------------------------------------------- PPT, reduction, entropy


def ppt_threshold_global(D: int, n: int) -> Fraction:
    """1 - 1/(D^(n-1) + 1), valid for any graph state with a nonzero adjacency matrix."""
    check_dim(D)
    if n < 2:
        raise ValueError("n must be >= 2")
    return 1 - Fraction(1, D ** (n - 1) + 1)


def ppt_threshold_gcd(G: AdjacencyMatrix) -> Fraction:
    """Improved threshold 1 - 1/(d^(ng-1) + 1) after splitting each qudit by g = gcd(D, weights)."""
    _, g, d = gcd_reduce(G)
    return 1 - Fraction(1, d ** (G.n * g - 1) + 1)


def reduction_threshold_global(D: int, n: int) -> Fraction:
    """Reduction criterion: the eigenvalue (1-1/D)(p(1+1/D^(n-1)) - 1) is negative below this p."""
    check_dim(D)
    if n < 2:
        raise ValueError("n must be >= 2")
    return Fraction(D ** (n - 1), D ** (n - 1) + 1)


def global_spectrum(D: int, n: int, p: float) -> List[Tuple[float, int]]:
    """(eigenvalue, multiplicity) of a noisy pure state on n qudits."""
    dim = D ** n
    return [(1 - p + p / dim, 1), (p / dim, dim - 1)]


def reduced_spectrum(D: int, n: int, p: float) -> List[Tuple[float, int]]:
    """Spectrum after tracing out one qudit joined to the rest by an invertible edge."""
    rest = D ** (n - 1)
    return [((1 - p) / D + p / rest, D), (p / rest, rest - D)]


def spectrum_entropy(spec: Iterable[Tuple[float, int]]) -> float:
    total = 0.0
    for lam, mult in spec:
        if mult and lam > 0:
            total -= mult * lam * math.log2(lam)
    return total


def entropy_threshold_global(D: int, n: int, tol: float = 1e-9) -> float:
    """p at which S[rho] = S[Tr_A rho]; below it S[rho] < S[Tr_A rho]."""
    check_dim(D)
    if n < 2:
        raise ValueError("n must be >= 2")

    def gap(p):
        return spectrum_entropy(global_spectrum(D, n, p)) - spectrum_entropy(reduced_spectrum(D, n, p))

    lo, hi = 0.0, 1.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if gap(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------- literature thresholds


def witness_gme_threshold(D: int, n: int, alpha) -> object:
    """D^n/(D^n - 1) (1 - alpha), clamped to [0, 1]; exact when alpha is rational."""
    check_dim(D)
    if not 0 < alpha < 1:
        raise ValueError("alpha must lie strictly between 0 and 1")
    dim = D ** n
    if isinstance(alpha, (int, Fraction)):
        val = Fraction(dim, dim - 1) * (1 - Fraction(alpha))
    else:
        val = dim / (dim - 1) * (1 - alpha)
    return min(max(val, 0), 1)


def huber_threshold(D: int, n: int, gamma: int) -> Fraction:
    """1 - gamma/(gamma + D^(n-1)); gamma = 1, n, 2^(n-1)-1 for full, semi and biseparability."""
    check_dim(D)
    if gamma < 1:
        raise ValueError("gamma must be >= 1")
    return 1 - Fraction(gamma, gamma + D ** (n - 1))


def posmap_gme_threshold(D: int, n: int) -> Fraction:
    check_dim(D)
    if n < 2:
        raise ValueError("n must be >= 2")
    a = 1 + (D - 2) * (2 ** (n - 1) - 1)
    return 1 - Fraction(a, a + (D - 2) * D ** (n - 1))


def _ghz_local_ppt_general(D: int, n: int) -> float:
    a = 4 ** (1 / n) + 2 ** (1 / n) * math.sqrt(4 + (2 * D) ** (1 / n))
    return 1 - a / (a + 2 * D)


def _ghz_local_ppt_qubit(n: int) -> float:
    return 1 - 1 / math.sqrt(2 ** (2 - 2 / n) + 1)


def ghz_local_ppt_threshold(D: int, n: int) -> float:
    """Local-noise PPT threshold of the n-qudit GHZ state.

    For qubits the general expression is checked against its simplified form.
    """
    check_dim(D)
    if n < 2:
        raise ValueError("n must be >= 2")
    val = _ghz_local_ppt_general(D, n)
    if D == 2:
        alt = _ghz_local_ppt_qubit(n)
        if abs(val - alt) > 1e-12:
            raise ArithmeticError(f"qubit forms disagree: {val} vs {alt}")
    return val


def distillation_local_threshold(m_i: int, m_j: int) -> float:
    """1 - 2^(-2/(m_i + m_j + 2)) for neighbouring vertices of degrees m_i, m_j."""
    if m_i < 1 or m_j < 1:
        raise ValueError("degrees must be >= 1")
    return 1 - 2 ** (-2 / (m_i + m_j + 2))


def graph_distillation_threshold(G: AdjacencyMatrix) -> float:
    """Distillation threshold using the largest degree sum over all edges."""
    if G.D != 2:
        raise ValueError("the distillation threshold is stated for qubit graphs")
    edges = G.edges()
    if not edges:
        raise ValueError("graph has no edges")
    deg = G.degrees()
    worst = max(deg[i] + deg[j] for i, j, _ in edges)
    return 1 - 2 ** (-2 / (worst + 2))


def _image_size(G: AdjacencyMatrix, A: Sequence[int], B: Sequence[int]) -> int:
    D = G.D
    if len(A) > len(B):
        A, B = B, A
    if D ** len(A) > OVERLAP_GUARD:
        raise SizeGuardError("bipartition too large for image enumeration")
    rows = [[G.gamma[a][b] for b in B] for a in A]
    seen = set()
    for idx in range(D ** len(A)):
        vec = [0] * len(B)
        x = idx
        for row in rows:
            c = x % D
            x //= D
            if c:
                for k, w in enumerate(row):
                    vec[k] += c * w
        seen.add(tuple(v % D for v in vec))
    return len(seen)


def graph_biseparable_overlap(G: AdjacencyMatrix) -> Fraction:
    """Largest squared Schmidt coefficient of |G> over all bipartitions.

    Across A|B the Schmidt coefficients are flat with rank |image of Gamma_AB|.
    """
    n = G.n
    if n < 2:
        raise ValueError("need at least two qudits")
    smallest = None
    for mask in range(1, 2 ** (n - 1)):
        A = [i for i in range(n) if (mask >> i) & 1]
        B = [i for i in range(n) if not (mask >> i) & 1]
        size = _image_size(G, A, B)
        smallest = size if smallest is None else min(smallest, size)
    return Fraction(1, smallest)


# ---------------------------------------------------------------- reports


@dataclass(frozen=True)
class ThresholdReport:
    state: str
    D: int
    n: int
    model: str
    criterion: str
    partition: Optional[str]
    p_crit: float

    def __post_init__(self):
        if not 0 <= self.p_crit <= 1:
            raise ValueError(f"p_crit = {self.p_crit} outside [0, 1]")

    def as_dict(self) -> Dict[str, object]:
        return {
            "state": self.state,
            "D": self.D,
            "n": self.n,
            "model": self.model,
            "criterion": self.criterion,
            "partition": self.partition,
            "p_crit": float(f"{float(self.p_crit):.12g}"),
        }


@dataclass(frozen=True)
class ResolvedState:
    label: str
    graph: AdjacencyMatrix
    sectors: SectorDistribution
    ghz_like: bool
    alpha: Optional[Fraction] = None

    @property
    def D(self) -> int:
        return self.graph.D

    @property
    def n(self) -> int:
        return self.graph.n


def _ints(text: str, count: int, spec: str) -> List[int]:
    parts = text.split(",")
    if len(parts) != count:
        raise ValueError(f"state {spec!r}: expected {count} comma-separated values")
    return [int(x) for x in parts]


def resolve_state(spec: str) -> ResolvedState:
    """Parse ghz:D,n | ame4:D | family:KIND,n,D | graph:PATH.

    GHZ states are represented by the star graph, which is locally equivalent.
    """
    kind, sep, rest = spec.partition(":")
    if not sep:
        raise ValueError(f"state {spec!r} lacks a kind prefix")
    if kind == "ghz":
        D, n = _ints(rest, 2, spec)
        G = make_family("star", n, D)
        return ResolvedState(spec, G, sector_brute(G), True, Fraction(1, D))
    if kind == "ame4":
        (D,) = _ints(rest, 1, spec)
        G = make_family("ame4_ring", 4, D)
        return ResolvedState(spec, G, sector_brute(G), False)
    if kind == "family":
        parts = rest.split(",")
        if len(parts) != 3:
            raise ValueError(f"state {spec!r}: expected family:KIND,n,D")
        fam, n, D = parts[0], int(parts[1]), int(parts[2])
        G = make_family(fam, n, D)
        return ResolvedState(spec, G, sector_brute(G), fam == "star")
    if kind == "graph":
        G = read_graph(rest)
        return ResolvedState(spec, G, sector_brute(G), False)
    raise ValueError(f"unknown state kind {kind!r}")


def report_partitions(n: int) -> List[Tuple[int, ...]]:
    """(1,...,1), (j,1,...,1) for j = 2..4, and (n-1,1); duplicates removed."""
    out = [(1,) * n]
    for j in range(2, 5):
        if j < n:
            out.append(canonical_partition((j,) + (1,) * (n - j)))
    if n >= 2:
        out.append(canonical_partition((n - 1, 1)))
    return list(dict.fromkeys(out))


def _sector_reports(st: ResolvedState, kind: str) -> List[ThresholdReport]:
    D, n = st.D, st.n
    mode = "qubit_tight" if D == 2 else "generic"
    out = []
    for P in report_partitions(n):
        b = bound(D, P, mode)
        if kind == "global_white":
            cands = [sector_threshold(st.sectors[j], b[j], kind, n)
                     for j in range(1, n + 1) if st.sectors[j] > 0]
            p = max(cands, default=0.0)
        else:
            ell = st.sectors.full_body
            p = sector_threshold(ell, b[n], kind, n) if ell > 0 else 0.0
        out.append(ThresholdReport(st.label, D, n, kind, "sector", format_partition(P), p))
    return out


def _has_invertible_edge(G: AdjacencyMatrix) -> bool:
    return any(gcd_with_dim(w, G.D) == 1 for _, _, w in G.edges())


def threshold_table(st: ResolvedState, model: str, criteria: Optional[Sequence[str]] = None) -> List[ThresholdReport]:
    """One report per (criterion, partition) for the requested noise model."""
    kind = model_kind(model)
    allowed = GLOBAL_CRITERIA if kind == "global_white" else LOCAL_CRITERIA
    explicit = criteria is not None
    if criteria is None:
        criteria = allowed
    for c in criteria:
        if c not in CRITERIA:
            raise ValueError(f"unknown criterion {c!r}")
        if c not in allowed:
            raise ValueError(f"criterion {c!r} does not apply to {kind}")
    D, n, G = st.D, st.n, st.graph
    full = format_partition((1,) * n)
    semi = format_partition((n - 1, 1)) if n >= 2 else None
    out: List[ThresholdReport] = []

    def add(crit, part, p):
        out.append(ThresholdReport(st.label, D, n, kind, crit, part, float(p)))

    for c in criteria:
        if c == "sector":
            out.extend(_sector_reports(st, kind))
        elif G.is_zero() or n < 2:
            if explicit:
                raise ValueError(f"criterion {c!r} needs an entangled graph state")
        elif c == "ppt":
            add(c, full, ppt_threshold_global(D, n))
        elif c == "ppt_gcd":
            add(c, full, ppt_threshold_gcd(G))
        elif c == "reduction":
            add(c, full, reduction_threshold_global(D, n))
        elif c == "entropy":
            if _has_invertible_edge(G):
                add(c, full, entropy_threshold_global(D, n))
            elif explicit:
                raise ValueError("the entropy threshold needs an invertible edge weight")
        elif c == "witness":
            alpha = st.alpha if st.alpha is not None else graph_biseparable_overlap(G)
            if alpha < 1:
                add(c, "biseparable", witness_gme_threshold(D, n, alpha))
        elif c == "huber":
            add(c, full, huber_threshold(D, n, 1))
            add(c, semi, huber_threshold(D, n, n))
            add(c, "biseparable", huber_threshold(D, n, 2 ** (n - 1) - 1))
        elif c == "posmap":
            add(c, "biseparable", posmap_gme_threshold(D, n))
        elif c == "ppt_local":
            if st.ghz_like:
                add(c, full, ghz_local_ppt_threshold(D, n))
            elif explicit:
                raise ValueError("the local PPT threshold is only known for GHZ states")
        elif c == "distillation":
            if D == 2:
                add(c, full, graph_distillation_threshold(G))
            elif explicit:
                raise ValueError("the distillation threshold is stated for qubits only")
    return out


def reports_json(reports: Sequence[ThresholdReport]) -> str:
    return json.dumps([r.as_dict() for r in reports], indent=2) + "\n"


def reports_csv(reports: Sequence[ThresholdReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["state", "D", "n", "model", "criterion", "partition", "p_crit"])
    for r in reports:
        w.writerow([r.state, r.D, r.n, r.model, r.criterion, r.partition or "", f"{float(r.p_crit):.12g}"])
    return buf.getvalue()
