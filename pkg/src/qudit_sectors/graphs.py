"""Weighted graphs over Z/DZ, named families and graph-state stabilizers.

Vertices are 0-based in the Python API. Graph files and CLI output use
1-based vertex labels.
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

import numpy as np

from .pauli import PauliOp, StabilizerGroupSpec
from .ring import check_dim, gcd_many

FAMILIES = ("star", "line", "ring", "dandelion", "ame4_ring")


@dataclass(frozen=True)
class AdjacencyMatrix:
    D: int
    gamma: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        check_dim(self.D)
        rows = tuple(tuple(int(x) % self.D for x in row) for row in self.gamma)
        n = len(rows)
        if n < 1:
            raise ValueError("a graph needs at least one vertex")
        for i, row in enumerate(rows):
            if len(row) != n:
                raise ValueError("adjacency matrix must be square")
            if row[i] != 0:
                raise ValueError(f"vertex {i + 1} has a loop")
            for j in range(i):
                if row[j] != rows[j][i]:
                    raise ValueError(f"adjacency matrix is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "gamma", rows)

    @property
    def n(self) -> int:
        return len(self.gamma)

    def array(self) -> np.ndarray:
        return np.array(self.gamma, dtype=np.int64)

    def edges(self) -> List[Tuple[int, int, int]]:
        """(i, j, w) with i < j, 0-based, ascending."""
        return [(i, j, self.gamma[i][j]) for i in range(self.n) for j in range(i + 1, self.n) if self.gamma[i][j]]

    def neighbors(self, i: int) -> List[int]:
        return [j for j in range(self.n) if self.gamma[i][j]]

    def degrees(self) -> List[int]:
        return [len(self.neighbors(i)) for i in range(self.n)]

    def degree_counts(self) -> dict:
        """M_m: number of vertices with exactly m neighbours."""
        out = {}
        for m in self.degrees():
            out[m] = out.get(m, 0) + 1
        return out

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.gamma)


def from_edges(D: int, n: int, edges: Iterable[Sequence[int]]) -> AdjacencyMatrix:
    """Build a graph from 0-based (i, j, w) triples; duplicates and loops are rejected."""
    g = [[0] * n for _ in range(n)]
    seen = set()
    for i, j, w in edges:
        if i == j:
            raise ValueError(f"loop at vertex {i + 1}")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"vertex out of range in edge ({i + 1},{j + 1})")
        key = (min(i, j), max(i, j))
        if key in seen:
            raise ValueError(f"duplicate edge ({key[0] + 1},{key[1] + 1})")
        seen.add(key)
        g[i][j] = g[j][i] = w % D
    return AdjacencyMatrix(D, tuple(map(tuple, g)))


def empty_graph(D: int, n: int) -> AdjacencyMatrix:
    return from_edges(D, n, [])


def make_family(kind: str, n: int, D: int = 2) -> AdjacencyMatrix:
    """Named families with the figure numbering.

    star: vertex 1 is the centre. line: path 1-2-...-n. ring: cycle 1..n.
    dandelion: 1 joined to 2, 3, 4 and the seeds 5..n joined to 4.
    ame4_ring: 4-cycle with weights A-B=1, B-C=1, C-D=1, A-D=-1.
    """
    check_dim(D)
    if kind == "star":
        if n < 2:
            raise ValueError("star needs n >= 2")
        edges = [(0, j, 1) for j in range(1, n)]
    elif kind == "line":
        if n < 2:
            raise ValueError("line needs n >= 2")
        edges = [(i, i + 1, 1) for i in range(n - 1)]
    elif kind == "ring":
        if n < 3:
            raise ValueError("ring needs n >= 3")
        edges = [(i, (i + 1) % n, 1) for i in range(n)]
    elif kind == "dandelion":
        if n < 5:
            raise ValueError("dandelion needs n >= 5")
        edges = [(0, 1, 1), (0, 2, 1), (0, 3, 1)] + [(3, k, 1) for k in range(4, n)]
    elif kind == "ame4_ring":
        if n != 4:
            raise ValueError("ame4_ring is defined for n = 4 only")
        edges = [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, D - 1)]
    elif kind == "custom":
        raise ValueError("custom graphs are built with from_edges or read_graph")
    else:
        raise ValueError(f"unknown graph family {kind!r}")
    return from_edges(D, n, edges)


def stabilizer_generators(G: AdjacencyMatrix) -> List[PauliOp]:
    """S_k = X on qudit k times Z^{gamma_jk} on every qudit j."""
    out = []
    for k in range(G.n):
        r = [0] * G.n
        r[k] = 1
        s = [G.gamma[j][k] for j in range(G.n)]
        out.append(PauliOp(G.D, 0, tuple(r), tuple(s)))
    return out


def stabilizer_spec(G: AdjacencyMatrix) -> StabilizerGroupSpec:
    return StabilizerGroupSpec(G.D, G.n, stabilizer_generators(G))


def local_complement(G: AdjacencyMatrix, k: int) -> AdjacencyMatrix:
    """Complement the neighbourhood of vertex k (qubits only)."""
    if G.D != 2:
        raise ValueError("local complementation is only provided for D = 2")
    if not 0 <= k < G.n:
        raise ValueError(f"vertex {k} out of range")
    a = G.array()
    col = a[:, k]
    out = (a + np.outer(col, col)) % 2
    np.fill_diagonal(out, 0)
    return AdjacencyMatrix(2, tuple(map(tuple, out.tolist())))


def gcd_reduce(G: AdjacencyMatrix) -> Tuple[AdjacencyMatrix, int, int]:
    """Split each qudit into g qudits of dimension d = D/g, g = gcd(D, all weights).

    Returns the rescaled graph Gamma/g over Z/dZ together with g and d.
    """
    if G.is_zero():
        raise ValueError("the empty graph has no gcd reduction")
    g = gcd_many([w for row in G.gamma for w in row], G.D)
    d = G.D // g
    rows = tuple(tuple((w // g) % d for w in row) for row in G.gamma)
    return AdjacencyMatrix(d, rows), g, d


def disjoint_union(A: AdjacencyMatrix, B: AdjacencyMatrix) -> AdjacencyMatrix:
    if A.D != B.D:
        raise ValueError("dimension mismatch")
    n = A.n + B.n
    g = [[0] * n for _ in range(n)]
    for i in range(A.n):
        for j in range(A.n):
            g[i][j] = A.gamma[i][j]
    for i in range(B.n):
        for j in range(B.n):
            g[A.n + i][A.n + j] = B.gamma[i][j]
    return AdjacencyMatrix(A.D, tuple(map(tuple, g)))


def random_graph(D: int, n: int, rng: np.random.Generator, density: float = 0.5) -> AdjacencyMatrix:
    """Random weighted graph: each pair gets a uniform nonzero weight with probability density."""
    g = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                g[i, j] = g[j, i] = rng.integers(1, D)
    return AdjacencyMatrix(D, tuple(map(tuple, g.tolist())))


def parse_graph(text: str) -> AdjacencyMatrix:
    """Parse the text format: first line `D n`, then `i j w` lines with 1-based vertices."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise ValueError("empty graph file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("first line must be `D n`")
    D, n = int(head[0]), int(head[1])
    check_dim(D)
    if n < 1:
        raise ValueError("n must be positive")
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 3:
            raise ValueError(f"bad edge line {ln!r}; expected `i j w`")
        i, j, w = (int(x) for x in parts)
        if not 0 < w < D:
            raise ValueError(f"edge weight {w} not in 1..{D - 1}")
        edges.append((i - 1, j - 1, w))
    return from_edges(D, n, edges)


def read_graph(path: str) -> AdjacencyMatrix:
    with open(path) as fh:
        return parse_graph(fh.read())


def format_graph(G: AdjacencyMatrix) -> str:
    lines = [f"{G.D} {G.n}"]
    lines += [f"{i + 1} {j + 1} {w}" for i, j, w in G.edges()]
    return "\n".join(lines) + "\n"
