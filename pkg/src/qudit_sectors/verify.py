"""Dense-oracle invariant suite behind the `verify` subcommand.

Each check returns a CheckResult; a check passes when its residual is at or
below its tolerance.
"""

from dataclasses import dataclass
from typing import Callable, List, Tuple

import numpy as np

from . import dense
from .graphs import AdjacencyMatrix, from_edges, make_family, stabilizer_generators
from .sectors import sector_brute
from .thresholds import NoiseModel, damp_sector, global_spectrum, reduced_spectrum


@dataclass(frozen=True)
class CheckResult:
    name: str
    residual: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tol)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"{tag} {self.name} residual={self.residual:.3e} tol={self.tol:.0e}"


def _graphs(deep: bool) -> List[Tuple[str, AdjacencyMatrix]]:
    out = [
        ("line2_d2", make_family("line", 2, 2)),
        ("star3_d2", make_family("star", 3, 2)),
        ("ring4_d2", make_family("ring", 4, 2)),
        ("line3_d3", make_family("line", 3, 3)),
        ("ame4_d3", make_family("ame4_ring", 4, 3)),
        ("weighted3_d4", from_edges(4, 3, [(0, 1, 1), (1, 2, 2), (0, 2, 3)])),
    ]
    if deep:
        out += [
            ("dandelion5_d2", make_family("dandelion", 5, 2)),
            ("ring6_d2", make_family("ring", 6, 2)),
            ("ame4_d5", make_family("ame4_ring", 4, 5)),
            ("star4_d4", make_family("star", 4, 4)),
        ]
    return out


def check_stabilizers(name: str, G: AdjacencyMatrix) -> CheckResult:
    psi = dense.graph_state_vector(G)
    worst = max(np.linalg.norm(dense.pauli_matrix(S) @ psi - psi) for S in stabilizer_generators(G))
    return CheckResult(f"stabilizers_fix_state[{name}]", float(worst), 1e-10)


def check_sectors(name: str, G: AdjacencyMatrix) -> CheckResult:
    rho = dense.density(dense.graph_state_vector(G))
    got = dense.sector_from_dense(rho, G.D).values
    want = sector_brute(G).values
    return CheckResult(f"dense_sectors_match_count[{name}]", float(max(abs(a - b) for a, b in zip(got, want))), 1e-9)


def check_damping(D: int, n: int, kind: str, p: float) -> CheckResult:
    G = make_family("line", n, D) if n >= 2 else from_edges(D, 1, [])
    rho = dense.apply_noise(dense.density(dense.graph_state_vector(G)), kind, p, D)
    got = dense.sector_from_dense(rho, D).values
    want = damp_sector(sector_brute(G), NoiseModel(kind, p)).values
    err = max(abs(a - b) for a, b in zip(got, want) if b is not None)
    return CheckResult(f"damping_{kind}[D={D},n={n},p={p}]", float(err), 1e-10)


def check_ame_marginals(D: int) -> CheckResult:
    rho = dense.density(dense.graph_state_vector(make_family("ame4_ring", 4, D)))
    target = np.eye(D * D) / (D * D)
    err = max(np.abs(dense.partial_trace(rho, (i, j), D) - target).max()
              for i in range(4) for j in range(i + 1, 4))
    return CheckResult(f"ame4_pair_marginals_flat[D={D}]", float(err), 1e-10)


def check_even_ame_fails() -> CheckResult:
    # all weights 1 at D = 4: some pair marginal is not maximally mixed
    G = from_edges(4, 4, [(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)])
    rho = dense.density(dense.graph_state_vector(G))
    dev = max(np.abs(dense.partial_trace(rho, (i, j), 4) - np.eye(16) / 16).max()
              for i in range(4) for j in range(i + 1, 4))
    # residual is zero when a non-flat marginal exists
    return CheckResult("ring4_d4_unit_weights_not_2uniform", 0.0 if dev > 1e-6 else 1.0, 0.0)


def _spectrum_error(expected, eigs) -> float:
    flat = np.sort(np.concatenate([np.full(m, lam) for lam, m in expected if m > 0]))
    return float(np.abs(flat - np.sort(eigs)).max())


def check_entropy_spectra(D: int, n: int, p: float) -> CheckResult:
    G = make_family("line", n, D)
    rho = dense.apply_noise(dense.density(dense.graph_state_vector(G)), "global", p, D)
    e_full = _spectrum_error(global_spectrum(D, n, p), dense.hermitian_eigenvalues(rho))
    red = dense.partial_trace(rho, range(1, n), D)
    e_red = _spectrum_error(reduced_spectrum(D, n, p), dense.hermitian_eigenvalues(red))
    return CheckResult(f"entropy_spectra[D={D},n={n},p={p}]", max(e_full, e_red), 1e-10)


def check_fourier_forms() -> CheckResult:
    psi1 = dense.graph_state_vector(from_edges(4, 2, [(0, 1, 1)]))
    out1 = dense.apply_local(dense.local_gate("fourier", 4).conj().T, psi1, 0, 4)
    want1 = np.zeros(16, dtype=complex)
    want1[[0, 5, 10, 15]] = 0.5
    psi2 = dense.graph_state_vector(from_edges(4, 2, [(0, 1, 2)]))
    H = dense.local_gate("fourier", 2)
    out2 = dense.apply_local(np.kron(H, H), psi2, 0, 4)
    want2 = np.zeros(16, dtype=complex)
    for k in range(4):
        want2[(k % 2) * 4 + k] = 0.5
    err = max(np.abs(out1 - want1).max(), np.abs(out2 - want2).max())
    return CheckResult("fourier_normal_forms_d4", float(err), 1e-10)


def check_ppt_eigenvector(name: str, G: AdjacencyMatrix, p: float) -> CheckResult:
    res, _ = dense.verify_ppt_eigenvector(G, p)
    return CheckResult(f"ppt_eigenvector[{name},p={p}]", res, 1e-9)


def check_npt(name: str, psi: np.ndarray, D: int, target: float, tol: float) -> CheckResult:
    p = dense.npt_threshold_bisect(psi, "global", [0], D)
    return CheckResult(f"npt_threshold[{name}]", abs(p - target), tol)


def check_reconstruction(name: str, G: AdjacencyMatrix) -> CheckResult:
    rho = dense.apply_noise(dense.density(dense.graph_state_vector(G)), "local", 0.3, G.D)
    back = dense.pauli_reconstruct(dense.pauli_decompose(rho, G.D), G.D)
    return CheckResult(f"pauli_reconstruction[{name}]", float(np.abs(back - rho).max()), 1e-10)


def suite(deep: bool = False) -> List[Callable[[], CheckResult]]:
    checks: List[Callable[[], CheckResult]] = []
    for name, G in _graphs(deep):
        checks.append(lambda name=name, G=G: check_stabilizers(name, G))
        if G.D ** G.n <= dense.DECOMPOSE_GUARD:
            checks.append(lambda name=name, G=G: check_sectors(name, G))
    probs = (0.1, 0.5, 0.9)
    for D in (2, 3):
        for n in (1, 2, 3):
            for kind in ("global", "local"):
                for p in probs:
                    checks.append(lambda D=D, n=n, kind=kind, p=p: check_damping(D, n, kind, p))
    for D in ((3, 5) if deep else (3,)):
        checks.append(lambda D=D: check_ame_marginals(D))
    checks.append(check_even_ame_fails)
    for D, n in ((2, 2), (2, 3), (3, 2), (3, 3)) + (((2, 5), (4, 3)) if deep else ()):
        checks.append(lambda D=D, n=n: check_entropy_spectra(D, n, 0.37))
    checks.append(check_fourier_forms)
    eig_cases = [("line2_d2", make_family("line", 2, 2)), ("line2_d3", make_family("line", 2, 3)),
                 ("star3_d2", make_family("star", 3, 2)), ("ame4_d3", make_family("ame4_ring", 4, 3))]
    for name, G in eig_cases:
        for p in (0.0, 0.3, 0.7):
            checks.append(lambda name=name, G=G, p=p: check_ppt_eigenvector(name, G, p))
    checks.append(lambda: check_npt("werner", dense.graph_state_vector(make_family("line", 2, 2)), 2, 2 / 3, 1e-6))
    checks.append(lambda: check_npt("ghz3", dense.special_state("ghz", 2, 3), 2, 0.8, 1e-6))
    checks.append(lambda: check_npt("w3", dense.special_state("w3"), 2, 0.7904, 5e-4))
    checks.append(lambda: check_reconstruction("line3_d3", make_family("line", 3, 3)))
    return checks


def run_suite(deep: bool = False) -> List[CheckResult]:
    return [c() for c in suite(deep)]
