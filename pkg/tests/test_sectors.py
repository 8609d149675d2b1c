from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qudit_sectors.graphs import disjoint_union, from_edges, make_family, random_graph, stabilizer_spec
from qudit_sectors.pauli import ghz_stabilizer_spec
from qudit_sectors.ring import SizeGuardError
from qudit_sectors.sectors import (
    SectorDistribution,
    ame4_analytic,
    distribution_csv,
    family_full_body,
    full_body_lower_bound,
    ghz_analytic,
    ghz_coefficients_explicit,
    ghz_coefficients_recursive,
    ghz_f_recursive,
    ghz_weight_counts,
    n_nonzero_brute,
    n_nonzero_count,
    n_nonzero_explicit,
    purity_from_sectors,
    puzzle_colorings,
    ring_pair_count,
    sector_brute,
    sector_from_group,
    tensor_convolve,
    trivial_distribution,
)


def vals(d):
    return tuple(d.values)


def test_brute_examples():
    assert vals(sector_brute(make_family("line", 3, 2))) == (1, 0, 3, 4)
    assert vals(sector_brute(make_family("ring", 5, 2))) == (1, 0, 0, 10, 15, 6)
    assert vals(sector_brute(make_family("ame4_ring", 4, 3))) == (1, 0, 0, 32, 48)


def test_group_examples():
    assert vals(sector_from_group(ghz_stabilizer_spec(2, 3))) == (1, 0, 3, 4)
    assert vals(sector_from_group(ghz_stabilizer_spec(2, 4))) == (1, 0, 6, 0, 9)
    assert vals(sector_from_group(ghz_stabilizer_spec(2, 2))) == (1, 0, 3)


def test_group_rejects_invalid_spec():
    from qudit_sectors.pauli import StabilizerGroupSpec, single
    with pytest.raises(ValueError):
        sector_from_group(StabilizerGroupSpec(2, 1, [single(2, 1, 0, x=1), single(2, 1, 0, z=1)]))


def test_ghz_analytic_examples():
    assert vals(ghz_analytic(2, 3)) == (1, 0, 3, 4)
    assert ghz_analytic(2, 6)[6] == 33
    assert vals(ghz_analytic(3, 2)) == (1, 0, 8)
    assert vals(sector_from_group(ghz_stabilizer_spec(3, 2))) == (1, 0, 8)


def test_ame4_examples():
    assert vals(ame4_analytic(3)) == (1, 0, 0, 32, 48)
    assert vals(ame4_analytic(5)) == (1, 0, 0, 96, 528)
    assert ame4_analytic(7)[4] == 2208
    assert sector_brute(make_family("ame4_ring", 4, 7)) == ame4_analytic(7)
    with pytest.raises(ValueError):
        ame4_analytic(4)


def test_family_examples():
    assert [family_full_body("line", n) for n in range(2, 12)] == [3, 4, 5, 8, 12, 17, 25, 37, 54, 79]
    assert family_full_body("dandelion", 6) == 24
    assert family_full_body("ring", 6) == 10
    with pytest.raises(ValueError):
        family_full_body("dandelion", 4)
    with pytest.raises(ValueError):
        family_full_body("cube", 4)


def test_ring_pair_examples():
    assert ring_pair_count(6, 1) == 6
    assert ring_pair_count(6, 2) == 3
    assert 1 + 6 + 3 == family_full_body("ring", 6)
    with pytest.raises(ValueError):
        ring_pair_count(6, 3)


def test_puzzle_examples():
    count, sols = puzzle_colorings(make_family("line", 3, 2), True)
    assert count == 4 and sols == ["010", "011", "110", "111"]
    count, sols = puzzle_colorings(make_family("star", 6, 2), True)
    assert count == 33 and "111111" in sols
    with pytest.raises(ValueError):
        puzzle_colorings(make_family("line", 3, 3))
    with pytest.raises(SizeGuardError):
        puzzle_colorings(make_family("line", 21, 2), True)


def _rule_holds(G, bits):
    for v in range(G.n):
        if bits[v] == "0":
            black = sum(1 for u in G.neighbors(v) if bits[u] == "1")
            if black % 2 == 0:
                return False
    return True


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 10), st.integers(0, 2 ** 32 - 1))
def test_puzzle_equals_full_body(n, seed):
    G = random_graph(2, n, np.random.default_rng(seed))
    count, sols = puzzle_colorings(G, True)
    assert count == sector_brute(G).full_body == len(sols)
    assert all(_rule_holds(G, s) for s in sols)


def test_convolve_examples():
    bell = sector_brute(make_family("line", 2, 2))
    assert vals(tensor_convolve(bell, bell)) == (1, 0, 6, 0, 9)
    assert tensor_convolve(bell, trivial_distribution(2)) == bell
    ghz3 = sector_brute(make_family("star", 3, 2))
    union = disjoint_union(make_family("line", 2, 2), make_family("star", 3, 2))
    assert tensor_convolve(bell, ghz3) == sector_brute(union)
    with pytest.raises(ValueError):
        tensor_convolve(bell, sector_brute(make_family("line", 2, 3)))


def test_purity_examples():
    assert purity_from_sectors(sector_brute(make_family("ring", 5, 3))) == 1
    assert purity_from_sectors(SectorDistribution(2, 3, (1, 0, 0, 0))) == Fraction(1, 8)


def test_lower_bound_examples():
    for n in range(3, 10):
        assert full_body_lower_bound(make_family("ring", n, 2)) == 1
    assert full_body_lower_bound(make_family("star", 5, 2)) == 5
    assert family_full_body("star", 5) == 16
    assert full_body_lower_bound(make_family("line", 2, 3)) == 8
    assert sector_brute(make_family("line", 2, 3)).full_body == 8


def test_ghz_weight_count_examples():
    for D in range(2, 8):
        assert ghz_f_recursive(D, 1)[1] == 0
        assert ghz_weight_counts(D, 2)[2] == D - 1
        assert ghz_analytic(D, 2)[2] - (D - 1) * D == D - 1


@pytest.mark.parametrize("D", range(2, 8))
@pytest.mark.parametrize("n", range(1, 9))
def test_ghz_weight_counts_sum_and_analytic(D, n):
    k = ghz_weight_counts(D, n)
    assert sum(k) == D ** (n - 1)
    if n >= 2:
        extra = [0] * n + [(D - 1) * D ** (n - 1)]
        # every non-identity Z-type GHZ stabilizer pairs with D-1 X-type cosets
        ana = ghz_analytic(D, n).values
        assert [a - e for a, e in zip(ana, extra)] == k


@pytest.mark.parametrize("n", range(0, 13))
def test_ghz_coefficients_agree(n):
    assert ghz_coefficients_recursive(n) == ghz_coefficients_explicit(n)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 7), st.lists(st.integers(0, 6), min_size=1, max_size=5))
def test_n_recurrence_vs_brute(D, gammas):
    gammas = [g % D for g in gammas]
    assert n_nonzero_count(gammas, D) == n_nonzero_brute(gammas, D)
    if all(np.gcd(g, D) == 1 for g in gammas):
        assert n_nonzero_count(gammas, D) == n_nonzero_explicit(len(gammas), D)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(1, 6), st.integers(0, 2 ** 32 - 1))
def test_brute_invariants(D, n, seed):
    G = random_graph(D, n, np.random.default_rng(seed))
    d = sector_brute(G)
    assert d[0] == 1 and sum(d.values) == D ** n
    assert sector_brute(G, method="digits") == d
    assert full_body_lower_bound(G) <= d.full_body
    if D ** n <= 4096:
        assert sector_from_group(stabilizer_spec(G)) == d


def test_brute_guard():
    with pytest.raises(SizeGuardError):
        sector_brute(make_family("line", 10, 3), guard=3 ** 9)


def test_threads_agree(monkeypatch):
    G = make_family("ring", 20, 2)
    serial = sector_brute(G, workers=1)
    assert sector_brute(G, workers=3) == serial
    H = make_family("line", 11, 3)
    assert sector_brute(H, workers=3) == sector_brute(H, workers=1)


def test_csv_format():
    out = distribution_csv([sector_brute(make_family("ring", 5, 2))])
    assert out == "D,n,l0,l1,l2,l3,l4,l5\n2,5,1,0,0,10,15,6\n"
    real = distribution_csv([SectorDistribution(2, 1, (1, None))])
    assert real.splitlines()[1] == "2,1,1,"


def test_ring_minimality_small_n():
    # ring graphs minimise the full-body sector length among connected graphs with n <= 6
    for n in range(3, 7):
        pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
        ring_value = family_full_body("ring", n)
        for mask in range(1 << len(pairs)):
            edges = [(i, j, 1) for k, (i, j) in enumerate(pairs) if mask >> k & 1]
            G = from_edges(2, n, edges)
            if _connected(G):
                assert sector_brute(G).full_body >= ring_value


def _connected(G):
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for u in G.neighbors(v):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return len(seen) == G.n
