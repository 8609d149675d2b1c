import pytest
from hypothesis import given, strategies as st

from qudit_sectors.bounds import (
    bound,
    bounds_csv,
    canonical_partition,
    enumerate_partitions,
    format_partition,
    fully_separable_bound,
    refines,
)
from qudit_sectors.ring import SizeGuardError


def test_partition_examples():
    assert enumerate_partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert enumerate_partitions(1) == [(1,)]
    assert len(enumerate_partitions(8)) == 22
    with pytest.raises(SizeGuardError):
        enumerate_partitions(31)
    with pytest.raises(ValueError):
        enumerate_partitions(0)


def _partition_count(n, cap=None):
    cap = n if cap is None else cap
    if n == 0:
        return 1
    return sum(_partition_count(n - k, k) for k in range(1, min(n, cap) + 1))


@pytest.mark.parametrize("n", range(1, 16))
def test_partition_counts(n):
    parts = enumerate_partitions(n)
    assert len(parts) == len(set(parts)) == _partition_count(n)
    assert all(sum(p) == n and list(p) == sorted(p, reverse=True) for p in parts)


@pytest.mark.parametrize("D", [2, 3, 4, 5, 7])
def test_bound_examples(D):
    assert bound(D, (2, 2))[4] == (D * D - 1) ** 2
    assert bound(D, (2, 1))[3] == D ** 3 - D ** 2 - D + 1
    assert bound(D, (1, 2)) == bound(D, (2, 1))


@pytest.mark.parametrize("n", range(2, 12))
def test_qubit_tight_semiseparable(n):
    assert bound(2, (n - 1, 1), "qubit_tight")[n] == 2 ** (n - 2) + (1 if n % 2 else 0)


def test_mode_errors():
    with pytest.raises(ValueError):
        bound(3, (2, 1), "qubit_tight")
    with pytest.raises(ValueError):
        bound(2, (2, 1), "loose")
    with pytest.raises(ValueError):
        bound(2, (2, 0))


def test_fully_separable_examples():
    assert fully_separable_bound(2, 6, 6) == 1
    assert fully_separable_bound(3, 3, 2) == 12
    assert fully_separable_bound(2, 8, 4) == 70
    with pytest.raises(ValueError):
        fully_separable_bound(2, 3, 4)


@given(st.integers(2, 7), st.integers(1, 9))
def test_full_separable_matches_composition(D, n):
    b = bound(D, (1,) * n)
    assert list(b.values) == [fully_separable_bound(D, n, j) for j in range(n + 1)]


@given(st.integers(2, 5), st.integers(1, 8))
def test_b0_is_one(D, n):
    for P in enumerate_partitions(n):
        assert bound(D, P)[0] == 1


def test_composed_bound_can_exceed_global_cap():
    # the printed four-party value 2(D^4 - 2D^2 + 1) is larger than D^4 - 1 at D = 2
    assert bound(2, (2, 2))[3] == 18 > 2 ** 4 - 1


@pytest.mark.xfail(strict=True, reason="composed bounds exceed D^n - 1, e.g. b_3 of (2,2) at D=2 is 18")
def test_every_bound_below_global_cap():
    for D in (2, 3, 5):
        for n in range(1, 9):
            for P in enumerate_partitions(n):
                assert all(v <= D ** n - 1 for v in bound(D, P).values[1:]), (D, P)


@pytest.mark.xfail(strict=True, reason="composed bounds are not refinement monotone, e.g. (2,2) vs (4) at j=3")
def test_refinement_monotone():
    for D in (2, 3, 5):
        for n in range(1, 9):
            parts = enumerate_partitions(n)
            for P in parts:
                for Q in parts:
                    if refines(P, Q):
                        bp, bq = bound(D, P), bound(D, Q)
                        assert all(x <= y for x, y in zip(bp.values, bq.values)), (D, P, Q)


@pytest.mark.parametrize("D", [2, 3, 5])
def test_refinement_monotone_into_full_separability(D):
    # the fully separable bound sits below every other partition
    for n in range(1, 9):
        low = bound(D, (1,) * n)
        for Q in enumerate_partitions(n):
            assert all(x <= y for x, y in zip(low.values, bound(D, Q).values))


def test_refines():
    assert refines((1, 1, 1, 1), (2, 2))
    assert refines((2, 1, 1), (3, 1))
    assert not refines((2, 2), (3, 1))
    assert not refines((3, 1), (2, 2))
    assert not refines((2, 1), (2, 2))


def test_canonical_and_format():
    assert canonical_partition([1, 3, 2]) == (3, 2, 1)
    assert format_partition((2, 1, 1)) == "(2,1,1)"


def test_csv():
    out = bounds_csv(2, 4)
    lines = out.splitlines()
    assert lines[0] == "D,partition,j,bound,mode"
    assert '2,"(2,2)",4,9,generic' in lines
    assert bounds_csv(2, 4) == out
    tight = bounds_csv(2, 4, "qubit_tight").splitlines()
    assert "2,(4),4,9,qubit_tight" in tight
