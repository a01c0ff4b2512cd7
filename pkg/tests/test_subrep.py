import random

import pytest
from hypothesis import given, settings, strategies as st

from graverip.errors import BudgetExceeded
from graverip.subrep import (VectorMultiset, common_sum, find_common_submultisets, subrep_size_bound,
                             within_size_bound)

from oracles import reachable_sums


def ms(*vecs):
    return VectorMultiset.from_list([v if isinstance(v, tuple) else (v,) for v in vecs])


def check_valid(sets, parts):
    assert len(parts) == len(sets)
    for t, s in zip(sets, parts):
        assert s.size() > 0
        assert t.contains(s)
    assert len({p.total() for p in parts}) == 1


def test_whole_sets_forced():
    sets = [ms(1, 1), ms(2)]
    parts = find_common_submultisets(sets, 2)
    assert parts == sets and common_sum(parts) == (2,)


def test_three_sets_common_six():
    sets = [ms(*[1] * 6), ms(*[2] * 3), ms(*[3] * 2)]
    parts = find_common_submultisets(sets, 3)
    assert parts == sets and common_sum(parts) == (6,)
    common = reachable_sums([(1,)] * 6) & reachable_sums([(2,)] * 3) & reachable_sums([(3,)] * 2)
    assert min(v for v in common if any(v)) == (6,)


def test_plane_common_point():
    sets = [ms((1, 0), (0, 1)), ms((1, 1))]
    parts = find_common_submultisets(sets, 1)
    check_valid(sets, parts)
    assert common_sum(parts) == (1, 1)


def test_zero_vectors_everywhere():
    sets = [ms(0, 2), ms(0, 1, 1)]
    assert [p.elements() for p in find_common_submultisets(sets, 2)] == [[(0,)], [(0,)]]


def test_errors():
    with pytest.raises(ValueError):
        find_common_submultisets([], 1)
    with pytest.raises(ValueError):
        find_common_submultisets([ms(1), ms(2)], 2)
    with pytest.raises(ValueError):
        find_common_submultisets([ms(3), ms(3)], 2)
    with pytest.raises(BudgetExceeded):
        find_common_submultisets([ms(*[3] * 20), ms(*[3] * 20)], 3, budget=10)


def test_size_bound_values():
    assert subrep_size_bound(1, 1) == 3267
    assert subrep_size_bound(1, 2) < subrep_size_bound(1, 3)
    golden = subrep_size_bound(2, 1)
    assert golden.bit_length() == 907
    assert golden % (10**9 + 7) == 406959274
    assert str(golden).startswith("87481821028670980249")


def test_within_size_bound_agrees_with_exact():
    for d, delta in [(1, 1), (1, 2), (2, 1)]:
        b = subrep_size_bound(d, delta)
        assert within_size_bound(b, d, delta) and not within_size_bound(b + 1, d, delta)
    assert within_size_bound(10**6, 3, 3)


def random_family(rng, n, d, delta, size):
    """n multisets over [0, delta]^d with a common total."""
    base = [tuple(rng.randint(0, delta) for _ in range(d)) for _ in range(rng.randint(1, size))]
    total = [sum(c) for c in zip(*base)]
    sets = [VectorMultiset.from_list(base, d)]
    for _ in range(n - 1):
        rest = list(total)
        vecs = []
        while any(rest) and len(vecs) < size - 1:
            v = tuple(rng.randint(0, min(delta, x)) for x in rest)
            if any(v):
                vecs.append(v)
                rest = [a - b for a, b in zip(rest, v)]
        while any(rest):
            v = tuple(min(delta, x) for x in rest)
            vecs.append(v)
            rest = [a - b for a, b in zip(rest, v)]
        if not vecs:
            vecs = [(0,) * d]
        sets.append(VectorMultiset.from_list(vecs, d))
    return sets


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(1, 3), st.integers(1, 3))
def test_valid_output_property(seed, n, d, delta):
    rng = random.Random(seed)
    sets = random_family(rng, n, d, delta, 12)
    parts = find_common_submultisets(sets, delta)
    check_valid(sets, parts)
    if d == 1:
        assert all(p.size() <= subrep_size_bound(1, delta) for p in parts)
