import pytest

from graverip.lowerbound import (analytic_min, digits, gen_encoded, gen_harmonic, growth_table,
                                 min_first_coordinate, search_min_first_coordinate, witness)

from oracles import harmonic_kernel_search, kernel_first_coordinates, lcm_by_primes, matvec


def test_harmonic_smallest():
    assert gen_harmonic(2).tolist() == [[-1, 2]]


def test_harmonic_three():
    assert gen_harmonic(3).tolist() == [[-1, 2, 0], [-1, 0, 3]]


def test_harmonic_four_diagonal():
    m = gen_harmonic(4)
    assert m.shape == (3, 4)
    assert [m.data[i][i + 1] for i in range(3)] == [2, 3, 4]


def test_encoded_smallest_blocks():
    m = gen_encoded(2, 1)
    # each block forces w, 2w, 4w; the digit row of z reads off z·w
    assert m.data[0][:4] == (0, 2, -1, 0)
    assert m.data[1][:4] == (0, 0, 2, -1)
    first_digit_row = m.data[2 * 6]
    assert first_digit_row[:4] == (-1, 0, 1, 0)
    assert digits(3, 2, 3) == [1, 1, 0]


def test_encoded_entries_in_range():
    for delta in range(2, 5):
        for s in (1, 2):
            if delta ** (s + 2) > 100:
                continue
            m = gen_encoded(delta, s)
            assert m.delta == delta
            assert min(min(r) for r in m.data) == -1
            assert max(max(r) for r in m.data) == delta


def test_encoded_chain_structure():
    delta, s = 3, 1
    m = gen_encoded(delta, s)
    x = witness("encoded", delta, s)
    assert not any(matvec(m.data, x))
    for k in range(delta ** (s + 2) - 2):
        block = x[1 + k * (s + 2):1 + (k + 1) * (s + 2)]
        assert all(block[i] == delta ** i * block[0] for i in range(s + 2))


def test_harmonic_values():
    assert min_first_coordinate(gen_harmonic(3), "harmonic", 3) == 6
    assert witness("harmonic", 3) == (6, 3, 2)
    assert min_first_coordinate(gen_harmonic(2), "harmonic", 2) == 2
    assert witness("harmonic", 2) == (2, 1)
    assert min_first_coordinate(gen_harmonic(7), "harmonic", 7) == lcm_by_primes(2, 7) == 420


def test_harmonic_minimality_by_search():
    for delta in range(2, 8):
        value = analytic_min("harmonic", delta)
        assert harmonic_kernel_search(delta, value) == value
        assert kernel_first_coordinates(gen_harmonic(delta).data, value) == [value]


def test_encoded_min_by_scan():
    m = gen_encoded(2, 1)
    assert kernel_first_coordinates(m.data, 420) == [420]
    assert search_min_first_coordinate(m, 420) == 420
    assert min_first_coordinate(m, "encoded", 2, 1) == 420


def test_wrong_matrix_rejected():
    with pytest.raises(ValueError):
        min_first_coordinate(gen_harmonic(3), "harmonic", 4)
    with pytest.raises(ValueError):
        analytic_min("other", 3)


def test_growth_table():
    rows = growth_table([2, 3], [1, 2])
    assert rows[0][:3] == (2, 1, 420)
    assert rows[1][:3] == (2, 2, 360360)
    assert rows[1][2] == lcm_by_primes(2, 15)
    bits = {(d, s): b for d, s, _, b in rows}
    assert bits[(2, 1)] < bits[(2, 2)] and bits[(3, 1)] < bits[(3, 2)]
    assert bits[(2, 1)] < bits[(3, 1)] and bits[(2, 2)] < bits[(3, 2)]
    with pytest.raises(ValueError):
        growth_table([10], [3], max_argument=1000)
