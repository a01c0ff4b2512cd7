import random

import pytest
from hypothesis import given, settings, strategies as st

from graverip.core import (IntMatrix, TwoStageInstance, assemble_matrix, conformal_le, ensure_valid,
                           residual, validate_instance)
from graverip.errors import InvalidInstance
from graverip.generate import random_two_stage

from oracles import matvec, naive_assemble


def unit_instance(**kw):
    data = dict(a_blocks=[[[1]]], b_blocks=[[[2]]], rhs=[4], lower=[0, 0], upper=[4, 2], objective=[0, 1])
    data.update(kw)
    return TwoStageInstance.build(**data)


def test_valid_unit_instance():
    assert validate_instance(unit_instance()) == []


def test_lower_above_upper_reported_at_index_0():
    v = validate_instance(unit_instance(lower=[5, 0]))
    assert [(x.kind, x.index) for x in v] == [("bounds", 0)]


def test_wrong_a_block_rows_is_dimension_violation():
    inst = TwoStageInstance(1, 1, 1, 1, (IntMatrix.from_rows([[1], [1]]),), (IntMatrix.from_rows([[2]]),),
                            (4,), (0, 0), (4, 2), (0, 1))
    kinds = {x.kind for x in validate_instance(inst)}
    assert "dimension" in kinds
    with pytest.raises(InvalidInstance):
        ensure_valid(inst)


def test_floats_rejected():
    with pytest.raises(TypeError):
        unit_instance(rhs=[4.0])


def test_assemble_single_block():
    assert assemble_matrix(unit_instance()).tolist() == [[1, 2]]


def test_assemble_two_unit_blocks():
    inst = TwoStageInstance.build([[[1]], [[1]]], [[[1]], [[1]]], [0, 0], [0] * 3, [1] * 3, [0] * 3)
    assert assemble_matrix(inst).tolist() == [[1, 1, 0], [1, 0, 1]]


def test_assemble_matches_naive_layout():
    rng = random.Random(0)
    for _ in range(20):
        inst = random_two_stage(rng, 2, 2, 1, 2, 3)
        a = [m.tolist() for m in inst.a_blocks]
        b = [m.tolist() for m in inst.b_blocks]
        assert assemble_matrix(inst).tolist() == naive_assemble(a, b)


def test_assembled_zeros_outside_blocks():
    rng = random.Random(1)
    inst = random_two_stage(rng, 3, 2, 2, 2, 3)
    m = assemble_matrix(inst)
    for row in range(m.nrows):
        blk = row // inst.r
        for col in range(m.ncols):
            inside = col < inst.s or inst.tail_slice(blk).start <= col < inst.tail_slice(blk).stop
            if not inside:
                assert m.data[row][col] == 0


def test_residual_zero_case():
    inst = unit_instance(rhs=[0])
    assert residual(inst, (0, 0)) == (0,)


def test_residual_arithmetic():
    assert residual(unit_instance(), (0, 2)) == (0,)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 2), st.integers(0, 2), st.integers(0, 2))
def test_residual_matches_naive_product(seed, n, r, s, t):
    rng = random.Random(seed)
    inst = random_two_stage(rng, n, r, s, t, 3)
    x = [rng.randint(-5, 5) for _ in range(inst.ncols)]
    rows = naive_assemble([m.tolist() for m in inst.a_blocks], [m.tolist() for m in inst.b_blocks])
    expect = tuple(p - q for p, q in zip(matvec(rows, x), inst.rhs))
    assert residual(inst, x) == expect


def test_large_entries_are_exact():
    rng = random.Random(2)
    big = 10**6
    n, s, t = 10, 100, 90
    a = [[[rng.randint(-big, big) for _ in range(s)]] for _ in range(n)]
    b = [[[rng.randint(-big, big) for _ in range(t)]] for _ in range(n)]
    ncols = s + n * t
    x = [rng.randint(-big, big) for _ in range(ncols)]
    inst = TwoStageInstance.build(a, b, [0] * n, [-big] * ncols, [big] * ncols, [0] * ncols)
    assert inst.ncols == 1000
    rows = naive_assemble(a, b)
    assert residual(inst, x) == matvec(rows, x)


def test_conformal_le():
    assert conformal_le((1, 0, -1), (2, 3, -1))
    assert not conformal_le((1, 0, 1), (2, 3, -1))
