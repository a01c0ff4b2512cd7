"""Matrix families whose nonzero kernel vectors are forced to be huge.

harmonic(Δ): rows −x₁ + k·x_k = 0 for k = 2..Δ, so x₁ is a multiple of
every k and the smallest nonzero |x₁| is lcm(2, …, Δ).

encoded(Δ, s): the value k is no longer a matrix entry but written in base Δ.
Each encoded value z gets its own copy of the chain block 𝒞 (Δ on the
diagonal, −1 on the superdiagonal), which forces its variables to be
w, Δw, Δ²w, …; the digit row −x₀ + Σ aᵢ(z)·Δⁱw = 0 then reads x₀ = z·w.
Here the parameter s gives 𝒞 s+1 rows and s+2 columns, so z runs over
2..Δ^{s+2}−1 and all entries stay in [−1, Δ].
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

from .core import IntMatrix, IntVector
from .graver import _row_reduce

FAMILIES = ("harmonic", "encoded")
DEFAULT_MAX_ARGUMENT = 10**4


def lcm_range(lo: int, hi: int) -> int:
    """lcm(lo, …, hi); 1 for an empty range."""
    return lcm(*range(lo, hi + 1)) if hi >= lo else 1


def gen_harmonic(delta: int) -> IntMatrix:
    """(Δ−1)×Δ matrix: column 0 is −1, row i has i+2 in column i+1."""
    if delta < 2:
        raise ValueError("delta must be at least 2")
    rows = []
    for i in range(delta - 1):
        row = [0] * delta
        row[0] = -1
        row[i + 1] = i + 2
        rows.append(row)
    return IntMatrix.from_rows(rows)


def encoded_values(delta: int, s: int) -> range:
    return range(2, delta ** (s + 2))


def digits(z: int, base: int, count: int) -> list[int]:
    out = []
    for _ in range(count):
        z, d = divmod(z, base)
        out.append(d)
    return out


def gen_encoded(delta: int, s: int) -> IntMatrix:
    """Chain rows of every block first, then one digit row per z, ascending.

    Columns: x₀, then s+2 columns per encoded value z.
    """
    if delta < 2 or s < 1:
        raise ValueError("delta must be at least 2 and s at least 1")
    width = s + 2
    zs = list(encoded_values(delta, s))
    ncols = 1 + width * len(zs)
    chain, digit_rows = [], []
    for k, z in enumerate(zs):
        base = 1 + k * width
        for i in range(width - 1):
            row = [0] * ncols
            row[base + i] = delta
            row[base + i + 1] = -1
            chain.append(row)
        row = [0] * ncols
        row[0] = -1
        for i, a in enumerate(digits(z, delta, width)):
            row[base + i] = a
        digit_rows.append(row)
    return IntMatrix.from_rows(chain + digit_rows)


def analytic_min(family: str, delta: int, s: int | None = None) -> int:
    if family == "harmonic":
        return lcm_range(2, delta)
    if family == "encoded":
        if s is None:
            raise ValueError("the encoded family needs s")
        return lcm_range(2, delta ** (s + 2) - 1)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def witness(family: str, delta: int, s: int | None = None) -> IntVector:
    """Kernel vector whose first coordinate is the minimal value."""
    m = analytic_min(family, delta, s)
    if family == "harmonic":
        return (m,) + tuple(m // k for k in range(2, delta + 1))
    out = [m]
    for z in encoded_values(delta, s):
        w = m // z
        out.extend(w * delta**i for i in range(s + 2))
    return tuple(out)


def _solve_rest(matrix: IntMatrix):
    """Rational y with M[:,1:]·y = −M[:,0], or None if inconsistent."""
    aug = IntMatrix(matrix.nrows, matrix.ncols, tuple(tuple(r[1:]) + (-r[0],) for r in matrix.data))
    red, piv = _row_reduce(aug)
    if matrix.ncols - 1 in piv:
        return None
    y = [Fraction(0)] * (matrix.ncols - 1)
    for row, pc in zip(red, piv):
        y[pc] = row[-1]
    return y


def search_min_first_coordinate(matrix: IntMatrix, limit: int) -> int | None:
    """Smallest v in 1..limit such that a kernel vector has first coordinate v.

    Needs the remaining columns to have full column rank, so that the
    first coordinate determines the rest (as v times the solution for 1);
    then scanning v is exhaustive.
    """
    rest = matrix.select_columns(range(1, matrix.ncols))
    if len(_row_reduce(rest)[0]) != rest.ncols:
        raise ValueError("remaining columns are not independent; the scan would not be exhaustive")
    y = _solve_rest(matrix)
    if y is None:
        return None
    for v in range(1, limit + 1):
        if all((v * q).denominator == 1 for q in y):
            return v
    return None


def min_first_coordinate(matrix: IntMatrix, family: str, delta: int, s: int | None = None,
                         verify_limit: int = 1000) -> int:
    """Minimal |x₀| over nonzero integer kernel vectors of a generated matrix.

    The value is the exact lcm; when it is at most ``verify_limit`` it is
    also confirmed by an exhaustive scan of the first coordinate.
    """
    value = analytic_min(family, delta, s)
    expected = gen_harmonic(delta) if family == "harmonic" else gen_encoded(delta, s)
    if matrix != expected:
        raise ValueError("matrix was not generated by this family with these parameters")
    if any(matrix.matvec(witness(family, delta, s))):
        raise AssertionError("analytic witness is not in the kernel")
    if value <= verify_limit:
        found = search_min_first_coordinate(matrix, value)
        if found != value:
            raise AssertionError(f"kernel scan found {found}, lcm says {value}")
    return value


def growth_table(delta_range: Sequence[int], s_range: Sequence[int],
                 max_argument: int = DEFAULT_MAX_ARGUMENT) -> list[tuple[int, int, int, int]]:
    """Rows (Δ, s, lcm(2..Δ^{s+2}−1), bit length) of the encoded family."""
    out = []
    for delta in delta_range:
        for s in s_range:
            if delta < 2 or s < 1:
                raise ValueError("delta must be at least 2 and s at least 1")
            top = delta ** (s + 2) - 1
            if top > max_argument:
                raise ValueError(f"lcm argument {top} exceeds the limit {max_argument}")
            m = lcm_range(2, top)
            out.append((delta, s, m, m.bit_length()))
    return out
