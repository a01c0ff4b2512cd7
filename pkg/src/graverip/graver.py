"""Graver bases of small integer matrices.

The basis is found by enumerating every kernel vector up to a ‖·‖₁ cap and
keeping the ⊑-minimal ones (u ⊑ g means u is sign-compatible with g and
|u_i| ≤ |g_i|).  Kernel vectors are enumerated through a pivot split: the
free coordinates range over an ℓ₁-ball and the pivot coordinates are solved
exactly from the row-reduced system.

Candidates are visited in increasing ‖·‖₁, so a candidate is decomposable
exactly when some already accepted Graver element is a proper ⊑-minorant
of it (every sign-compatible summand splits further into Graver elements
that are themselves minorants).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .core import IntMatrix, IntVector, conformal_le, norm1, sub
from .errors import BudgetExceeded, IncompleteBasis

DEFAULT_BUDGET = 5 * 10**6


def graver_norm_bound(m: int, delta: int) -> int:
    """(2mΔ+1)^m: no Graver element of an m-row matrix with entries in
    [−Δ, Δ] has larger ‖·‖₁."""
    if m < 1 or delta < 1:
        raise ValueError("m and delta must be at least 1")
    return (2 * m * delta + 1) ** m


def canonical(v: Sequence[int]) -> IntVector:
    """Representative of the pair ±v whose first nonzero entry is positive."""
    v = tuple(v)
    for x in v:
        if x:
            return v if x > 0 else tuple(-a for a in v)
    return v


def sort_key(v: Sequence[int]):
    return norm1(v), tuple(v)


@dataclass(frozen=True)
class GraverBasis:
    """Graver basis stored as one representative per ±pair.

    ``truncated`` is set when the enumeration cap was below the
    norm bound, so elements of larger norm may be missing.
    """

    matrix: IntMatrix
    representatives: tuple[IntVector, ...]
    norm_cap: int
    truncated: bool = False

    @property
    def elements(self) -> frozenset[IntVector]:
        out = set(self.representatives)
        out.update(tuple(-x for x in g) for g in self.representatives)
        return frozenset(out)

    def sorted_elements(self) -> list[IntVector]:
        return sorted(self.elements, key=sort_key)

    @property
    def max_norm(self) -> int:
        return max((norm1(g) for g in self.representatives), default=0)

    def __len__(self):
        return 2 * len(self.representatives)

    def __iter__(self):
        return iter(self.sorted_elements())

    def __contains__(self, v):
        return canonical(v) in set(self.representatives)


def _row_reduce(matrix: IntMatrix):
    """Reduced row echelon form over the rationals.

    Returns (rows, pivot_columns) with zero rows dropped.
    """
    mat = [[Fraction(x) for x in row] for row in matrix.data]
    pivots = []
    r = 0
    for c in range(matrix.ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def count_l1_ball(dim: int, radius: int) -> int:
    """Number of integer points with ‖x‖₁ ≤ radius in dimension dim."""
    return sum(2**k * comb(dim, k) * comb(radius, k) for k in range(dim + 1))


def _l1_ball(dim: int, radius: int) -> Iterator[list[int]]:
    if dim == 0:
        yield []
        return
    for x in range(-radius, radius + 1):
        for rest in _l1_ball(dim - 1, radius - abs(x)):
            yield [x] + rest


def kernel_vectors(matrix: IntMatrix, norm_cap: int, budget: int = DEFAULT_BUDGET) -> list[IntVector]:
    """All nonzero integer kernel vectors with ‖·‖₁ ≤ norm_cap, one per ±pair,
    sorted by (‖·‖₁, lexicographic)."""
    rows, pivots = _row_reduce(matrix)
    free = [c for c in range(matrix.ncols) if c not in pivots]
    if count_l1_ball(len(free), norm_cap) > budget:
        raise BudgetExceeded(
            f"{count_l1_ball(len(free), norm_cap)} free-coordinate points exceed budget {budget}"
        )
    # pivot value = -Σ_f row[f]·x_f
    coeffs = [[row[f] for f in free] for row in rows]
    out = []
    for xf in _l1_ball(len(free), norm_cap):
        if not any(xf):
            continue
        budget_left = norm_cap - sum(abs(x) for x in xf)
        vec = [0] * matrix.ncols
        for f, x in zip(free, xf):
            vec[f] = x
        ok = True
        for pc, cf in zip(pivots, coeffs):
            val = -sum(a * x for a, x in zip(cf, xf))
            if val.denominator != 1:
                ok = False
                break
            iv = val.numerator
            budget_left -= abs(iv)
            if budget_left < 0:
                ok = False
                break
            vec[pc] = iv
        if ok:
            v = tuple(vec)
            if v == canonical(v):
                out.append(v)
    out.sort(key=sort_key)
    return out


def _effective_cap(matrix: IntMatrix, norm_cap: int) -> tuple[int, bool]:
    """Shrink the cap using the norm bound of an independent row subset.

    Dropping dependent rows leaves the kernel unchanged and cannot raise the
    largest entry, so the bound for the smaller matrix is still valid.
    """
    if matrix.nrows == 0 or matrix.delta == 0:
        return norm_cap, False
    rows, _ = _row_reduce(matrix)
    rank = len(rows)
    if rank == 0:
        return norm_cap, False
    # rank rows of the original matrix that are independent
    chosen: list[int] = []
    for i in range(matrix.nrows):
        trial = matrix.select_rows(chosen + [i])
        if len(_row_reduce(trial)[0]) == len(chosen) + 1:
            chosen.append(i)
        if len(chosen) == rank:
            break
    sub_delta = matrix.select_rows(chosen).delta
    bound = graver_norm_bound(rank, sub_delta)
    return min(norm_cap, bound), norm_cap < bound


def graver_basis(matrix: IntMatrix, norm_cap: int | None = None, budget: int = DEFAULT_BUDGET) -> GraverBasis:
    """All Graver elements of ``matrix`` with ‖·‖₁ ≤ norm_cap.

    With ``norm_cap=None`` the norm bound is used and the result is complete.

    Raises:
        BudgetExceeded: the enumeration would visit more than ``budget``
            free-coordinate points.
    """
    if norm_cap is None:
        norm_cap = graver_norm_bound(max(matrix.nrows, 1), max(matrix.delta, 1))
    if matrix.delta == 0:
        # every unit vector is a kernel element and nothing smaller exists
        reps = tuple(tuple(int(i == j) for i in range(matrix.ncols)) for j in range(matrix.ncols))
        return GraverBasis(matrix, tuple(sorted(reps, key=sort_key)) if norm_cap >= 1 else (), norm_cap)
    cap, truncated = _effective_cap(matrix, norm_cap)
    accepted: list[IntVector] = []
    for v in kernel_vectors(matrix, cap, budget):
        n1 = norm1(v)
        if any(norm1(g) < n1 and (conformal_le(g, v) or conformal_le(tuple(-x for x in g), v)) for g in accepted):
            continue
        accepted.append(v)
    return GraverBasis(matrix, tuple(accepted), norm_cap, truncated)


def decompose_into_graver(
    matrix: IntMatrix, y: Sequence[int], basis: GraverBasis
) -> list[tuple[IntVector, int]]:
    """Write y as Σ μ_k g_k with every g_k ⊑ y, peeling greedily.

    At each step the largest-norm element that is still a minorant of the
    remainder is taken with the largest multiplicity that keeps the
    remainder sign-compatible.  More than 2·cols distinct summands is
    reported with a warning, not an error.

    Raises:
        ValueError: y is not in the kernel.
        IncompleteBasis: some nonzero remainder has no minorant in the basis.
    """
    y = tuple(y)
    if any(matrix.matvec(y)):
        raise ValueError("y is not in the kernel of the matrix")
    candidates = sorted(basis.elements, key=lambda g: (-norm1(g), g))
    rest = y
    out: dict[IntVector, int] = {}
    while any(rest):
        g = next((g for g in candidates if conformal_le(g, rest)), None)
        if g is None:
            raise IncompleteBasis(f"no basis element is a sign-compatible minorant of {rest}")
        mult = min(abs(r) // abs(x) for r, x in zip(rest, g) if x)
        rest = sub(rest, tuple(mult * x for x in g))
        out[g] = out.get(g, 0) + mult
    terms = list(out.items())
    if len(terms) > 2 * matrix.ncols:
        warnings.warn(
            f"decomposition uses {len(terms)} distinct elements, more than 2*cols={2 * matrix.ncols}",
            stacklevel=2,
        )
    return terms
