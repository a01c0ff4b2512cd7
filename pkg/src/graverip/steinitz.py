"""Constructive Steinitz reordering.

Given zero-sum vectors v_1..v_n in dimension d with ‖v_i‖∞ ≤ Δ, find an
order whose every prefix sum has ‖·‖∞ ≤ dΔ.

The construction keeps nested index sets A_n ⊃ A_{n-1} ⊃ … ⊃ A_d together
with weights μ ∈ [0,1]^{A_k} satisfying

    Σ μ_i v_i = 0,   Σ μ_i = k − d.

Going from A_k to A_{k-1}, the weights are rescaled to sum k−1−d and then
moved to a vertex of that polytope; a vertex has at most d+1 fractional
entries, which forces some μ_i = 0, and that index is placed at position k.
The prefix A_k then sums to Σ (1−μ_i) v_i with Σ (1−μ_i) = d, giving the
bound.  All weights are exact fractions.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

from .core import norm_inf


def _null_vector(columns: list[list[int]]) -> list[int]:
    """Nonzero integer w with Σ w_j·columns[j] = 0; needs more columns than rows."""
    nrows = len(columns[0])
    ncols = len(columns)
    mat = [[columns[j][i] for j in range(ncols)] for i in range(nrows)]
    pivots = []
    row = 0
    for col in range(ncols):
        piv = next((r for r in range(row, nrows) if mat[r][col] != 0), None)
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        p = mat[row][col]
        for r in range(row + 1, nrows):
            a = mat[r][col]
            if a:
                new = [p * x - a * y for x, y in zip(mat[r], mat[row])]
                g = gcd(*new)
                mat[r] = [x // g for x in new] if g > 1 else new
        pivots.append(col)
        row += 1
        if row == nrows:
            break
    free = next(c for c in range(ncols) if c not in pivots)
    w = [0] * ncols
    w[free] = 1
    for r in range(len(pivots) - 1, -1, -1):
        pc = pivots[r]
        num = -sum(mat[r][c] * w[c] for c in range(pc + 1, ncols))
        den = mat[r][pc]
        g = gcd(num, den)
        num, den = num // g, den // g
        if den < 0:
            num, den = -num, -den
        if den != 1:
            w = [x * den for x in w]
        w[pc] = num
    return w


def _push_to_vertex(mu: dict[int, Fraction], vectors, d: int) -> None:
    """Move μ inside {Σ μ_i v_i = const, Σ μ_i = const, 0 ≤ μ ≤ 1} until at
    most d+1 entries are strictly fractional."""
    frac = [i for i in sorted(mu) if 0 < mu[i] < 1]
    while len(frac) > d + 1:
        idx = frac[: d + 2]
        w = _null_vector([list(vectors[i]) + [1] for i in idx])
        step = None
        for i, wi in zip(idx, w):
            if wi > 0:
                lim = (1 - mu[i]) / wi
            elif wi < 0:
                lim = mu[i] / -wi
            else:
                continue
            if step is None or lim < step:
                step = lim
        for i, wi in zip(idx, w):
            if wi:
                mu[i] += step * wi
        hit = {i for i in idx if mu[i] == 0 or mu[i] == 1}
        frac = [i for i in frac if i not in hit]


def _check_input(vectors: Sequence[Sequence[int]], delta: int) -> int:
    if not vectors:
        return 0
    d = len(vectors[0])
    if d < 1:
        raise ValueError("dimension must be at least 1")
    for k, v in enumerate(vectors):
        if len(v) != d:
            raise ValueError(f"vector {k} has dimension {len(v)}, expected {d}")
        if norm_inf(v) > delta:
            raise ValueError(f"vector {k} has infinity norm {norm_inf(v)} > delta={delta}")
    total = [sum(v[i] for v in vectors) for i in range(d)]
    if any(total):
        raise ValueError(f"vectors do not sum to zero (sum = {tuple(total)})")
    return d


def steinitz_reorder(vectors: Sequence[Sequence[int]], delta: int) -> list[int]:
    """Return a permutation whose prefix sums all have ‖·‖∞ ≤ d·delta.

    Raises:
        ValueError: the vectors do not sum to zero, or some ‖v_i‖∞ > delta.
    """
    d = _check_input(vectors, delta)
    n = len(vectors)
    if n <= d:
        return list(range(n))
    active = list(range(n))
    mu = {i: Fraction(n - d, n) for i in active}
    removed = []
    for k in range(n, d, -1):
        factor = Fraction(k - 1 - d, k - d)
        for i in active:
            mu[i] *= factor
        _push_to_vertex(mu, vectors, d)
        drop = min(i for i in active if mu[i] == 0)
        active.remove(drop)
        del mu[drop]
        removed.append(drop)
    return sorted(active) + removed[::-1]


def prefix_radius(vectors: Sequence[Sequence[int]], perm: Sequence[int]) -> int:
    """max_k ‖Σ_{i≤k} v_{perm(i)}‖∞."""
    if sorted(perm) != list(range(len(vectors))):
        raise ValueError("perm is not a permutation of the vector indices")
    if not vectors:
        return 0
    acc = [0] * len(vectors[0])
    best = 0
    for i in perm:
        for j, x in enumerate(vectors[i]):
            acc[j] += x
        best = max(best, norm_inf(acc))
    return best
