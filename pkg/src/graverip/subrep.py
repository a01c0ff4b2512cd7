"""Equal-sum submultisets of multisets with a common total.

Given multisets T_1..T_n of nonnegative vectors with the same total, find
nonempty S_i ⊆ T_i whose sums all agree.  For every T_i the set of sums
reachable by submultisets is computed on the box [0, ΣT_i] with a bounded
multiplicity DP; the smallest common nonzero point (‖·‖₁, then
lexicographic) is then traced back through the stored DP layers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import IntVector, as_vector
from .errors import BudgetExceeded

DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class VectorMultiset:
    """Multiset of nonnegative integer vectors stored as vector -> multiplicity."""

    dim: int
    counts: Mapping[IntVector, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for v, k in self.counts.items():
            v = as_vector(v)
            if len(v) != self.dim:
                raise ValueError(f"vector {v} does not have dimension {self.dim}")
            if k < 0:
                raise ValueError(f"negative multiplicity {k} for {v}")
            if k:
                clean[v] = clean.get(v, 0) + k
        object.__setattr__(self, "counts", dict(sorted(clean.items())))

    @classmethod
    def from_list(cls, vectors: Iterable[Sequence[int]], dim: int | None = None) -> VectorMultiset:
        vectors = [tuple(v) for v in vectors]
        if dim is None:
            if not vectors:
                raise ValueError("dim is required for an empty multiset")
            dim = len(vectors[0])
        counts: dict[IntVector, int] = {}
        for v in vectors:
            counts[v] = counts.get(v, 0) + 1
        return cls(dim, counts)

    def total(self) -> IntVector:
        out = [0] * self.dim
        for v, k in self.counts.items():
            for i, x in enumerate(v):
                out[i] += k * x
        return tuple(out)

    def size(self) -> int:
        return sum(self.counts.values())

    def elements(self) -> list[IntVector]:
        return [v for v, k in self.counts.items() for _ in range(k)]

    def contains(self, other: VectorMultiset) -> bool:
        return all(self.counts.get(v, 0) >= k for v, k in other.counts.items())

    def __len__(self):
        return self.size()


def subrep_size_bound(d: int, delta: int) -> int:
    """d²·Δ·ℓ̄·(16Δ(d+1)+1)^{d(ℓ̄−1)} with ℓ̄ = ((2Δ+1)^d)^d.

    ℓ̄ bounds the number of bases of the point set {‖p‖∞ ≤ Δ}, whose size
    is taken as (2Δ+1)^d.
    """
    if d < 1 or delta < 1:
        raise ValueError("d and delta must be at least 1")
    ell = ((2 * delta + 1) ** d) ** d
    return d * d * delta * ell * (16 * delta * (d + 1) + 1) ** (d * (ell - 1))


def within_size_bound(size: int, d: int, delta: int) -> bool:
    """size ≤ subrep_size_bound(d, delta), without building huge bounds.

    The bound is at least 2^{d(ℓ̄−1)}, so a size below that passes at once;
    otherwise the exponent is small and the bound is computed exactly.
    """
    ell = ((2 * delta + 1) ** d) ** d
    if size.bit_length() <= d * (ell - 1):
        return True
    return size <= subrep_size_bound(d, delta)


def _reachable_layers(ms: VectorMultiset, shape: tuple[int, ...]) -> list[np.ndarray]:
    """layers[j] marks the sums reachable with the first j distinct vectors."""
    cur = np.zeros(shape, dtype=bool)
    cur[(0,) * len(shape)] = True
    layers = [cur]
    for v, k in ms.counts.items():
        nxt = cur.copy()
        if any(v):
            shifted = cur
            for _ in range(k):
                moved = np.zeros(shape, dtype=bool)
                dst = tuple(slice(x, None) for x in v)
                src = tuple(slice(0, n - x) for n, x in zip(shape, v))
                moved[dst] = shifted[src]
                if not moved.any():
                    break
                nxt |= moved
                shifted = moved
        layers.append(nxt)
        cur = nxt
    return layers


def _trace_back(ms: VectorMultiset, layers: list[np.ndarray], point: IntVector) -> VectorMultiset:
    items = list(ms.counts.items())
    chosen: dict[IntVector, int] = {}
    p = list(point)
    for j in range(len(items) - 1, -1, -1):
        v, k = items[j]
        prev = layers[j]
        for c in range(k + 1):
            q = tuple(a - c * x for a, x in zip(p, v))
            if min(q) >= 0 and prev[q]:
                if c:
                    chosen[v] = c
                p = list(q)
                break
        else:
            raise AssertionError("reachable point lost during trace back")
    if any(p):
        raise AssertionError("trace back did not reach the origin")
    return VectorMultiset(ms.dim, chosen)


def find_common_submultisets(
    sets: Sequence[VectorMultiset], delta: int, budget: int = DEFAULT_BUDGET
) -> list[VectorMultiset]:
    """Nonempty S_i ⊆ T_i with Σ S_1 = … = Σ S_n.

    The common sum is the smallest nonzero point reachable in every T_i,
    ordered by ‖·‖₁ and then lexicographically.  If every T_i contains the
    zero vector, S_i = {0} for all i.

    Raises:
        ValueError: the totals differ, an entry lies outside [0, delta],
            or no sets are given.
        BudgetExceeded: the DP box has more than ``budget`` points.
    """
    if not sets:
        raise ValueError("at least one multiset is required")
    dim = sets[0].dim
    for i, ms in enumerate(sets):
        if ms.dim != dim:
            raise ValueError(f"multiset {i} has dimension {ms.dim}, expected {dim}")
        if ms.size() == 0:
            raise ValueError(f"multiset {i} is empty")
        for v in ms.counts:
            if min(v) < 0 or max(v) > delta:
                raise ValueError(f"multiset {i} has vector {v} outside [0, {delta}]")
    total = sets[0].total()
    for i, ms in enumerate(sets[1:], start=1):
        if ms.total() != total:
            raise ValueError(f"multiset {i} sums to {ms.total()}, expected {total}")

    zero = (0,) * dim
    if all(zero in ms.counts for ms in sets):
        return [VectorMultiset(dim, {zero: 1}) for _ in sets]

    shape = tuple(x + 1 for x in total)
    volume = prod(shape)
    if volume > budget:
        raise BudgetExceeded(f"sum box {total} has {volume} points, budget is {budget}")
    all_layers = [_reachable_layers(ms, shape) for ms in sets]
    common = np.ones(shape, dtype=bool)
    for layers in all_layers:
        common &= layers[-1]
    common[(0,) * dim] = False
    pts = np.argwhere(common)
    if len(pts) == 0:
        # cannot happen for equal totals: the totals themselves are common
        raise AssertionError("no common nonzero sum")
    best = min((tuple(int(x) for x in p) for p in pts), key=lambda p: (sum(p), p))
    return [_trace_back(ms, layers, best) for ms, layers in zip(sets, all_layers)]


def common_sum(parts: Sequence[VectorMultiset]) -> IntVector:
    sums = {p.total() for p in parts}
    if len(sums) != 1:
        raise ValueError("parts do not share a common sum")
    return sums.pop()
