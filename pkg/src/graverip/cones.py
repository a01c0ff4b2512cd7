"""Integer cones: membership, intersections and the associated bounds.

An integer cone is the set of nonnegative integer combinations of a finite
set of nonnegative generators.  An intersection is computed on a box that
provably contains all of its indecomposable points (see
``intersection_box``): membership in every input cone is sieved over the
box, and the indecomposable members are read off in increasing ‖·‖₁.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb, gcd, lcm, prod
from typing import Iterable, Sequence

import numpy as np

from .blockip import feasible_small_ip, solve_small_ip
from .core import IntMatrix, IntVector, as_vector, norm1
from .errors import BudgetExceeded
from .graver import _row_reduce

DEFAULT_BUDGET = 10**7


def _key(v):
    return norm1(v), tuple(v)


def _member(gens: Sequence[IntVector], point: IntVector) -> IntVector | None:
    if not any(point):
        return (0,) * len(gens)
    if not gens:
        return None
    d = len(point)
    m = IntMatrix(d, len(gens), tuple(tuple(g[i] for g in gens) for i in range(d)))
    upper = [min(point[i] // g[i] for i in range(d) if g[i] > 0) for g in gens]
    return feasible_small_ip(m, point, [0] * len(gens), upper)


def _reduce(dim: int, vectors: Iterable[Sequence[int]]) -> tuple[IntVector, ...]:
    kept: list[IntVector] = []
    for v in sorted({as_vector(v) for v in vectors}, key=_key):
        if len(v) != dim:
            raise ValueError(f"generator {v} does not have dimension {dim}")
        if any(x < 0 for x in v):
            raise ValueError(f"generator {v} has a negative entry")
        if not any(v):
            continue
        if kept and _member(kept, v) is not None:
            continue
        kept.append(v)
    return tuple(kept)


@dataclass(frozen=True)
class GeneratorSet:
    """Indecomposable generators of an integer cone in dimension ``dim``.

    Construction drops zero vectors, duplicates and any vector that is a
    nonnegative integer combination of the others, then sorts by
    (‖·‖₁, lexicographic).
    """

    dim: int
    generators: tuple[IntVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "generators", _reduce(self.dim, self.generators))

    @classmethod
    def of(cls, vectors: Iterable[Sequence[int]], dim: int | None = None) -> GeneratorSet:
        vectors = [tuple(v) for v in vectors]
        if dim is None:
            if not vectors:
                raise ValueError("dim is required for an empty generator set")
            dim = len(vectors[0])
        return cls(dim, tuple(vectors))

    @property
    def delta(self) -> int:
        return max((max(g) for g in self.generators), default=0)

    def as_matrix(self) -> IntMatrix:
        return IntMatrix(self.dim, len(self.generators),
                         tuple(tuple(g[i] for g in self.generators) for i in range(self.dim)))

    def __len__(self):
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)


def cone_member(gen: GeneratorSet, point: Sequence[int]) -> IntVector | None:
    """A witness λ ≥ 0 with Σ λ_b b = point (lexicographically smallest in
    generator order), or None if the point is not in the cone."""
    point = as_vector(point)
    if len(point) != gen.dim:
        raise ValueError(f"point has dimension {len(point)}, cone has {gen.dim}")
    if any(x < 0 for x in point):
        raise ValueError("cone points must be nonnegative")
    return _member(gen.generators, point)


def min_witness(gen: GeneratorSet, point: Sequence[int]) -> IntVector | None:
    """Witness with the smallest ‖λ‖₁ (ties: lexicographically smallest)."""
    point = as_vector(point)
    if not any(point):
        return (0,) * len(gen)
    m = gen.as_matrix()
    upper = [min(point[i] // g[i] for i in range(gen.dim) if g[i] > 0) for g in gen.generators]
    sol = solve_small_ip(m, point, [0] * len(gen), upper, [-1] * len(gen))
    return None if sol is None else sol.y


def lemma4_bounds(d: int, delta: int) -> tuple[int, int]:
    """(witness bound, element bound) = ((2dΔ+1)^d, Δ(2dΔ+1)^d) for the
    generators of the intersection of two cones."""
    if d < 1 or delta < 1:
        raise ValueError("d and delta must be at least 1")
    w = (2 * d * delta + 1) ** d
    return w, delta * w


def lemma5_witness_bound(d: int, delta: int, ell: int) -> int:
    """(16Δ(d+1)+1)^{d(ℓ−1)}: witness bound for generators of an ℓ-fold
    intersection, with the explicit constant of the pigeonhole argument."""
    if d < 1 or delta < 1 or ell < 1:
        raise ValueError("d, delta and ell must be at least 1")
    return (16 * delta * (d + 1) + 1) ** (d * (ell - 1))


def _positive_circuits(rows: list[list[int]], ncols: int, budget: int) -> list[IntVector]:
    """Primitive integer x ≥ 0 of minimal support with K x = 0.

    These are the extreme rays of the cone {x ≥ 0 : Kx = 0}.  A support is a
    circuit exactly when its kernel is one-dimensional and spanned by a
    vector without zero entries.
    """
    k = IntMatrix(len(rows), ncols, tuple(tuple(r) for r in rows))
    rank = len(_row_reduce(k)[0])
    sizes = range(1, min(rank + 1, ncols) + 1)
    if sum(comb(ncols, s) for s in sizes) > budget:
        raise BudgetExceeded("too many candidate supports for the ray enumeration")
    rays = []
    for size in sizes:
        for supp in combinations(range(ncols), size):
            red, piv = _row_reduce(k.select_columns(supp))
            if size - len(piv) != 1:
                continue
            f = next(c for c in range(size) if c not in piv)
            x = [Fraction(0)] * size
            x[f] = Fraction(1)
            for row, pc in zip(red, piv):
                x[pc] = -row[f]
            if not (all(v > 0 for v in x) or all(v < 0 for v in x)):
                continue
            den = lcm(*(v.denominator for v in x))
            ints = [abs(int(v * den)) for v in x]
            g = gcd(*ints)
            full = [0] * ncols
            for c, v in zip(supp, ints):
                full[c] = v // g
            rays.append(tuple(full))
    return rays


def _cone_mask(gens: Sequence[IntVector], shape: tuple[int, ...]) -> np.ndarray:
    """Boolean membership of int.cone(gens) on the box with the given shape."""
    m = np.zeros(shape, dtype=bool)
    m[(0,) * len(shape)] = True
    for b in gens:
        ax = next(i for i, x in enumerate(b) if x > 0)
        if b[ax] >= shape[ax]:
            continue
        for x in range(b[ax], shape[ax]):
            dst = tuple(x if i == ax else slice(b[i], None) for i in range(len(shape)))
            src = tuple(x - b[ax] if i == ax else slice(0, shape[i] - b[i]) for i in range(len(shape)))
            m[dst] |= m[src]
    return m


def _indecomposables(mask: np.ndarray) -> list[IntVector]:
    """Indecomposable nonzero points of a monoid given by its box mask."""
    shape = mask.shape
    norms = np.zeros(shape, dtype=np.int64)
    for ax, size in enumerate(shape):
        view = [1] * len(shape)
        view[ax] = size
        norms = norms + np.arange(size).reshape(view)
    covered = np.zeros(shape, dtype=bool)
    covered[(0,) * len(shape)] = True
    found = []
    big = int(norms.max()) + 1
    while True:
        cand = mask & ~covered
        if not cand.any():
            return found
        level = int(np.where(cand, norms, big).min())
        # anything decomposable at this level splits into smaller, already found pieces
        for p in np.argwhere(cand & (norms == level)):
            g = tuple(int(x) for x in p)
            found.append(g)
            dst = tuple(slice(x, None) for x in g)
            src = tuple(slice(0, n - x) for n, x in zip(shape, g))
            covered[dst] |= mask[src]


def intersection_box(sets: Sequence[GeneratorSet], budget: int = DEFAULT_BUDGET) -> tuple[int, ...]:
    """Componentwise upper bound on the indecomposables of ∩ int.cone(Bⁱ).

    The joint representations J = {(λ¹, …, λˡ) ≥ 0 : B¹λ¹ = … = Bˡλˡ} form a
    saturated monoid, so each of its minimal elements is a combination of at
    most dim(J) extreme rays with coefficients below 1 (or a ray itself).
    Every indecomposable point of the intersection is the image of such an
    element, hence lies below the sum of the dim(J) largest ray images in
    each coordinate.
    """
    dim = sets[0].dim
    offsets = [0]
    for s in sets:
        offsets.append(offsets[-1] + len(s))
    ncols = offsets[-1]
    rows = []
    for k in range(1, len(sets)):
        for i in range(dim):
            row = [0] * ncols
            for j, g in enumerate(sets[0].generators):
                row[j] = g[i]
            for j, g in enumerate(sets[k].generators):
                row[offsets[k] + j] -= g[i]
            rows.append(row)
    rays = _positive_circuits(rows, ncols, budget)
    if not rays:
        return (0,) * dim
    ray_rank = len(_row_reduce(IntMatrix.from_rows(rays))[0])
    images = [[sum(r[j] * g[i] for j, g in enumerate(sets[0].generators)) for r in rays] for i in range(dim)]
    return tuple(sum(sorted(col, reverse=True)[:ray_rank]) for col in images)


def _check_bounded(sets: Sequence[GeneratorSet], delta: int) -> int:
    if not sets:
        raise ValueError("at least one generator set is required")
    dim = sets[0].dim
    for k, s in enumerate(sets):
        if s.dim != dim:
            raise ValueError(f"generator set {k} has dimension {s.dim}, expected {dim}")
        if s.delta > delta:
            raise ValueError(f"generator set {k} has an entry {s.delta} > delta={delta}")
    return dim


def intersect_many(sets: Sequence[GeneratorSet], delta: int, budget: int = DEFAULT_BUDGET) -> GeneratorSet:
    """Generating set of the intersection of all the given integer cones.

    The intersection is computed directly from the joint representations,
    not by repeated pairwise intersection.

    Raises:
        BudgetExceeded: the completion visited more than ``budget`` candidates.
    """
    dim = _check_bounded(sets, delta)
    if len(sets) == 1:
        return sets[0]
    if any(len(s) == 0 for s in sets):
        return GeneratorSet(dim, ())
    box = intersection_box(sets, budget)
    if not any(box):
        return GeneratorSet(dim, ())
    shape = tuple(b + 1 for b in box)
    volume = prod(shape)
    if volume > budget:
        raise BudgetExceeded(f"intersection box {box} has {volume} points, budget is {budget}")
    mask = np.ones(shape, dtype=bool)
    for st in sets:
        mask &= _cone_mask(st.generators, shape)
    return GeneratorSet(dim, tuple(_indecomposables(mask)))


def intersect_two(b1: GeneratorSet, b2: GeneratorSet, delta: int, budget: int = DEFAULT_BUDGET) -> GeneratorSet:
    """Generating set of int.cone(b1) ∩ int.cone(b2)."""
    return intersect_many([b1, b2], delta, budget)


def intersection_witnesses(sets: Sequence[GeneratorSet], point: Sequence[int]) -> list[IntVector]:
    """Minimum-‖·‖₁ witness of ``point`` in every cone; raises if it is missing from one."""
    out = []
    for k, s in enumerate(sets):
        w = min_witness(s, point)
        if w is None:
            raise ValueError(f"{tuple(point)} is not in cone {k}")
        out.append(w)
    return out
