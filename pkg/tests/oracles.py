"""Brute-force reference implementations used as ground truth.

None of these import the algorithmic modules of the package; they only
use plain tuples, itertools and (for the cone sieve) numpy.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np


def matvec(rows, x):
    return tuple(sum(a * b for a, b in zip(row, x)) for row in rows)


def naive_assemble(a_blocks, b_blocks):
    """Dense matrix of a two-stage instance, written out block by block."""
    n = len(a_blocks)
    r = len(a_blocks[0])
    s = len(a_blocks[0][0]) if r else 0
    t = len(b_blocks[0][0]) if r else 0
    out = []
    for i in range(n):
        for k in range(r):
            row = list(a_blocks[i][k]) + [0] * (n * t)
            for j in range(t):
                row[s + i * t + j] = b_blocks[i][k][j]
            out.append(row)
    return out


def box_points(lower, upper):
    return itertools.product(*[range(lo, hi + 1) for lo, hi in zip(lower, upper)])


def brute_ip(rows, rhs, lower, upper, objective):
    """(best value, lexicographically smallest maximizer) or None."""
    best = None
    for x in box_points(lower, upper):
        if matvec(rows, x) != tuple(rhs):
            continue
        v = sum(c * a for c, a in zip(objective, x))
        if best is None or v > best[0]:
            best = (v, x)
    return best


def brute_feasible(rows, rhs, lower, upper):
    return any(matvec(rows, x) == tuple(rhs) for x in box_points(lower, upper))


def _minor(u, v):
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(u, v))


def graver_oracle(rows, ncols, radius):
    """All ⊑-minimal nonzero kernel vectors inside [−radius, radius]^ncols.

    ``radius`` is an int or one radius per coordinate.  A vector is kept
    when no other nonzero kernel vector is a conformal minorant of it; since
    minorants of box points lie in the box, the result is exactly the set of
    Graver elements that fit the box.
    """
    radii = [radius] * ncols if isinstance(radius, int) else list(radius)
    kernel = [x for x in itertools.product(*[range(-q, q + 1) for q in radii])
              if any(x) and not any(matvec(rows, x))]
    out = set()
    for v in kernel:
        if not any(u != v and _minor(u, v) for u in kernel):
            out.add(v)
    return out


def prefix_radius(vectors, perm):
    d = len(vectors[0]) if vectors else 0
    acc = [0] * d
    best = 0
    for i in perm:
        acc = [a + b for a, b in zip(acc, vectors[i])]
        best = max([best] + [abs(a) for a in acc])
    return best


def cone_sieve(gens, shape):
    """Membership mask of int.cone(gens) on a box, by doubling shifts.

    For each generator g the set S is replaced by S + {0, g, 2g, …} using
    shifts by g, 2g, 4g, …; applying this once per generator yields every
    nonnegative combination.
    """
    m = np.zeros(shape, dtype=bool)
    m[(0,) * len(shape)] = True
    for g in gens:
        step = list(g)
        while all(x < n for x, n in zip(step, shape)):
            dst = tuple(slice(x, None) for x in step)
            src = tuple(slice(0, n - x) for n, x in zip(shape, step))
            shifted = np.zeros(shape, dtype=bool)
            shifted[dst] = m[src]
            m |= shifted
            step = [2 * x for x in step]
    return m


def cone_member_search(gens, point):
    """Witness λ found by exhaustive search over λᵢ ≤ max(point), or None."""
    top = max(point, default=0)
    for lam in itertools.product(range(top + 1), repeat=len(gens)):
        s = [0] * len(point)
        for k, g in zip(lam, gens):
            for i, x in enumerate(g):
                s[i] += k * x
        if tuple(s) == tuple(point):
            return lam
    return None


def primes_upto(n):
    return [p for p in range(2, n + 1) if all(p % q for q in range(2, int(p ** 0.5) + 1))]


def lcm_by_primes(lo, hi):
    """lcm(lo..hi) as the product of the largest prime powers in range."""
    out = 1
    for p in primes_upto(hi):
        best = 0
        for k in range(lo, hi + 1):
            e = 0
            while k % p == 0:
                k //= p
                e += 1
            best = max(best, e)
        out *= p ** best
    return out


def rational_solve(rows, rhs):
    """Unique rational solution of a full column rank system, or None if inconsistent."""
    m = [[Fraction(a) for a in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            raise ValueError("columns are dependent")
        m[r], m[p] = m[p], m[r]
        m[r] = [v / m[r][c] for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    return [m[k][-1] for k in range(ncols)]


def kernel_first_coordinates(rows, limit):
    """Values 1..limit taken by the first coordinate of integer kernel vectors.

    The other columns must be independent, so the first coordinate v fixes
    the rest as v times a rational vector; v is attained when that vector
    scaled by v is integral.
    """
    rest = [row[1:] for row in rows]
    y = rational_solve(rest, [-row[0] for row in rows])
    if y is None:
        return []
    return [v for v in range(1, limit + 1) if all((v * q).denominator == 1 for q in y)]


def harmonic_kernel_search(delta, limit):
    """Smallest x₁ in 1..limit admitting an integer kernel vector of gen_harmonic.

    Row k reads −x₁ + k·x_k = 0; every candidate x_k ∈ [−x₁, x₁] is tried.
    """
    for x1 in range(1, limit + 1):
        if all(any(k * xk == x1 for xk in range(-x1, x1 + 1)) for k in range(2, delta + 1)):
            return x1
    return None


def tree_brute(inst):
    """Optimum of a tree instance by enumerating its whole box."""
    best = None
    for x in box_points(inst.lower, inst.upper):
        out = [-v for v in inst.rhs]
        for b in inst.blocks:
            y = x[b.cols[0]:b.cols[1]]
            for i, row in enumerate(b.matrix.data):
                out[b.rows[0] + i] += sum(p * q for p, q in zip(row, y))
        if any(out):
            continue
        v = sum(c * a for c, a in zip(inst.objective, x))
        if best is None or v > best:
            best = v
    return best


def reachable_sums(elements):
    """Every sum of a submultiset, by plain set expansion."""
    dim = len(elements[0])
    sums = {(0,) * dim}
    for v in elements:
        sums |= {tuple(a + b for a, b in zip(s, v)) for s in sums}
    return sums


def _rank(rows, ncols):
    m = [[Fraction(a) for a in row] for row in rows]
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        for i in range(r + 1, len(m)):
            f = m[i][c] / m[r][c]
            m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
    return r


def _l1_ball(dim, radius):
    if dim == 0:
        yield ()
        return
    for x in range(-radius, radius + 1):
        for rest in _l1_ball(dim - 1, radius - abs(x)):
            yield (x,) + rest


def graver_by_free_coords(rows, ncols, bound):
    """Graver basis of all elements with ‖g‖₁ ≤ bound.

    Picks rank-many independent columns, enumerates the other coordinates
    over the ℓ₁ ball of the given radius and solves for the rest exactly.
    Minimality is then tested in order of ℓ₁ norm against the elements
    already kept: any conformal minorant contains a kept element.
    """
    rows = [list(r) for r in rows if any(r)]
    rank = _rank(rows, ncols) if rows else 0
    pivots = next(c for c in itertools.combinations(range(ncols), rank)
                  if _rank([[row[j] for j in c] for row in rows], rank) == rank) if rank else ()
    free = [j for j in range(ncols) if j not in pivots]
    # keep an independent subset of rows so the pivot system is square
    basis_rows = []
    for row in rows:
        if _rank(basis_rows + [row], ncols) > len(basis_rows):
            basis_rows.append(row)
    kernel = []
    for f in _l1_ball(len(free), bound):
        if not any(f):
            continue
        rhs = [-sum(row[j] * v for j, v in zip(free, f)) for row in basis_rows]
        sol = rational_solve([[row[j] for j in pivots] for row in basis_rows], rhs) if pivots else []
        if sol is None or any(q.denominator != 1 for q in sol):
            continue
        x = [0] * ncols
        for j, v in zip(free, f):
            x[j] = v
        for j, q in zip(pivots, sol):
            x[j] = int(q)
        if sum(abs(v) for v in x) <= bound and not any(matvec(rows, x)):
            kernel.append(tuple(x))
    kernel.sort(key=lambda v: (sum(map(abs, v)), v))
    out = []
    for v in kernel:
        if not any(_minor(u, v) for u in out):
            out.append(v)
    return set(out)


def two_stage_brute(inst):
    """Optimum of a two-stage instance: every head in the box, and for each
    head every tail of every block, independently."""
    best = None
    hs = slice(0, inst.s)
    for head in box_points(inst.lower[hs], inst.upper[hs]):
        total = sum(c * v for c, v in zip(inst.objective[hs], head))
        for i in range(inst.n):
            sl = slice(inst.s + i * inst.t, inst.s + (i + 1) * inst.t)
            a, b = inst.a_blocks[i].data, inst.b_blocks[i].data
            need = [q - sum(p * h for p, h in zip(row, head)) for row, q in zip(a, inst.rhs[i * inst.r:(i + 1) * inst.r])]
            vals = [sum(c * v for c, v in zip(inst.objective[sl], tail))
                    for tail in box_points(inst.lower[sl], inst.upper[sl]) if list(matvec(b, tail)) == need]
            if not vals:
                break
            total += max(vals)
        else:
            if best is None or total > best:
                best = total
    return best
