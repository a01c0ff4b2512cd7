"""Exact dynamic program for small dense integer programs.

Solves ``max c·y  s.t.  M y = rhs,  lower ≤ y ≤ upper`` by walking the
columns left to right and tracking the partial right-hand side reached so
far.  A state is kept only if the remaining columns can still close the gap
to ``rhs`` (interval test per row).  A backward pass computes the best
value-to-go, and the forward reconstruction picks the smallest value of each
variable that stays optimal, which yields the lexicographically smallest
optimum.
"""
from __future__ import annotations

from typing import NamedTuple, Sequence

from .core import IntMatrix, IntVector
from .errors import BudgetExceeded

DEFAULT_MAX_STATES = 10**6


class Solution(NamedTuple):
    y: IntVector
    value: int


def _suffix_ranges(cols, lower, upper, nrows):
    n = len(cols)
    lo = [[0] * nrows for _ in range(n + 1)]
    hi = [[0] * nrows for _ in range(n + 1)]
    for j in range(n - 1, -1, -1):
        for i in range(nrows):
            a = cols[j][i] * lower[j]
            b = cols[j][i] * upper[j]
            lo[j][i] = lo[j + 1][i] + min(a, b)
            hi[j][i] = hi[j + 1][i] + max(a, b)
    return lo, hi


def solve_small_ip(
    m: IntMatrix,
    rhs: Sequence[int],
    lower: Sequence[int],
    upper: Sequence[int],
    objective: Sequence[int] | None = None,
    max_states: int = DEFAULT_MAX_STATES,
) -> Solution | None:
    """Return the lexicographically smallest optimal solution, or None if infeasible.

    Raises:
        BudgetExceeded: more than ``max_states`` partial right-hand sides
            are live in one layer.
    """
    n, nrows = m.ncols, m.nrows
    if len(rhs) != nrows or len(lower) != n or len(upper) != n:
        raise ValueError("dimension mismatch between matrix, rhs and bounds")
    if objective is None:
        objective = (0,) * n
    elif len(objective) != n:
        raise ValueError("objective length does not match column count")
    if any(lo > hi for lo, hi in zip(lower, upper)):
        return None

    cols = m.columns()
    rhs = tuple(rhs)
    suf_lo, suf_hi = _suffix_ranges(cols, lower, upper, nrows)

    def viable(state, j):
        return all(
            suf_lo[j][i] <= rhs[i] - state[i] <= suf_hi[j][i] for i in range(nrows)
        )

    zero = (0,) * nrows
    if not viable(zero, 0):
        return None
    layers = [{zero}]
    for j in range(n):
        col = cols[j]
        nxt = set()
        for s in layers[-1]:
            for v in range(lower[j], upper[j] + 1):
                s2 = tuple(a + v * c for a, c in zip(s, col))
                if s2 not in nxt and viable(s2, j + 1):
                    nxt.add(s2)
        if len(nxt) > max_states:
            raise BudgetExceeded(f"{len(nxt)} live states exceed the cap of {max_states}")
        if not nxt:
            return None
        layers.append(nxt)

    if rhs not in layers[n]:
        return None

    # value_to_go[j][state]: best objective over columns j.. that ends at rhs
    value_to_go: list[dict] = [dict() for _ in range(n + 1)]
    value_to_go[n][rhs] = 0
    for j in range(n - 1, -1, -1):
        col, cj, nxt_val = cols[j], objective[j], value_to_go[j + 1]
        cur = value_to_go[j]
        for s in layers[j]:
            best = None
            for v in range(lower[j], upper[j] + 1):
                s2 = tuple(a + v * c for a, c in zip(s, col))
                tail = nxt_val.get(s2)
                if tail is not None:
                    val = cj * v + tail
                    if best is None or val > best:
                        best = val
            if best is not None:
                cur[s] = best
    if zero not in value_to_go[0]:
        return None

    y = []
    s = zero
    for j in range(n):
        target = value_to_go[j][s]
        col, cj, nxt_val = cols[j], objective[j], value_to_go[j + 1]
        for v in range(lower[j], upper[j] + 1):
            s2 = tuple(a + v * c for a, c in zip(s, col))
            tail = nxt_val.get(s2)
            if tail is not None and cj * v + tail == target:
                y.append(v)
                s = s2
                break
    return Solution(tuple(y), value_to_go[0][zero])


def feasible_small_ip(
    m: IntMatrix,
    rhs: Sequence[int],
    lower: Sequence[int],
    upper: Sequence[int],
    max_states: int = DEFAULT_MAX_STATES,
) -> IntVector | None:
    """Lexicographically smallest feasible point, or None."""
    sol = solve_small_ip(m, rhs, lower, upper, None, max_states)
    return None if sol is None else sol.y
