"""Seeded random instances for tests and benchmarks.

All randomness comes from ``random.Random(seed)`` (Mersenne Twister), so a
seed and a parameter set always give the same instance.  Every generated
instance is feasible: a random point of the box is drawn first and the
right-hand side is set to its image.
"""
from __future__ import annotations

import random

from .core import TwoStageInstance, residual
from .multistage import TreeInstance, build_tree, tree_residual


def _block(rng: random.Random, rows: int, cols: int, delta: int) -> list[list[int]]:
    return [[rng.randint(-delta, delta) for _ in range(cols)] for _ in range(rows)]


def _box(rng: random.Random, ncols: int, width: int, shift: int) -> tuple[list[int], list[int]]:
    lower = [rng.randint(-shift, 0) for _ in range(ncols)]
    upper = [lo + rng.randint(0, width) for lo in lower]
    return lower, upper


def random_two_stage(rng: random.Random, n: int, r: int, s: int, t: int, delta: int,
                     width: int = 4, shift: int = 2, cost: int = 3) -> TwoStageInstance:
    """Feasible two-stage instance with entries in [−delta, delta] and box widths ≤ width."""
    a = [_block(rng, r, s, delta) for _ in range(n)]
    b = [_block(rng, r, t, delta) for _ in range(n)]
    ncols = s + n * t
    lower, upper = _box(rng, ncols, width, shift)
    point = [rng.randint(lo, hi) for lo, hi in zip(lower, upper)]
    shell = TwoStageInstance.build(a, b, [0] * (n * r), lower, upper, [0] * ncols)
    rhs = residual(shell, point)
    objective = [rng.randint(-cost, cost) for _ in range(ncols)]
    return TwoStageInstance.build(a, b, rhs, lower, upper, objective)


def random_two_stage_small(rng: random.Random, max_n: int = 3, max_rst: int = 2, max_delta: int = 2,
                           width: int = 4) -> TwoStageInstance:
    """Two-stage instance with every shape parameter drawn from its range."""
    return random_two_stage(
        rng, rng.randint(1, max_n), rng.randint(1, max_rst), rng.randint(1, max_rst),
        rng.randint(1, max_rst), rng.randint(1, max_delta), width=width,
    )


def random_tree(rng: random.Random, max_delta: int = 2, max_width: int = 2, max_children: int = 2,
                box: int = 2, cost: int = 3) -> TreeInstance:
    """Feasible three-level tree: root, middle blocks, leaves.

    Column widths are equal within each level; the box is [0, u] with
    u ≤ box in every coordinate.
    """
    delta = rng.randint(1, max_delta)
    s1, s2, t, r = (rng.randint(1, max_width) for _ in range(4))
    middles = []
    row = 0
    for _ in range(rng.randint(1, max_children)):
        start = row
        leaves = []
        for _ in range(rng.randint(1, max_children)):
            leaves.append((row, row + r))
            row += r
        middles.append(((start, row), leaves))
    nrows = row
    blocks = [((0, nrows), (0, s1), None, _block(rng, nrows, s1, delta))]
    col = s1
    for rows, leaves in middles:
        mid = len(blocks)
        blocks.append((rows, (col, col + s2), 0, _block(rng, rows[1] - rows[0], s2, delta)))
        col += s2
        for leaf_rows in leaves:
            blocks.append((leaf_rows, (col, col + t), mid, _block(rng, r, t, delta)))
            col += t
    lower = [0] * col
    upper = [rng.randint(0, box) for _ in range(col)]
    point = [rng.randint(lo, hi) for lo, hi in zip(lower, upper)]
    shell = build_tree(nrows, col, blocks, [0] * nrows, lower, upper, [0] * col)
    rhs = tree_residual(shell, point)
    objective = [rng.randint(-cost, cost) for _ in range(col)]
    return build_tree(nrows, col, blocks, rhs, lower, upper, objective)
