"""Tree-structured (multi-stage) integer programs.

A tree instance is a block matrix whose blocks carry a row interval and a
column interval in the global matrix.  Row sets of any two blocks nest or
are disjoint, so they form a rooted tree; the root spans every row.  The
variables of a block interact only with rows of that block, so once the
variables of all ancestors are fixed, sibling subtrees decouple.

The augmenting-step search guesses the variables of every non-leaf block
(‖·‖₁ ≤ L), passes the remaining right-hand side down to the children and
solves leaves with the exact block DP.  Subproblems are memoized on
(block, right-hand side).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .blockip import solve_small_ip
from .core import IntMatrix, IntVector, TwoStageInstance, Violation, as_vector, dot, norm1
from .errors import BudgetExceeded, InvalidInstance
from .twostage import (
    INFEASIBLE, BUDGET_STOPPED, SolveReport, SolverConfig, augment, candidate_heads, step_bounds,
)


@dataclass(frozen=True)
class TreeBlock:
    rows: tuple[int, int]
    cols: tuple[int, int]
    parent: int | None
    matrix: IntMatrix


@dataclass(frozen=True)
class TreeInstance:
    nrows: int
    ncols: int
    blocks: tuple[TreeBlock, ...]
    rhs: IntVector
    lower: IntVector
    upper: IntVector
    objective: IntVector

    def children(self, k: int) -> list[int]:
        return [j for j, b in enumerate(self.blocks) if b.parent == k]

    def root(self) -> int:
        return next(k for k, b in enumerate(self.blocks) if b.parent is None)

    def depth_of(self, k: int) -> int:
        d = 0
        while self.blocks[k].parent is not None:
            k = self.blocks[k].parent
            d += 1
        return d

    @property
    def depth(self) -> int:
        """Longest root-to-leaf path in edges (0 for a single block)."""
        return max(self.depth_of(k) for k in range(len(self.blocks)))

    @property
    def n_levels(self) -> int:
        return self.depth + 1

    @property
    def delta(self) -> int:
        return max(b.matrix.delta for b in self.blocks)

    def level_widths(self) -> list[int]:
        """Column counts s₁…s_t of the non-leaf levels, leaves excluded."""
        widths = {}
        for k, b in enumerate(self.blocks):
            widths.setdefault(self.depth_of(k), b.cols[1] - b.cols[0])
        return [widths[d] for d in range(self.depth)]

    def objective_value(self, x: Sequence[int]) -> int:
        return dot(self.objective, x)


def assemble_tree_matrix(inst: TreeInstance) -> IntMatrix:
    rows = [[0] * inst.ncols for _ in range(inst.nrows)]
    for b in inst.blocks:
        for i in range(b.rows[1] - b.rows[0]):
            for j in range(b.cols[1] - b.cols[0]):
                rows[b.rows[0] + i][b.cols[0] + j] += b.matrix.data[i][j]
    return IntMatrix.from_rows(rows, inst.ncols)


def tree_residual(inst: TreeInstance, x: Sequence[int]) -> IntVector:
    out = [-v for v in inst.rhs]
    for b in inst.blocks:
        y = x[b.cols[0]:b.cols[1]]
        for i, row in enumerate(b.matrix.data):
            out[b.rows[0] + i] += dot(row, y)
    return tuple(out)


def _nested_or_disjoint(a, b) -> bool:
    if a[1] <= b[0] or b[1] <= a[0]:
        return True
    return (a[0] <= b[0] and b[1] <= a[1]) or (b[0] <= a[0] and a[1] <= b[1])


def _contains(outer, inner) -> bool:
    return outer[0] <= inner[0] and inner[1] <= outer[1]


def validate_tree_shape(inst: TreeInstance) -> list[Violation]:
    """Every shape violation; an empty list means the tree is well formed."""
    out: list[Violation] = []
    blocks = inst.blocks
    if not blocks:
        return [Violation("tree", None, "no blocks")]
    roots = [k for k, b in enumerate(blocks) if b.parent is None]
    if len(roots) != 1:
        out.append(Violation("tree", None, f"expected one root block, found {len(roots)}"))
    for k, b in enumerate(blocks):
        nr, nc = b.rows[1] - b.rows[0], b.cols[1] - b.cols[0]
        if not (0 <= b.rows[0] <= b.rows[1] <= inst.nrows) or not (0 <= b.cols[0] <= b.cols[1] <= inst.ncols):
            out.append(Violation("interval", k, f"block {k} intervals {b.rows}, {b.cols} lie outside the matrix"))
        if b.matrix.shape != (nr, nc):
            out.append(Violation("dimension", k, f"block {k} matrix is {b.matrix.nrows}x{b.matrix.ncols}, intervals say {nr}x{nc}"))
        if b.parent is not None:
            if not 0 <= b.parent < len(blocks) or b.parent == k:
                out.append(Violation("tree", k, f"block {k} has invalid parent {b.parent}"))
            elif not _contains(blocks[b.parent].rows, b.rows):
                out.append(Violation("nesting", k, f"block {k} rows {b.rows} are not inside parent {b.parent} rows {blocks[b.parent].rows}"))
    if out:
        return out
    for k in range(len(blocks)):
        seen, j = set(), k
        while blocks[j].parent is not None:
            if j in seen:
                return out + [Violation("tree", k, f"parent links of block {k} form a cycle")]
            seen.add(j)
            j = blocks[j].parent
    root = roots[0]
    if blocks[root].rows != (0, inst.nrows):
        out.append(Violation("nesting", root, f"root block rows {blocks[root].rows} do not span all {inst.nrows} rows"))
    for a, b in itertools.combinations(range(len(blocks)), 2):
        if not _nested_or_disjoint(blocks[a].rows, blocks[b].rows):
            out.append(Violation("nesting", a, f"blocks {a} and {b} have partially overlapping rows"))
        elif blocks[a].parent == blocks[b].parent and blocks[a].parent is not None:
            ra, rb = blocks[a].rows, blocks[b].rows
            if not (ra[1] <= rb[0] or rb[1] <= ra[0]):
                out.append(Violation("nesting", a, f"sibling blocks {a} and {b} share rows"))
    covered = sorted(b.cols for b in blocks)
    pos = 0
    for lo, hi in covered:
        if lo != pos:
            out.append(Violation("columns", None, f"columns {pos}..{lo} are not covered exactly once"))
        pos = max(pos, hi)
    if pos != inst.ncols:
        out.append(Violation("columns", None, f"columns {pos}..{inst.ncols} are not covered"))
    by_depth: dict[int, set[int]] = {}
    for k, b in enumerate(blocks):
        by_depth.setdefault(inst.depth_of(k), set()).add(b.cols[1] - b.cols[0])
    for d, widths in sorted(by_depth.items()):
        if len(widths) > 1:
            out.append(Violation("levels", d, f"blocks at depth {d} have different column counts {sorted(widths)}"))
    if len(inst.rhs) != inst.nrows:
        out.append(Violation("dimension", None, f"rhs has length {len(inst.rhs)}, expected {inst.nrows}"))
    for name in ("lower", "upper", "objective"):
        if len(getattr(inst, name)) != inst.ncols:
            out.append(Violation("dimension", None, f"{name} has length {len(getattr(inst, name))}, expected {inst.ncols}"))
    for j, (lo, hi) in enumerate(zip(inst.lower, inst.upper)):
        if lo > hi:
            out.append(Violation("bounds", j, f"lower {lo} > upper {hi}"))
    return out


def ensure_valid_tree(inst: TreeInstance) -> None:
    violations = validate_tree_shape(inst)
    if violations:
        raise InvalidInstance(violations)


def lift_two_stage(inst: TwoStageInstance) -> TreeInstance:
    """Two-level tree: the stacked A blocks form the root, each B block a leaf."""
    root = IntMatrix(inst.nrows, inst.s, tuple(row for a in inst.a_blocks for row in a.data))
    blocks = [TreeBlock((0, inst.nrows), (0, inst.s), None, root)]
    for i in range(inst.n):
        sl = inst.tail_slice(i)
        blocks.append(TreeBlock((i * inst.r, (i + 1) * inst.r), (sl.start, sl.stop), 0, inst.b_blocks[i]))
    return TreeInstance(inst.nrows, inst.ncols, tuple(blocks), inst.rhs, inst.lower, inst.upper, inst.objective)


def build_tree(nrows: int, ncols: int, blocks, rhs, lower, upper, objective) -> TreeInstance:
    """Build from plain data: blocks as (rows, cols, parent, matrix rows)."""
    tb = []
    for rows, cols, parent, mat in blocks:
        m = mat if isinstance(mat, IntMatrix) else IntMatrix.from_rows(mat, cols[1] - cols[0])
        tb.append(TreeBlock(tuple(rows), tuple(cols), parent, m))
    return TreeInstance(nrows, ncols, tuple(tb), as_vector(rhs), as_vector(lower), as_vector(upper), as_vector(objective))


class _StepSearch:
    """Best cycle y of the tree with z + λy in bounds and ‖y_v‖₁ ≤ cap on non-leaf blocks.

    With ``cap=None`` the guesses range over the full box, which turns the
    search into an exact solver for the original problem (used for the
    starting point).
    """

    def __init__(self, inst: TreeInstance, lo, hi, objective, cap, config: SolverConfig):
        self.inst = inst
        self.lo, self.hi = lo, hi
        self.objective = objective
        self.cap = cap
        self.config = config
        self.memo: dict = {}
        self.kids = [inst.children(k) for k in range(len(inst.blocks))]

    def best(self, k: int, rhs: IntVector):
        """(value, {block: values}) for the subtree of block k with right-hand side rhs on its rows."""
        key = (k, rhs)
        if key in self.memo:
            return self.memo[key]
        blk = self.inst.blocks[k]
        c0, c1 = blk.cols
        lo, hi, obj = self.lo[c0:c1], self.hi[c0:c1], self.objective[c0:c1]
        kids = self.kids[k]
        result = None
        if not kids:
            sol = solve_small_ip(blk.matrix, rhs, lo, hi, obj, self.config.max_states)
            if sol is not None:
                result = (sol.value, ((k, sol.y),))
        else:
            own = [i for i in range(blk.rows[1] - blk.rows[0])
                   if not any(self.inst.blocks[j].rows[0] <= blk.rows[0] + i < self.inst.blocks[j].rows[1] for j in kids)]
            if self.cap is None:
                guesses = candidate_heads(lo, hi, sum(max(abs(a), abs(b)) for a, b in zip(lo, hi)), self.config.max_heads)
            else:
                guesses = candidate_heads(lo, hi, self.cap, self.config.max_heads)
            for y in guesses:
                ay = blk.matrix.matvec(y)
                if any(ay[i] != rhs[i] for i in own):
                    continue
                total, parts = dot(obj, y), [(k, y)]
                for j in kids:
                    r0 = self.inst.blocks[j].rows[0] - blk.rows[0]
                    r1 = self.inst.blocks[j].rows[1] - blk.rows[0]
                    sub = self.best(j, tuple(rhs[i] - ay[i] for i in range(r0, r1)))
                    if sub is None:
                        break
                    total += sub[0]
                    parts.extend(sub[1])
                else:
                    if result is None or total > result[0]:
                        result = (total, tuple(parts))
        self.memo[key] = result
        return result

    def vector(self, parts) -> IntVector:
        x = [0] * self.inst.ncols
        for k, y in parts:
            c0 = self.inst.blocks[k].cols[0]
            x[c0:c0 + len(y)] = y
        return tuple(x)


def _internal_span(inst: TreeInstance) -> int:
    spans = [0]
    for k, b in enumerate(inst.blocks):
        if inst.children(k):
            spans.append(sum(u - l for l, u in zip(inst.lower[b.cols[0]:b.cols[1]], inst.upper[b.cols[0]:b.cols[1]])))
    return max(spans)


def tree_initial_solution(inst: TreeInstance, config: SolverConfig | None = None) -> IntVector | None:
    """Feasible point from an exact recursive feasibility search, or None."""
    config = config or SolverConfig()
    ensure_valid_tree(inst)
    search = _StepSearch(inst, inst.lower, inst.upper, (0,) * inst.ncols, None, config)
    res = search.best(inst.root(), inst.rhs)
    return None if res is None else search.vector(res[1])


def solve_multistage(inst: TreeInstance, config: SolverConfig | None = None) -> SolveReport:
    """Maximize c·x over a tree instance by augmentation."""
    config = config or SolverConfig()
    ensure_valid_tree(inst)
    try:
        x0 = tree_initial_solution(inst, config)
    except BudgetExceeded as exc:
        return SolveReport(None, None, 0, [], BUDGET_STOPPED, [], config.head_norm_cap or 1, str(exc))
    if x0 is None:
        return SolveReport(None, None, 0, [], INFEASIBLE, [], config.head_norm_cap or 1)
    root = inst.root()

    def search(z, lam, cap):
        lo, hi = step_bounds(inst.lower, inst.upper, z, lam)
        ss = _StepSearch(inst, lo, hi, inst.objective, cap, config)
        res = ss.best(root, (0,) * inst.nrows)
        if res is None or res[0] <= 0:
            return None
        y = ss.vector(res[1])
        b = inst.blocks[root]
        return y[b.cols[0]:b.cols[1]], y, res[0]

    span = _internal_span(inst)
    return augment(inst.objective, inst.lower, inst.upper, lambda x: tree_residual(inst, x), x0, search,
                   span, config, span)


def tower_bound(level_widths: Sequence[int], r: int, delta: int, max_digits: int = 10_000) -> int:
    """Tower recursion with unit constants: T = (Δr)^r, then T ← 2^{T^{sᵢ²}}.

    Raises:
        BudgetExceeded: the value would have more than ``max_digits`` decimal digits.
    """
    if r < 1 or delta < 1 or any(s < 1 for s in level_widths):
        raise ValueError("all parameters must be at least 1")
    value = (delta * r) ** r
    for s in level_widths:
        # 2^e has about 0.302·e digits; check e before building it
        if value > 1 and s * s * (value.bit_length() - 1) > max_digits.bit_length() + 8:
            raise BudgetExceeded(f"tower bound exceeds {max_digits} digits")
        exponent = value ** (s * s)
        if exponent * 30103 // 100000 > max_digits:
            raise BudgetExceeded(f"tower bound exceeds {max_digits} digits")
        value = 2 ** exponent
    if len(str(value)) > max_digits:
        raise BudgetExceeded(f"tower bound exceeds {max_digits} digits")
    return value
