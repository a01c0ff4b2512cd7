"""Graver-style augmentation for two-stage stochastic integer programs.

An augmenting step is searched by enumerating the head y⁽⁰⁾ of the cycle
(‖y⁽⁰⁾‖₁ ≤ L) and, for every head, solving each block's tail problem

    max c⁽ⁱ⁾·y⁽ⁱ⁾  s.t.  B⁽ⁱ⁾y⁽ⁱ⁾ = −A⁽ⁱ⁾y⁽⁰⁾,  z + λy within bounds

independently with the exact block DP.  Steps are tried for several
multipliers λ and the best gain λ·c·y is applied until nothing improves.

Optimality certificate: if no step with λ = 1 improves z and L is at least
the ℓ₁-span of the head box, z is optimal.  Otherwise z* − z splits into
sign-compatible Graver elements g with z + g feasible, one of them improving,
and its head is bounded by the head span.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Sequence

from .blockip import DEFAULT_MAX_STATES, solve_small_ip
from .core import Cycle, IntMatrix, IntVector, TwoStageInstance, dot, ensure_valid, norm1, residual
from .errors import BudgetExceeded

OPTIMAL = "optimal"
BUDGET_STOPPED = "budget-stopped"
INFEASIBLE = "infeasible"

MULTIPLIER_POLICIES = ("doubling", "exhaustive")


def two_stage_graver_bound(r: int, s: int, delta: int) -> int:
    """(rsΔ)^{rs·(2rΔ+1)^{rs²}}: head and tail ℓ₁ bound with every hidden
    constant set to 1."""
    if r < 1 or s < 1 or delta < 1:
        raise ValueError("r, s and delta must be at least 1")
    return (r * s * delta) ** (r * s * (2 * r * delta + 1) ** (r * s * s))


def clipped_graver_bound(r: int, s: int, delta: int, limit: int) -> int:
    """min(two_stage_graver_bound(r, s, delta), limit) without building huge powers."""
    base = r * s * delta
    if base == 1:
        return min(1, limit)
    # base ≥ 2, so base^e ≥ 2^e > limit once e exceeds the bit length of limit
    exp_small = (2 * r * delta + 1) ** (r * s * s) * r * s <= max(limit, 1).bit_length()
    return min(two_stage_graver_bound(r, s, delta), limit) if exp_small else limit


@dataclass(frozen=True)
class SolverConfig:
    """Solver knobs.

    ``head_norm_cap=None`` selects the adaptive cap (start at 1, double when
    a larger cap finds a strictly better step).  With ``exact=True`` and no
    explicit cap, the cap is the theoretical bound clipped to the head span.
    """

    head_norm_cap: int | None = None
    exact: bool = False
    step_multipliers: str = "doubling"
    max_iterations: int = 10_000
    parallel_width: int = 1
    max_states: int = DEFAULT_MAX_STATES
    max_heads: int = 10**6

    def __post_init__(self):
        if self.head_norm_cap is not None and self.head_norm_cap < 1:
            raise ValueError("head_norm_cap must be at least 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")
        if self.parallel_width < 1:
            raise ValueError("parallel_width must be at least 1")
        if self.step_multipliers not in MULTIPLIER_POLICIES:
            raise ValueError(f"unknown multiplier policy {self.step_multipliers!r}")


@dataclass(frozen=True)
class Augmentation:
    head: IntVector
    multiplier: int
    gain: int


@dataclass
class SolveReport:
    solution: IntVector | None
    objective_value: int | None
    iterations: int
    augmentations: list[Augmentation] = field(default_factory=list)
    status: str = OPTIMAL
    trace: list[int] = field(default_factory=list)
    head_norm_cap: int = 1
    note: str = ""
    # visited points, start first; kept out of to_text
    path: list[IntVector] = field(default_factory=list)

    def to_text(self) -> str:
        """Deterministic key: value rendering (no timing information)."""
        lines = [
            f"status: {self.status}",
            f"objective: {'-' if self.objective_value is None else self.objective_value}",
            f"solution: {'-' if self.solution is None else ' '.join(map(str, self.solution))}",
            f"iterations: {self.iterations}",
            f"head_norm_cap: {self.head_norm_cap}",
            f"trace: {' '.join(map(str, self.trace))}",
        ]
        for a in self.augmentations:
            lines.append(f"step: head={list(a.head)} lambda={a.multiplier} gain={a.gain}")
        if self.note:
            lines.append(f"note: {self.note}")
        return "\n".join(lines) + "\n"


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def step_bounds(lower, upper, z, lam) -> tuple[list[int], list[int]]:
    """Range of y with lower ≤ z + λy ≤ upper, coordinatewise."""
    lo = [_ceil_div(l - x, lam) for l, x in zip(lower, z)]
    hi = [(u - x) // lam for u, x in zip(upper, z)]
    return lo, hi


def candidate_heads(lo: Sequence[int], hi: Sequence[int], cap: int, max_heads: int = 10**6) -> list[IntVector]:
    """Integer heads in the box [lo, hi] with ‖h‖₁ ≤ cap, in (‖·‖₁, lexicographic) order."""
    ranges = [range(max(a, -cap), min(b, cap) + 1) for a, b in zip(lo, hi)]
    size = 1
    for r in ranges:
        size *= len(r)
    if size > max_heads:
        raise BudgetExceeded(f"{size} candidate heads exceed the cap of {max_heads}")
    heads = [h for h in itertools.product(*ranges) if norm1(h) <= cap]
    heads.sort(key=lambda h: (norm1(h), h))
    return heads


class _TailSolver:
    """Per-call memo of block tail problems keyed on (block, right-hand side)."""

    def __init__(self, inst: TwoStageInstance, z, lam, max_states):
        self.inst = inst
        self.max_states = max_states
        self.memo: dict = {}
        self.bounds = []
        for i in range(inst.n):
            sl = inst.tail_slice(i)
            self.bounds.append(step_bounds(inst.lower[sl], inst.upper[sl], z[sl], lam))

    def solve(self, i: int, head: IntVector):
        rhs = tuple(-x for x in self.inst.a_blocks[i].matvec(head))
        key = (i, rhs)
        if key not in self.memo:
            lo, hi = self.bounds[i]
            obj = self.inst.objective[self.inst.tail_slice(i)]
            self.memo[key] = solve_small_ip(self.inst.b_blocks[i], rhs, lo, hi, obj, self.max_states)
        return self.memo[key]


def _evaluate_heads(inst, z, lam, heads, max_states):
    """Best (value, index, tails) over the given heads; ties keep the first."""
    tails = _TailSolver(inst, z, lam, max_states)
    c0 = inst.objective[inst.head_slice()]
    best = None
    for idx, h in enumerate(heads):
        total = dot(c0, h)
        parts = []
        for i in range(inst.n):
            sol = tails.solve(i, h)
            if sol is None:
                break
            total += sol.value
            parts.append(sol.y)
        else:
            if best is None or total > best[0]:
                best = (total, idx, tuple(parts))
    return best


def _evaluate_chunk(args):
    inst, z, lam, heads, offset, max_states = args
    res = _evaluate_heads(inst, z, lam, heads, max_states)
    if res is None:
        return None
    return res[0], res[1] + offset, res[2]


def best_cycle_with_value(
    inst: TwoStageInstance,
    z: Sequence[int],
    lam: int,
    cap: int,
    config: SolverConfig | None = None,
    pool: ProcessPoolExecutor | None = None,
) -> tuple[Cycle, int] | None:
    """(cycle, c·y) maximizing c·y among cycles with ‖y⁽⁰⁾‖₁ ≤ cap and z + λy
    within bounds, or None when no cycle has c·y > 0."""
    config = config or SolverConfig()
    if lam < 1 or cap < 0:
        raise ValueError("lam must be at least 1 and cap nonnegative")
    z = tuple(z)
    hs = inst.head_slice()
    lo, hi = step_bounds(inst.lower[hs], inst.upper[hs], z[hs], lam)
    heads = candidate_heads(lo, hi, cap, config.max_heads)
    if not heads:
        return None
    if pool is not None and config.parallel_width > 1 and len(heads) > 1:
        width = config.parallel_width
        size = -(-len(heads) // width)
        jobs = [(inst, z, lam, heads[k:k + size], k, config.max_states) for k in range(0, len(heads), size)]
        best = None
        # chunks come back in submission order, so ties still keep the earliest head
        for res in pool.map(_evaluate_chunk, jobs):
            if res is not None and (best is None or res[0] > best[0]):
                best = res
    else:
        best = _evaluate_heads(inst, z, lam, heads, config.max_states)
    if best is None or best[0] <= 0:
        return None
    value, idx, parts = best
    return Cycle(heads[idx], parts), value


def best_cycle(inst: TwoStageInstance, z: Sequence[int], lam: int, cap: int,
               config: SolverConfig | None = None) -> Cycle | None:
    """Best augmenting cycle for multiplier λ and head cap, or None."""
    res = best_cycle_with_value(inst, z, lam, cap, config)
    return None if res is None else res[0]


def multipliers(policy: str, width: int) -> list[int]:
    """λ values to try: 1, 2, 4, … (doubling) or 1..width (exhaustive)."""
    width = max(width, 1)
    if policy == "exhaustive":
        return list(range(1, width + 1))
    out, lam = [], 1
    while lam <= width:
        out.append(lam)
        lam *= 2
    return out


def augment(
    objective: Sequence[int],
    lower: Sequence[int],
    upper: Sequence[int],
    residual_fn: Callable[[IntVector], IntVector],
    x0: Sequence[int],
    search: Callable[[IntVector, int, int], tuple[IntVector, IntVector, int] | None],
    head_span: int,
    config: SolverConfig,
    exact_cap: int | None = None,
) -> SolveReport:
    """Generic augmentation loop shared by the two-stage and tree solvers.

    ``search(z, λ, L)`` returns (head, full step y, c·y) for the best cycle
    or None.  ``exact_cap`` is the cap used when ``config.exact`` is set.
    """
    x = tuple(x0)
    width = max((u - l for l, u in zip(lower, upper)), default=0)
    lams = multipliers(config.step_multipliers, width)
    fixed = config.head_norm_cap is not None or config.exact
    if config.head_norm_cap is not None:
        cap = config.head_norm_cap
    elif config.exact:
        cap = max(1, exact_cap if exact_cap is not None else head_span)
    else:
        cap = 1
    value = dot(objective, x)
    report = SolveReport(x, value, 0, [], OPTIMAL, [value], cap, path=[x])

    def best_at(c):
        best = None
        for lam in lams:
            res = search(x, lam, c)
            if res is not None and (best is None or lam * res[2] > best[0]):
                best = (lam * res[2], lam, res)
        return best

    try:
        while True:
            best = best_at(cap)
            if not fixed:
                while cap < head_span:
                    bigger = min(2 * cap, head_span)
                    cand = best_at(bigger)
                    if cand is not None and (best is None or cand[0] > best[0]):
                        best, cap = cand, bigger
                    elif best is None:
                        cap = bigger
                    else:
                        break
            if best is None:
                break
            if report.iterations >= config.max_iterations:
                report.status = BUDGET_STOPPED
                report.note = "iteration limit reached"
                break
            gain, lam, (head, y, _) = best
            nxt = tuple(a + lam * b for a, b in zip(x, y))
            new_value = dot(objective, nxt)
            if new_value != value + gain or gain <= 0:
                raise AssertionError("augmentation did not improve the objective as computed")
            if any(residual_fn(nxt)) or not all(l <= v <= u for l, v, u in zip(lower, nxt, upper)):
                raise AssertionError("augmentation left the feasible region")
            x, value = nxt, new_value
            report.iterations += 1
            report.augmentations.append(Augmentation(tuple(head), lam, gain))
            report.trace.append(value)
            report.path.append(x)
    except BudgetExceeded as exc:
        report.status = BUDGET_STOPPED
        report.note = str(exc)
    report.solution, report.objective_value, report.head_norm_cap = x, value, cap
    if report.status == OPTIMAL and not (cap >= head_span or config.exact):
        report.status = BUDGET_STOPPED
        report.note = f"no improving step with head cap {cap} < head span {head_span}; optimality not certified"
    return report


def head_span(inst: TwoStageInstance) -> int:
    hs = inst.head_slice()
    return sum(u - l for l, u in zip(inst.lower[hs], inst.upper[hs]))


def _improve(inst: TwoStageInstance, x0, config: SolverConfig) -> SolveReport:
    span = head_span(inst)
    exact_cap = None
    if config.exact and config.head_norm_cap is None:
        exact_cap = clipped_graver_bound(max(inst.r, 1), max(inst.s, 1), max(inst.delta, 1), span)
    pool = ProcessPoolExecutor(config.parallel_width) if config.parallel_width > 1 else None

    def search(z, lam, cap):
        res = best_cycle_with_value(inst, z, lam, cap, config, pool)
        if res is None:
            return None
        cyc, val = res
        return cyc.head, cyc.vector(), val

    try:
        return augment(inst.objective, inst.lower, inst.upper, lambda x: residual(inst, x), x0, search,
                       span, config, exact_cap)
    finally:
        if pool is not None:
            pool.shutdown()


def phase_one_instance(inst: TwoStageInstance) -> tuple[TwoStageInstance, IntVector]:
    """Auxiliary instance with one slack per row and its feasible start.

    Row k gets a slack column with coefficient −sign(res_k), res = 𝒜l − b,
    and bounds [0, |res_k|]; the objective is −Σ slack.  Starting from
    x = l with every slack at |res_k| is feasible, and the auxiliary optimum
    is 0 exactly when the original instance is feasible.
    """
    res = residual(inst, inst.lower)
    r, t = inst.r, inst.t
    b_blocks = []
    lower, upper, objective = list(inst.lower[inst.head_slice()]), list(inst.upper[inst.head_slice()]), [0] * inst.s
    start = list(inst.lower[inst.head_slice()])
    for i in range(inst.n):
        block_res = res[inst.block_rows(i)]
        rows = []
        for k in range(r):
            slack = [0] * r
            slack[k] = -1 if block_res[k] > 0 else 1
            rows.append(tuple(inst.b_blocks[i].data[k]) + tuple(slack))
        b_blocks.append(IntMatrix(r, t + r, tuple(rows)))
        sl = inst.tail_slice(i)
        lower += list(inst.lower[sl]) + [0] * r
        upper += list(inst.upper[sl]) + [abs(v) for v in block_res]
        objective += [0] * t + [-1] * r
        start += list(inst.lower[sl]) + [abs(v) for v in block_res]
    aux = TwoStageInstance(inst.n, r, inst.s, t + r, inst.a_blocks, tuple(b_blocks), inst.rhs,
                           tuple(lower), tuple(upper), tuple(objective))
    return aux, tuple(start)


def _phase_one(inst: TwoStageInstance, config: SolverConfig):
    """Returns (x, status); x is None when infeasible or undecided."""
    if not inst.in_bounds(inst.lower):
        return None, INFEASIBLE
    if not any(residual(inst, inst.lower)):
        return tuple(inst.lower), OPTIMAL
    aux, start = phase_one_instance(inst)
    # a fixed or exact cap is not a certificate on the auxiliary instance, so
    # phase one always grows its cap and proves infeasibility at the head span
    rep = _improve(aux, start, replace(config, head_norm_cap=None, exact=False))
    x = rep.solution
    if rep.objective_value == 0:
        out = []
        out.extend(x[: inst.s])
        for i in range(inst.n):
            base = inst.s + i * (inst.t + inst.r)
            out.extend(x[base: base + inst.t])
        return tuple(out), OPTIMAL
    if rep.status == OPTIMAL:
        return None, INFEASIBLE
    return None, BUDGET_STOPPED


def initial_solution(inst: TwoStageInstance, config: SolverConfig | None = None) -> IntVector | None:
    """A feasible point, or None if the instance is infeasible.

    Raises:
        BudgetExceeded: phase one stopped without a certificate either way.
    """
    ensure_valid(inst)
    x, status = _phase_one(inst, config or SolverConfig())
    if status == BUDGET_STOPPED:
        raise BudgetExceeded("phase one stopped before deciding feasibility")
    return x


def solve(inst: TwoStageInstance, config: SolverConfig | None = None) -> SolveReport:
    """Maximize c·x by augmentation; budget exhaustion is reported in the status."""
    config = config or SolverConfig()
    ensure_valid(inst)
    try:
        x, status = _phase_one(inst, config)
    except BudgetExceeded as exc:
        return SolveReport(None, None, 0, [], BUDGET_STOPPED, [], config.head_norm_cap or 1, str(exc))
    if x is None:
        note = "" if status == INFEASIBLE else "phase one stopped before deciding feasibility"
        return SolveReport(None, None, 0, [], status, [], config.head_norm_cap or 1, note)
    return _improve(inst, x, config)
