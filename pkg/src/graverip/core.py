"""Domain types for block-structured integer programs.

Vectors are plain tuples of Python ints, so every operation is exact and
overflow cannot occur.  Matrices are dense and immutable.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import InvalidInstance

IntVector = tuple[int, ...]


def as_vector(values: Iterable[int]) -> IntVector:
    out = tuple(values)
    for v in out:
        # bool is an int subclass but never a meaningful coefficient
        if not isinstance(v, int) or isinstance(v, bool):
            raise TypeError(f"expected exact integers, got {v!r}")
    return out


def norm1(v: Sequence[int]) -> int:
    return sum(abs(x) for x in v)


def norm_inf(v: Sequence[int]) -> int:
    return max((abs(x) for x in v), default=0)


def add(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def sub(u: Sequence[int], v: Sequence[int]) -> IntVector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def scale(k: int, v: Sequence[int]) -> IntVector:
    return tuple(k * a for a in v)


def dot(u: Sequence[int], v: Sequence[int]) -> int:
    return sum(a * b for a, b in zip(u, v, strict=True))


def conformal_le(u: Sequence[int], v: Sequence[int]) -> bool:
    """True if u is a sign-compatible minorant of v (u ⊑ v)."""
    return all(a * b >= 0 and abs(a) <= abs(b) for a, b in zip(u, v))


@dataclass(frozen=True)
class IntMatrix:
    nrows: int
    ncols: int
    data: tuple[IntVector, ...]

    def __post_init__(self):
        if len(self.data) != self.nrows or any(len(r) != self.ncols for r in self.data):
            raise ValueError(f"matrix data does not match shape {self.nrows}x{self.ncols}")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[int]], ncols: int | None = None) -> IntMatrix:
        data = tuple(as_vector(r) for r in rows)
        if ncols is None:
            if not data:
                raise ValueError("ncols is required for a matrix without rows")
            ncols = len(data[0])
        return cls(len(data), ncols, data)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> IntMatrix:
        return cls(nrows, ncols, tuple((0,) * ncols for _ in range(nrows)))

    @property
    def delta(self) -> int:
        return max((abs(x) for row in self.data for x in row), default=0)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def column(self, j: int) -> IntVector:
        return tuple(row[j] for row in self.data)

    def columns(self) -> list[IntVector]:
        return [self.column(j) for j in range(self.ncols)]

    def matvec(self, x: Sequence[int]) -> IntVector:
        if len(x) != self.ncols:
            raise ValueError(f"vector length {len(x)} != {self.ncols} columns")
        return tuple(dot(row, x) for row in self.data)

    def select_columns(self, cols: Sequence[int]) -> IntMatrix:
        return IntMatrix(self.nrows, len(cols), tuple(tuple(row[j] for j in cols) for row in self.data))

    def select_rows(self, rows: Sequence[int]) -> IntMatrix:
        return IntMatrix(len(rows), self.ncols, tuple(self.data[i] for i in rows))

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.data]


@dataclass(frozen=True)
class Violation:
    kind: str
    index: int | None
    message: str

    def __str__(self):
        where = "" if self.index is None else f" at index {self.index}"
        return f"{self.kind}{where}: {self.message}"


@dataclass(frozen=True)
class TwoStageInstance:
    """max c·x  s.t.  A⁽ⁱ⁾x⁽⁰⁾ + B⁽ⁱ⁾x⁽ⁱ⁾ = b⁽ⁱ⁾ (i = 1..n),  l ≤ x ≤ u.

    Variables are ordered head first (s entries), then the n tails of t
    entries each.  Objectives may have either sign.
    """

    n: int
    r: int
    s: int
    t: int
    a_blocks: tuple[IntMatrix, ...]
    b_blocks: tuple[IntMatrix, ...]
    rhs: IntVector
    lower: IntVector
    upper: IntVector
    objective: IntVector

    @classmethod
    def build(cls, a_blocks, b_blocks, rhs, lower, upper, objective) -> TwoStageInstance:
        """Build from nested lists, inferring n, r, s, t from the first blocks."""
        a = tuple(m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in a_blocks)
        b = tuple(m if isinstance(m, IntMatrix) else IntMatrix.from_rows(m) for m in b_blocks)
        if not a or not b:
            raise ValueError("at least one block is required")
        return cls(
            n=len(a), r=a[0].nrows, s=a[0].ncols, t=b[0].ncols,
            a_blocks=a, b_blocks=b,
            rhs=as_vector(rhs), lower=as_vector(lower), upper=as_vector(upper),
            objective=as_vector(objective),
        )

    @property
    def ncols(self) -> int:
        return self.s + self.n * self.t

    @property
    def nrows(self) -> int:
        return self.n * self.r

    @property
    def delta(self) -> int:
        return max(m.delta for m in self.a_blocks + self.b_blocks)

    def head_slice(self) -> slice:
        return slice(0, self.s)

    def tail_slice(self, i: int) -> slice:
        start = self.s + i * self.t
        return slice(start, start + self.t)

    def block_rows(self, i: int) -> slice:
        return slice(i * self.r, (i + 1) * self.r)

    def objective_value(self, x: Sequence[int]) -> int:
        return dot(self.objective, x)

    def in_bounds(self, x: Sequence[int]) -> bool:
        return all(lo <= v <= hi for lo, v, hi in zip(self.lower, x, self.upper))

    def is_feasible(self, x: Sequence[int]) -> bool:
        return self.in_bounds(x) and not any(residual(self, x))


@dataclass(frozen=True)
class Cycle:
    """A kernel vector split into its head y⁽⁰⁾ and per-block tails y⁽ⁱ⁾."""

    head: IntVector
    tails: tuple[IntVector, ...] = field(default_factory=tuple)

    def vector(self) -> IntVector:
        out = list(self.head)
        for t in self.tails:
            out.extend(t)
        return tuple(out)

    @classmethod
    def split(cls, inst: TwoStageInstance, y: Sequence[int]) -> Cycle:
        y = tuple(y)
        return cls(y[inst.head_slice()], tuple(y[inst.tail_slice(i)] for i in range(inst.n)))


def validate_instance(inst: TwoStageInstance) -> list[Violation]:
    """Return every dimension and bound violation; an empty list means valid."""
    out: list[Violation] = []
    for name, val in (("n", inst.n), ("r", inst.r), ("s", inst.s), ("t", inst.t)):
        if val < (1 if name == "n" else 0):
            out.append(Violation("dimension", None, f"{name}={val} out of range"))
    if len(inst.a_blocks) != inst.n:
        out.append(Violation("dimension", None, f"expected {inst.n} a_blocks, got {len(inst.a_blocks)}"))
    if len(inst.b_blocks) != inst.n:
        out.append(Violation("dimension", None, f"expected {inst.n} b_blocks, got {len(inst.b_blocks)}"))
    for i, m in enumerate(inst.a_blocks):
        if m.shape != (inst.r, inst.s):
            out.append(Violation("dimension", i, f"a_blocks[{i}] is {m.nrows}x{m.ncols}, expected {inst.r}x{inst.s}"))
    for i, m in enumerate(inst.b_blocks):
        if m.shape != (inst.r, inst.t):
            out.append(Violation("dimension", i, f"b_blocks[{i}] is {m.nrows}x{m.ncols}, expected {inst.r}x{inst.t}"))
    if len(inst.rhs) != inst.n * inst.r:
        out.append(Violation("dimension", None, f"rhs has length {len(inst.rhs)}, expected {inst.n * inst.r}"))
    ncols = inst.s + inst.n * inst.t
    for name in ("lower", "upper", "objective"):
        vec = getattr(inst, name)
        if len(vec) != ncols:
            out.append(Violation("dimension", None, f"{name} has length {len(vec)}, expected {ncols}"))
    for name in ("rhs", "lower", "upper", "objective"):
        for j, v in enumerate(getattr(inst, name)):
            if not isinstance(v, int) or isinstance(v, bool):
                out.append(Violation("type", j, f"{name}[{j}]={v!r} is not an exact integer"))
    for j, (lo, hi) in enumerate(zip(inst.lower, inst.upper)):
        if isinstance(lo, int) and isinstance(hi, int) and lo > hi:
            out.append(Violation("bounds", j, f"lower {lo} > upper {hi}"))
    return out


def ensure_valid(inst: TwoStageInstance) -> None:
    violations = validate_instance(inst)
    if violations:
        raise InvalidInstance(violations)


def assemble_matrix(inst: TwoStageInstance) -> IntMatrix:
    ensure_valid(inst)
    rows = []
    for i in range(inst.n):
        a, b = inst.a_blocks[i], inst.b_blocks[i]
        for k in range(inst.r):
            row = [0] * inst.ncols
            row[: inst.s] = a.data[k]
            row[inst.tail_slice(i)] = b.data[k]
            rows.append(tuple(row))
    return IntMatrix(inst.nrows, inst.ncols, tuple(rows))


def residual(inst: TwoStageInstance, x: Sequence[int]) -> IntVector:
    """𝒜x − b, computed block by block without forming 𝒜."""
    if len(x) != inst.ncols:
        raise ValueError(f"x has length {len(x)}, expected {inst.ncols}")
    head = tuple(x[inst.head_slice()])
    out = []
    for i in range(inst.n):
        ah = inst.a_blocks[i].matvec(head)
        bt = inst.b_blocks[i].matvec(tuple(x[inst.tail_slice(i)]))
        rhs = inst.rhs[inst.block_rows(i)]
        out.extend(p + q - c for p, q, c in zip(ah, bt, rhs))
    return tuple(out)
