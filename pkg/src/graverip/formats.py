"""Line-oriented text formats for instances, matrices and vector lists.

Every document is a sequence of ``key: value`` lines; ``#`` starts a
comment and blank lines are ignored.  All numbers are exact integers, and
anything else (``1.5``, ``2e3``, ``0x10``) is rejected with the offending
field and line.

Two-stage instance::

    kind: two-stage
    n: 2
    r: 1
    s: 1
    t: 1
    a_blocks: [1] [1]
    b_blocks: [1] [2]
    rhs: 3 4
    lower: 0 0 0
    upper: 4 4 4
    objective: 1 0 0

Each block is a bracketed row-major list.  ``kind`` may be omitted for
two-stage documents.

Tree instance::

    kind: tree
    nrows: 2
    ncols: 3
    block: rows=0:2 cols=0:1 parent=- | 1 1
    block: rows=0:1 cols=1:2 parent=0 | 1
    block: rows=1:2 cols=2:3 parent=0 | 1
    rhs: ...

Blocks are numbered in order of appearance; intervals are half-open.

Matrix and vector-list files hold one row (or vector) of integers per
line, with an optional ``cols: k`` or ``dim: k`` header for empty lists.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .core import IntMatrix, IntVector, TwoStageInstance, validate_instance
from .multistage import TreeBlock, TreeInstance, validate_tree_shape

_INT = re.compile(r"[+-]?\d+\Z")
_INTERVAL = re.compile(r"(\d+):(\d+)\Z")

TWO_STAGE_FIELDS = ("n", "r", "s", "t", "a_blocks", "b_blocks", "rhs", "lower", "upper", "objective")
TREE_FIELDS = ("nrows", "ncols", "rhs", "lower", "upper", "objective")


class ParseError(ValueError):
    """Malformed document; ``field`` and ``line`` locate the problem when known."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


@dataclass
class _Entry:
    key: str
    value: str
    line: int


def _entries(text: str) -> list[_Entry]:
    out = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ParseError(f"expected 'key: value', got {line!r}", line=no)
        key, value = line.split(":", 1)
        out.append(_Entry(key.strip(), value.strip(), no))
    return out


def _int(token: str, field: str, line: int) -> int:
    if not _INT.match(token):
        raise ParseError(f"non-integer literal {token!r}", field, line)
    return int(token)


def _ints(text: str, field: str, line: int) -> IntVector:
    return tuple(_int(tok, field, line) for tok in text.split())


def _scalar(e: _Entry, minimum: int = 0) -> int:
    parts = e.value.split()
    if len(parts) != 1:
        raise ParseError(f"expected one integer, got {e.value!r}", e.key, e.line)
    v = _int(parts[0], e.key, e.line)
    if v < minimum:
        raise ParseError(f"must be at least {minimum}, got {v}", e.key, e.line)
    return v


def _groups(e: _Entry) -> list[IntVector]:
    """Parse ``[1 2] [3 4]`` into integer lists."""
    text = e.value
    out = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            return out
        if text[pos] != "[":
            raise ParseError(f"expected '[' at column {pos + 1}", e.key, e.line)
        end = text.find("]", pos)
        if end < 0:
            raise ParseError("unterminated '['", e.key, e.line)
        inner = text[pos + 1:end]
        if "[" in inner:
            raise ParseError("nested '['", e.key, e.line)
        out.append(_ints(inner, e.key, e.line))
        pos = end + 1


def _fields(entries: list[_Entry], allowed: tuple[str, ...], repeated: tuple[str, ...] = ()) -> dict:
    seen: dict[str, _Entry] = {}
    for e in entries:
        if e.key in repeated or e.key == "kind":
            continue
        if e.key not in allowed:
            raise ParseError(f"unknown field {e.key!r}", e.key, e.line)
        if e.key in seen:
            raise ParseError(f"duplicate field (first on line {seen[e.key].line})", e.key, e.line)
        seen[e.key] = e
    for name in allowed:
        if name not in seen:
            raise ParseError("missing field", name)
    return seen


def _check_length(e: _Entry, vec: IntVector, expected: int) -> None:
    if len(vec) != expected:
        raise ParseError(f"expected {expected} integers, got {len(vec)}", e.key, e.line)


def _kind(entries: list[_Entry]) -> str:
    kinds = [e for e in entries if e.key == "kind"]
    if len(kinds) > 1:
        raise ParseError("duplicate field", "kind", kinds[1].line)
    if not kinds:
        return "two-stage"
    if kinds[0].value not in ("two-stage", "tree"):
        raise ParseError(f"unknown kind {kinds[0].value!r}", "kind", kinds[0].line)
    return kinds[0].value


def _parse_two_stage(entries: list[_Entry]) -> TwoStageInstance:
    f = _fields(entries, TWO_STAGE_FIELDS)
    n = _scalar(f["n"], 1)
    r, s, t = (_scalar(f[k]) for k in "rst")
    blocks = {}
    for name, width in (("a_blocks", s), ("b_blocks", t)):
        groups = _groups(f[name])
        if len(groups) != n:
            raise ParseError(f"expected {n} blocks, got {len(groups)}", name, f[name].line)
        mats = []
        for i, g in enumerate(groups):
            if len(g) != r * width:
                raise ParseError(f"block {i} has {len(g)} entries, expected {r}x{width}", name, f[name].line)
            mats.append(IntMatrix(r, width, tuple(tuple(g[k * width:(k + 1) * width]) for k in range(r))))
        blocks[name] = tuple(mats)
    vecs = {k: _ints(f[k].value, k, f[k].line) for k in ("rhs", "lower", "upper", "objective")}
    _check_length(f["rhs"], vecs["rhs"], n * r)
    for k in ("lower", "upper", "objective"):
        _check_length(f[k], vecs[k], s + n * t)
    inst = TwoStageInstance(n, r, s, t, blocks["a_blocks"], blocks["b_blocks"], **vecs)
    for v in validate_instance(inst):
        where = "upper" if v.kind == "bounds" else None
        raise ParseError(str(v), where, f[where].line if where else None)
    return inst


def _interval(text: str, field: str, line: int) -> tuple[int, int]:
    m = _INTERVAL.match(text)
    if not m:
        raise ParseError(f"expected an interval a:b, got {text!r}", field, line)
    return int(m.group(1)), int(m.group(2))


def _parse_block(e: _Entry) -> tuple[tuple[int, int], tuple[int, int], int | None, IntVector]:
    if "|" not in e.value:
        raise ParseError("expected 'rows=a:b cols=c:d parent=p | entries'", "block", e.line)
    head, body = e.value.split("|", 1)
    attrs = {}
    for tok in head.split():
        if "=" not in tok:
            raise ParseError(f"expected key=value, got {tok!r}", "block", e.line)
        k, v = tok.split("=", 1)
        if k not in ("rows", "cols", "parent") or k in attrs:
            raise ParseError(f"unexpected or repeated attribute {k!r}", "block", e.line)
        attrs[k] = v
    for k in ("rows", "cols", "parent"):
        if k not in attrs:
            raise ParseError(f"missing attribute {k!r}", "block", e.line)
    rows = _interval(attrs["rows"], "block", e.line)
    cols = _interval(attrs["cols"], "block", e.line)
    parent = None if attrs["parent"] == "-" else _int(attrs["parent"], "block", e.line)
    return rows, cols, parent, _ints(body, "block", e.line)


def _parse_tree(entries: list[_Entry]) -> TreeInstance:
    f = _fields(entries, TREE_FIELDS, repeated=("block",))
    nrows = _scalar(f["nrows"])
    ncols = _scalar(f["ncols"])
    blocks, lines = [], []
    for e in entries:
        if e.key != "block":
            continue
        rows, cols, parent, data = _parse_block(e)
        nr, nc = rows[1] - rows[0], cols[1] - cols[0]
        if nr < 0 or nc < 0:
            raise ParseError("interval end precedes its start", "block", e.line)
        if len(data) != nr * nc:
            raise ParseError(f"{len(data)} entries, intervals say {nr}x{nc}", "block", e.line)
        m = IntMatrix(nr, nc, tuple(tuple(data[k * nc:(k + 1) * nc]) for k in range(nr)))
        blocks.append(TreeBlock(rows, cols, parent, m))
        lines.append(e.line)
    if not blocks:
        raise ParseError("a tree needs at least one block", "block")
    vecs = {k: _ints(f[k].value, k, f[k].line) for k in ("rhs", "lower", "upper", "objective")}
    _check_length(f["rhs"], vecs["rhs"], nrows)
    for k in ("lower", "upper", "objective"):
        _check_length(f[k], vecs[k], ncols)
    inst = TreeInstance(nrows, ncols, tuple(blocks), **vecs)
    for v in validate_tree_shape(inst):
        if v.kind == "bounds":
            raise ParseError(str(v), "upper", f["upper"].line)
        by_block = v.kind in ("interval", "dimension", "nesting", "tree") and v.index is not None
        line = lines[v.index] if by_block else None
        raise ParseError(str(v), "block", line)
    return inst


def parse_instance(text: str) -> TwoStageInstance | TreeInstance:
    """Parse a two-stage or tree document.

    Raises:
        ParseError: malformed line, unknown/missing/duplicate field,
            non-integer literal, or a dimension or shape mismatch.
    """
    entries = _entries(text)
    if _kind(entries) == "tree":
        return _parse_tree(entries)
    return _parse_two_stage(entries)


def _join(v) -> str:
    return " ".join(map(str, v))


def _flat(m: IntMatrix) -> str:
    return _join(x for row in m.data for x in row)


def serialize_instance(inst: TwoStageInstance | TreeInstance) -> str:
    """Canonical text; ``parse_instance(serialize_instance(i)) == i``."""
    if isinstance(inst, TreeInstance):
        lines = ["kind: tree", f"nrows: {inst.nrows}", f"ncols: {inst.ncols}"]
        for b in inst.blocks:
            parent = "-" if b.parent is None else b.parent
            lines.append(
                f"block: rows={b.rows[0]}:{b.rows[1]} cols={b.cols[0]}:{b.cols[1]} parent={parent} | {_flat(b.matrix)}".rstrip()
            )
    else:
        lines = [
            "kind: two-stage",
            f"n: {inst.n}", f"r: {inst.r}", f"s: {inst.s}", f"t: {inst.t}",
            "a_blocks: " + " ".join(f"[{_flat(m)}]" for m in inst.a_blocks),
            "b_blocks: " + " ".join(f"[{_flat(m)}]" for m in inst.b_blocks),
        ]
    for k in ("rhs", "lower", "upper", "objective"):
        lines.append(f"{k}: {_join(getattr(inst, k))}".rstrip())
    return "\n".join(lines) + "\n"


def _rows(text: str, header: str) -> tuple[int | None, list[IntVector]]:
    size = None
    rows: list[IntVector] = []
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" in line:
            key, value = (p.strip() for p in line.split(":", 1))
            if key != header or size is not None:
                raise ParseError(f"unexpected field {key!r}", key, no)
            size = _scalar(_Entry(key, value, no))
            continue
        row = _ints(line, "row", no)
        expected = size if size is not None else (len(rows[0]) if rows else None)
        if expected is not None and len(row) != expected:
            raise ParseError(f"expected {expected} integers, got {len(row)}", "row", no)
        rows.append(row)
    return size, rows


def parse_matrix(text: str) -> IntMatrix:
    """One matrix row per line; ``cols: k`` is required only for zero rows."""
    ncols, rows = _rows(text, "cols")
    if ncols is None:
        if not rows:
            raise ParseError("empty matrix needs a 'cols' header", "cols")
        ncols = len(rows[0])
    return IntMatrix(len(rows), ncols, tuple(rows))


def parse_vectors(text: str) -> tuple[int, list[IntVector]]:
    """One vector per line; returns (dimension, vectors)."""
    dim, rows = _rows(text, "dim")
    if dim is None:
        if not rows:
            raise ParseError("empty vector list needs a 'dim' header", "dim")
        dim = len(rows[0])
    return dim, rows


def format_matrix(m: IntMatrix) -> str:
    return f"cols: {m.ncols}\n" + "".join(_join(r) + "\n" for r in m.data)


def format_vectors(dim: int, vectors) -> str:
    return f"dim: {dim}\n" + "".join(_join(v) + "\n" for v in vectors)
