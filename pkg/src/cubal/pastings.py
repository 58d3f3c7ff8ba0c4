"""Pasting-diagram DSL: matrix-notation expressions over a model.

Grammar::

    expr := name | 'e1(' arg ')' | 'e2(' arg ')' | 'G-(' arg ')' | 'G+(' arg ')'
          | 'O(' arg ')' | '?' | '[' row (';' row)* ']'
    row  := expr (',' expr)*
    arg  := name | '_'

``?`` stands for any thin square, ``_`` for an unknown argument of a
degeneracy or connection; both are resolved by ``solve`` through seam
propagation and thin-filler lookup.  Arrays evaluate row-major (rows fold
with +2, then the rows fold with +1); the interchange law makes the result
independent of fold order, and ``evaluate_colmajor`` exists to check that.

Block decompositions are never re-partitioned: a flat array must have every
internal seam matching exactly, and anything rejected by ``typecheck`` is
never evaluated.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Union

from .core import DoubleGC, SquareFaces, compose
from .errors import (
    AmbiguousSlot,
    DslError,
    NotComposable,
    ParseError,
    RaggedArray,
    SeamMismatch,
    StepMismatch,
    UnboundName,
    UnsolvableSlot,
)
from .reports import Report
from .shells import Cube3, Shell2, compose_cubes
from .thin import ThinSet, thin_set

RESERVED = set("[](),;=?#")
OP_NAMES = {"e1": "e1", "e2": "e2", "G-": "gm", "G+": "gp", "O": "dd"}
OP_DISPLAY = {v: k for k, v in OP_NAMES.items()}


# -- abstract syntax -----------------------------------------------------------


@dataclass(frozen=True)
class Ref:
    name: str


@dataclass(frozen=True)
class OpLeaf:
    op: str  # e1 | e2 | gm | gp | dd
    arg: Optional[str]  # None is the placeholder '_'


@dataclass(frozen=True)
class Hole:
    pass


@dataclass(frozen=True)
class Array:
    rows: tuple[tuple["Expr", ...], ...]


Expr = Union[Ref, OpLeaf, Hole, Array]


def to_text(expr: Expr) -> str:
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, OpLeaf):
        return f"{OP_DISPLAY[expr.op]}({expr.arg if expr.arg is not None else '_'})"
    if isinstance(expr, Hole):
        return "?"
    rows = "; ".join(", ".join(to_text(e) for e in row) for row in expr.rows)
    return f"[{rows}]"


# -- tokenizer and parser ------------------------------------------------------


@dataclass(frozen=True)
class _Token:
    text: str
    line: int
    col: int
    is_atom: bool


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            line += 1
            col = 1
            i += 1
            continue
        if ch.isspace():
            col += 1
            i += 1
            continue
        if ch == "#":
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch in RESERVED:
            tokens.append(_Token(ch, line, col, is_atom=False))
            col += 1
            i += 1
            continue
        start = i
        start_col = col
        while i < n and not text[i].isspace() and text[i] not in RESERVED:
            i += 1
            col += 1
        tokens.append(_Token(text[start:i], line, start_col, is_atom=True))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self) -> Optional[_Token]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else _Token("", 1, 1, False)
            raise ParseError("unexpected end of input", last.line, last.col)
        self.pos += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.take()
        if tok.text != text:
            raise ParseError(f"expected {text!r}, found {tok.text!r}", tok.line, tok.col)
        return tok

    def parse_expr(self) -> Expr:
        tok = self.take()
        if tok.text == "?" and not tok.is_atom:
            return Hole()
        if tok.text == "[":
            rows = [self.parse_row()]
            while True:
                nxt = self.take()
                if nxt.text == "]":
                    break
                if nxt.text != ";":
                    raise ParseError(
                        f"expected ';' or ']', found {nxt.text!r}", nxt.line, nxt.col
                    )
                rows.append(self.parse_row())
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise RaggedArray(
                    f"rows of length {[len(r) for r in rows]} near line {tok.line}"
                )
            return Array(tuple(tuple(r) for r in rows))
        if tok.is_atom:
            nxt = self.peek()
            if nxt is not None and nxt.text == "(":
                if tok.text not in OP_NAMES:
                    raise ParseError(
                        f"unknown operation {tok.text!r}", tok.line, tok.col
                    )
                self.expect("(")
                arg = self.take()
                if not arg.is_atom:
                    raise ParseError(
                        f"expected argument, found {arg.text!r}", arg.line, arg.col
                    )
                self.expect(")")
                return OpLeaf(OP_NAMES[tok.text], None if arg.text == "_" else arg.text)
            if tok.text == "_":
                raise ParseError("'_' is only legal as an operation argument", tok.line, tok.col)
            return Ref(tok.text)
        raise ParseError(f"unexpected {tok.text!r}", tok.line, tok.col)

    def parse_row(self) -> list[Expr]:
        row = [self.parse_expr()]
        while True:
            nxt = self.peek()
            if nxt is None or nxt.text != ",":
                return row
            self.take()
            row.append(self.parse_expr())


def parse(text: str) -> Expr:
    parser = _Parser(text)
    expr = parser.parse_expr()
    trailing = parser.peek()
    if trailing is not None:
        raise ParseError(
            f"trailing input {trailing.text!r}", trailing.line, trailing.col
        )
    return expr


# -- environments --------------------------------------------------------------


@dataclass
class Env:
    """Name bindings; unbound names fall back to raw model identifiers."""

    model: DoubleGC
    squares: dict[str, str] = field(default_factory=dict)
    edges: dict[str, str] = field(default_factory=dict)
    objects: dict[str, str] = field(default_factory=dict)

    @classmethod
    def for_model(cls, model: DoubleGC) -> "Env":
        return cls(model=model)

    def resolve_square(self, name: str) -> str:
        if name in self.squares:
            return self.squares[name]
        if name in self.model.squares:
            return name
        raise UnboundName(f"unknown square {name!r}")

    def resolve_edge(self, name: str) -> str:
        if name in self.edges:
            return self.edges[name]
        if name in self.model.edges:
            return name
        raise UnboundName(f"unknown edge {name!r}")

    def resolve_object(self, name: str) -> str:
        if name in self.objects:
            return self.objects[name]
        if name in self.model.objects:
            return name
        raise UnboundName(f"unknown object {name!r}")


def _leaf_value(model: DoubleGC, env: Env, expr: Expr) -> str:
    if isinstance(expr, Ref):
        return env.resolve_square(expr.name)
    if isinstance(expr, OpLeaf):
        if expr.arg is None:
            raise UnboundName("unresolved placeholder argument; run solve first")
        if expr.op == "dd":
            return model.eps1[model.eps[env.resolve_object(expr.arg)]]
        edge = env.resolve_edge(expr.arg)
        table = {
            "e1": model.eps1,
            "e2": model.eps2,
            "gm": model.gamma_minus,
            "gp": model.gamma_plus,
        }[expr.op]
        return table[edge]
    raise UnboundName("unresolved '?' slot; run solve first")


# -- typecheck -----------------------------------------------------------------


def _typecheck(model: DoubleGC, env: Env, expr: Expr, pos: str) -> SquareFaces:
    if not isinstance(expr, Array):
        return model.squares[_leaf_value(model, env, expr)]
    shells = [
        [_typecheck(model, env, cell, f"{pos}r{i}c{j}") for j, cell in enumerate(row)]
        for i, row in enumerate(expr.rows)
    ]
    rows = len(shells)
    cols = len(shells[0])
    for i in range(rows):
        for j in range(cols):
            if j + 1 < cols and shells[i][j].right != shells[i][j + 1].left:
                raise SeamMismatch(
                    f"{pos}r{i}c{j}|r{i}c{j + 1}",
                    shells[i][j].right,
                    shells[i][j + 1].left,
                )
            if i + 1 < rows and shells[i][j].bottom != shells[i + 1][j].top:
                raise SeamMismatch(
                    f"{pos}r{i}c{j}|r{i + 1}c{j}",
                    shells[i][j].bottom,
                    shells[i + 1][j].top,
                )

    def chain(edges: Iterable[str]) -> str:
        out = None
        for e in edges:
            if out is None:
                out = e
            else:
                nxt = model.edge_compose.get((out, e))
                if nxt is None:
                    raise NotComposable("edge", out, e)
                out = nxt
        return out

    return SquareFaces(
        top=chain(shells[0][j].top for j in range(cols)),
        bottom=chain(shells[rows - 1][j].bottom for j in range(cols)),
        left=chain(shells[i][0].left for i in range(rows)),
        right=chain(shells[i][cols - 1].right for i in range(rows)),
    )


def typecheck(model: DoubleGC, env: Env, expr: Expr) -> Shell2:
    """Check all adjacency conditions before any evaluation; return the outer shell.

    Placeholders are rejected here: solve first.  A flat array whose internal
    seams do not match exactly is refused, which is the guard against silent
    re-partitioning of block decompositions.
    """
    f = _typecheck(model, env, expr, "")
    return Shell2(left=f.left, bottom=f.bottom, top=f.top, right=f.right)


# -- evaluation ----------------------------------------------------------------


def _evaluate(model: DoubleGC, env: Env, expr: Expr, colmajor: bool) -> str:
    if not isinstance(expr, Array):
        return _leaf_value(model, env, expr)
    grid = [[_evaluate(model, env, cell, colmajor) for cell in row] for row in expr.rows]
    if colmajor:
        cols = []
        for j in range(len(grid[0])):
            col = None
            for i in range(len(grid)):
                col = grid[i][j] if col is None else compose(model, 1, col, grid[i][j])
            cols.append(col)
        out = None
        for c in cols:
            out = c if out is None else compose(model, 2, out, c)
        return out
    out = None
    for row in grid:
        r = None
        for cell in row:
            r = cell if r is None else compose(model, 2, r, cell)
        out = r if out is None else compose(model, 1, out, r)
    return out


def evaluate(model: DoubleGC, env: Env, expr: Expr) -> str:
    """Row-major evaluation of a solved expression; typechecks first."""
    typecheck(model, env, expr)
    return _evaluate(model, env, expr, colmajor=False)


def evaluate_colmajor(model: DoubleGC, env: Env, expr: Expr) -> str:
    typecheck(model, env, expr)
    return _evaluate(model, env, expr, colmajor=True)


def array_square_grid(model: DoubleGC, env: Env, expr: Expr) -> list[list[str]]:
    """Evaluate each cell of a top-level array (after solve)."""
    if not isinstance(expr, Array):
        raise ValueError("expected an array expression")
    return [[_evaluate(model, env, cell, False) for cell in row] for row in expr.rows]


# -- the thin-slot solver --------------------------------------------------------

_SIDES = ("top", "bottom", "left", "right")
# which shell sides carry the defining edge of each species
_OP_DEFINING = {
    "e1": ("top", "bottom"),
    "e2": ("left", "right"),
    "gm": ("top", "left"),
    "gp": ("bottom", "right"),
    "dd": _SIDES,
}


class _Node:
    __slots__ = ("expr", "pos", "shell", "value", "rows", "resolved_arg")

    def __init__(self, expr: Expr, pos: str):
        self.expr = expr
        self.pos = pos
        self.shell: dict[str, Optional[str]] = dict.fromkeys(_SIDES)
        self.value: Optional[str] = None
        self.rows: list[list[_Node]] = []
        self.resolved_arg: Optional[str] = None
        if isinstance(expr, Array):
            self.rows = [
                [_Node(cell, f"{pos}r{i}c{j}") for j, cell in enumerate(row)]
                for i, row in enumerate(expr.rows)
            ]


class _Solver:
    def __init__(self, model: DoubleGC, env: Env, ts: Optional[ThinSet]):
        self.model = model
        self.env = env
        self._ts = ts
        self.changed = False

    @property
    def ts(self) -> ThinSet:
        if self._ts is None:
            self._ts = thin_set(self.model)
        return self._ts

    def set_side(self, node: _Node, side: str, edge: str) -> None:
        cur = node.shell[side]
        if cur is None:
            node.shell[side] = edge
            self.changed = True
        elif cur != edge:
            raise SeamMismatch(f"{node.pos}:{side}", cur, edge)

    def set_value(self, node: _Node, square: str) -> None:
        if node.value is None:
            node.value = square
            self.changed = True
            f = self.model.squares[square]
            for side in _SIDES:
                self.set_side(node, side, getattr(f, side))
        elif node.value != square:
            raise SeamMismatch(node.pos, node.value, square)

    def fill_op(self, node: _Node, arg: str) -> None:
        model = self.model
        op = node.expr.op
        if op == "dd":
            # argument of the double degeneracy is an object
            obj = self.env.resolve_object(arg)
            node.resolved_arg = obj
            self.set_value(node, model.eps1[model.eps[obj]])
            return
        edge = self.env.resolve_edge(arg)
        node.resolved_arg = edge
        table = {
            "e1": model.eps1,
            "e2": model.eps2,
            "gm": model.gamma_minus,
            "gp": model.gamma_plus,
        }[op]
        if edge not in table:
            raise UnsolvableSlot(node.pos, f"no {OP_DISPLAY[op]} entry for {edge!r}")
        self.set_value(node, table[edge])

    def infer_op_arg(self, node: _Node) -> None:
        op = node.expr.op
        for side in _OP_DEFINING[op]:
            edge = node.shell[side]
            if edge is None:
                continue
            if op == "dd":
                obj = self.model.src(edge)
                if self.model.eps.get(obj) != edge:
                    raise UnsolvableSlot(
                        node.pos, f"double degeneracy needs identity edges, got {edge!r}"
                    )
                self.fill_op(node, obj)
            else:
                self.fill_op(node, edge)
            return

    def hole_candidates(self, node: _Node) -> list[str]:
        known = {s: e for s, e in node.shell.items() if e is not None}
        out = []
        for member in sorted(self.ts.members):
            f = self.model.squares[member]
            if all(getattr(f, side) == edge for side, edge in known.items()):
                out.append(member)
        return out

    def op_candidates(self, node: _Node) -> list[str]:
        model = self.model
        op = node.expr.op
        if op == "dd":
            pool = sorted(model.objects)
            values = {x: model.eps1[model.eps[x]] for x in pool}
        else:
            pool = sorted(model.edges)
            table = {
                "e1": model.eps1,
                "e2": model.eps2,
                "gm": model.gamma_minus,
                "gp": model.gamma_plus,
            }[op]
            values = {x: table[x] for x in pool if x in table}
        known = {s: e for s, e in node.shell.items() if e is not None}
        out = []
        for x, square in values.items():
            f = self.model.squares[square]
            if all(getattr(f, side) == edge for side, edge in known.items()):
                out.append(x)
        return out

    def try_hole(self, node: _Node, finalize: bool) -> None:
        known = {s: e for s, e in node.shell.items() if e is not None}
        if not known and not finalize:
            return
        candidates = self.hole_candidates(node)
        if not candidates:
            raise UnsolvableSlot(node.pos, f"known sides {known}")
        if len(candidates) == 1:
            self.set_value(node, candidates[0])

    def chain(self, edges: list[Optional[str]], node: _Node) -> Optional[str]:
        if any(e is None for e in edges):
            return None
        out = edges[0]
        for e in edges[1:]:
            nxt = self.model.edge_compose.get((out, e))
            if nxt is None:
                raise UnsolvableSlot(node.pos, f"edge run {out!r} then {e!r} undefined")
            out = nxt
        return out

    def divide_segment(
        self, segments: list[Optional[str]], total: str, node: _Node
    ) -> Optional[tuple[int, str]]:
        """Solve one unknown segment of a pinned composite, groupoid only."""
        if not self.model.is_groupoid():
            return None
        holes = [i for i, e in enumerate(segments) if e is None]
        if len(holes) != 1:
            return None
        i = holes[0]
        inv = self.model.edge_inverse
        out = total
        prefix = segments[:i]
        if prefix:
            out = self.chain([inv[self.chain(prefix, node)], out], node)
        suffix = segments[i + 1 :]
        if suffix:
            out = self.chain([out, inv[self.chain(suffix, node)]], node)
        return i, out

    def propagate_array(self, node: _Node) -> None:
        rows, cols = len(node.rows), len(node.rows[0])
        for i in range(rows):
            for j in range(cols):
                cell = node.rows[i][j]
                if j + 1 < cols:
                    nbr = node.rows[i][j + 1]
                    if cell.shell["right"] is not None:
                        self.set_side(nbr, "left", cell.shell["right"])
                    if nbr.shell["left"] is not None:
                        self.set_side(cell, "right", nbr.shell["left"])
                if i + 1 < rows:
                    nbr = node.rows[i + 1][j]
                    if cell.shell["bottom"] is not None:
                        self.set_side(nbr, "top", cell.shell["bottom"])
                    if nbr.shell["top"] is not None:
                        self.set_side(cell, "bottom", nbr.shell["top"])
        outer = {
            "top": [node.rows[0][j].shell["top"] for j in range(cols)],
            "bottom": [node.rows[rows - 1][j].shell["bottom"] for j in range(cols)],
            "left": [node.rows[i][0].shell["left"] for i in range(rows)],
            "right": [node.rows[i][cols - 1].shell["right"] for i in range(rows)],
        }
        for side, segments in outer.items():
            total = self.chain(segments, node)
            if total is not None:
                self.set_side(node, side, total)
                continue
            if node.shell[side] is None:
                continue
            # a pinned outer composite with one unknown segment determines it
            got = self.divide_segment(segments, node.shell[side], node)
            if got is None:
                continue
            i, edge = got
            if side == "top":
                cell = node.rows[0][i]
            elif side == "bottom":
                cell = node.rows[rows - 1][i]
            elif side == "left":
                cell = node.rows[i][0]
            else:
                cell = node.rows[i][cols - 1]
            self.set_side(cell, side, edge)

    def sweep(self, node: _Node, finalize: bool) -> None:
        expr = node.expr
        if isinstance(expr, Ref):
            if node.value is None:
                self.set_value(node, self.env.resolve_square(expr.name))
        elif isinstance(expr, OpLeaf):
            if node.value is None:
                if expr.arg is not None:
                    self.fill_op(node, expr.arg)
                else:
                    self.infer_op_arg(node)
        elif isinstance(expr, Hole):
            if node.value is None:
                self.try_hole(node, finalize)
        else:
            for row in node.rows:
                for cell in row:
                    self.sweep(cell, finalize)
            self.propagate_array(node)


def _rebuild(node: _Node, trial: Optional[dict[str, str]] = None) -> Expr:
    expr = node.expr
    if isinstance(expr, Array):
        return Array(tuple(tuple(_rebuild(c, trial) for c in row) for row in node.rows))
    if isinstance(expr, Hole):
        value = node.value if node.value is not None else (trial or {}).get(node.pos)
        return Ref(value)
    if isinstance(expr, OpLeaf) and expr.arg is None:
        arg = node.resolved_arg
        if arg is None:
            arg = (trial or {}).get(node.pos)
        return OpLeaf(expr.op, arg)
    return expr


def _unresolved(node: _Node) -> list[_Node]:
    if isinstance(node.expr, Array):
        out = []
        for row in node.rows:
            for cell in row:
                out.extend(_unresolved(cell))
        return out
    if node.value is None and isinstance(node.expr, (Hole, OpLeaf)):
        return [node]
    return []


_SEARCH_CAP = 4096


def solve(
    model: DoubleGC,
    env: Env,
    expr: Expr,
    target: Optional[Shell2] = None,
    ts: Optional[ThinSet] = None,
) -> Expr:
    """Replace every '?' and '_' by the unique thin square the seams force.

    Fixed-point propagation over seam constraints resolves most slots; slots
    that stay open are closed against the target outer shell by trying every
    remaining thin candidate.  Exactly one assignment may survive, otherwise
    UnsolvableSlot or AmbiguousSlot (listing the candidates) is raised.
    """
    solver = _Solver(model, env, ts)
    root = _Node(expr, "")
    if target is not None:
        for side in _SIDES:
            solver.set_side(root, side, getattr(target, side))
    while True:
        solver.changed = False
        solver.sweep(root, finalize=False)
        if not solver.changed:
            break
    solver.sweep(root, finalize=True)
    open_nodes = _unresolved(root)
    if not open_nodes:
        solved = _rebuild(root)
        shell = typecheck(model, env, solved)
        if target is not None and shell != target:
            raise UnsolvableSlot(
                "", f"outer shell {shell} does not match target {target}"
            )
        return solved

    candidates = {
        node.pos: (
            solver.hole_candidates(node)
            if isinstance(node.expr, Hole)
            else solver.op_candidates(node)
        )
        for node in open_nodes
    }
    for pos, cands in candidates.items():
        if not cands:
            raise UnsolvableSlot(pos, "no thin candidate fits")
    if target is None:
        node = open_nodes[0]
        raise AmbiguousSlot(node.pos, candidates[node.pos])
    total = 1
    for cands in candidates.values():
        total *= len(cands)
        if total > _SEARCH_CAP:
            raise AmbiguousSlot(open_nodes[0].pos, candidates[open_nodes[0].pos])
    survivors = []
    positions = [n.pos for n in open_nodes]
    for combo in itertools.product(*(candidates[p] for p in positions)):
        trial = dict(zip(positions, combo))
        attempt = _rebuild(root, trial)
        try:
            shell = typecheck(model, env, attempt)
        except DslError:
            continue
        except NotComposable:
            continue
        if shell == target:
            survivors.append((trial, attempt))
    if not survivors:
        raise UnsolvableSlot(
            positions[0], f"no candidate assignment reaches target {target}"
        )
    if len(survivors) > 1:
        first = positions[0]
        seen = sorted({t[first] for t, _ in survivors})
        raise AmbiguousSlot(first, seen if len(seen) > 1 else candidates[first])
    return survivors[0][1]


# -- derivation replay -----------------------------------------------------------


def replay(
    model: DoubleGC,
    env: Env,
    script: list[Expr | str],
    ts: Optional[ThinSet] = None,
    title: str = "derivation replay",
) -> Report:
    """Solve and evaluate consecutive steps, asserting pairwise equality."""
    rep = Report(title=title)
    values = []
    for i, step in enumerate(script):
        expr = parse(step) if isinstance(step, str) else step
        solved = solve(model, env, expr, ts=ts)
        values.append(evaluate(model, env, solved))
    for i in range(len(values) - 1):
        rep.tick("step-equality")
        if values[i] != values[i + 1]:
            mism = StepMismatch(i, values[i], values[i + 1])
            rep.fail("step-equality", f"step{i}", values[i], values[i + 1], count=False)
            rep.note(str(mism))
    return rep


# Pinned derivation chains for composites of commutative cubes, one per
# composition direction.  Names: a*/b* are the faces of the two cubes,
# g* the faces of their composite (m/p = the -/+ face, digit = direction).
PLUS1_STEPS = [
    "[G+(_), g1m, G-(_); g3m, g2p, e2(_)]",
    "[G+(_), a1m, G-(_); [a3m; b3m], [a2p; b2p], e2(_)]",
    "[G+(_), a1m, G-(_); a3m, a2p, e2(_); b3m, b2p, e2(_)]",
    "[e2(_), a2m, a3p; G+(_), a1p, G-(_); b3m, b2p, e2(_)]",
    "[e2(_), a2m, a3p; G+(_), b1m, G-(_); b3m, b2p, e2(_)]",
    "[e2(_), a2m, a3p; e2(_), b2m, b3p; G+(_), b1p, G-(_)]",
    "[e2(_), [a2m; b2m], [a3p; b3p]; G+(_), g1p, G-(_)]",
    "[e2(_), g2m, g3p; G+(_), g1p, G-(_)]",
]

PLUS2_STEPS = [
    "[G+(_), g1m, G-(_); g3m, g2p, e2(_)]",
    "[G+(_), [a1m; b1m], G-(_); [a3m, b3m], b2p, e2(_)]",
    "[G+(_), e2(_), a1m, G-(_), e1(_); e1(_), G+(_), b1m, e2(_), G-(_); a3m, b3m, b2p, e2(_), e2(_)]",
    "[G+(_), e2(_), a1m, G-(_), e1(_); a3m, e2(_), b2m, e2(_), b3p; e1(_), G+(_), b1p, e2(_), G-(_)]",
    "[G+(_), e2(_), a1m, G-(_), e1(_); a3m, e2(_), a2p, e2(_), b3p; e1(_), G+(_), b1p, e2(_), G-(_)]",
    "[e2(_), e2(_), a2m, a3p, b3p; G+(_), e2(_), a1p, G-(_), e1(_); e1(_), G+(_), b1p, e2(_), G-(_)]",
    "[e2(_), g2m, g3p; G+(_), g1p, G-(_)]",
]

PLUS3_STEPS = [
    "[G+(_), g1m; g3m, g2p; G-(_), e1(_)]",
    "[G+(_), [a1m, b1m]; a3m, [a2p, b2p]; G-(_), e1(_)]",
    "[G+(_), a1m, b1m; a3m, a2p, b2p; G-(_), e1(_), e1(_)]",
    "[e1(_), G+(_), b1m; a2m, a3p, b2p; a1p, G-(_), e1(_)]",
    "[e1(_), G+(_), b1m; a2m, b3m, b2p; a1p, G-(_), e1(_)]",
    "[e1(_), e1(_), G+(_); a2m, b2m, b3p; a1p, b1p, G-(_)]",
    "[e1(_), G+(_); [a2m, b2m], b3p; [a1p, b1p], G-(_)]",
    "[e1(_), G+(_); g2m, g3p; g1p, G-(_)]",
]

PINNED_STEPS = {1: PLUS1_STEPS, 2: PLUS2_STEPS, 3: PLUS3_STEPS}


def derivation_env(model: DoubleGC, a: Cube3, b: Cube3, direction: int) -> Env:
    """Bind the face names the pinned scripts use for a composable cube pair."""
    g = compose_cubes(model, direction, a, b)
    env = Env.for_model(model)
    for prefix, cube in (("a", a), ("b", b), ("g", g)):
        for d in (1, 2, 3):
            env.squares[f"{prefix}{d}m"] = cube.face(d, "-")
            env.squares[f"{prefix}{d}p"] = cube.face(d, "+")
    return env


def replay_pinned(
    model: DoubleGC,
    a: Cube3,
    b: Cube3,
    direction: int,
    ts: Optional[ThinSet] = None,
) -> Report:
    env = derivation_env(model, a, b, direction)
    return replay(
        model,
        env,
        PINNED_STEPS[direction],
        ts=ts,
        title=f"pinned +{direction} derivation",
    )


# -- script files -----------------------------------------------------------------


@dataclass(frozen=True)
class Script:
    """Parsed script file: let-bindings and chains of =-separated steps."""

    items: tuple[tuple, ...]  # ('let', name, text) | ('chain', (text, ...))


def parse_script(text: str) -> Script:
    items: list[tuple] = []
    chain: list[str] = []

    def flush():
        nonlocal chain
        if chain:
            items.append(("chain", tuple(chain)))
            chain = []

    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            flush()
            continue
        if line.startswith("let "):
            flush()
            head, _, rhs = line[4:].partition("=")
            name = head.strip()
            if not name or not rhs.strip():
                raise ParseError(f"malformed let binding {raw!r}", 1, 1)
            items.append(("let", name, rhs.strip()))
        elif line.startswith("="):
            if not chain:
                raise ParseError(f"'=' continuation without a chain: {raw!r}", 1, 1)
            chain.append(line[1:].strip())
        else:
            flush()
            chain.append(line)
    flush()
    return Script(items=tuple(items))


def run_script(
    model: DoubleGC,
    text: str,
    mode: str = "replay",
) -> tuple[Report, list[list[str]]]:
    """Execute a script file; returns the report and per-chain step values."""
    script = parse_script(text)
    env = Env.for_model(model)
    ts = thin_set(model)
    rep = Report(title=f"script {mode}")
    outputs: list[list[str]] = []
    for item in script.items:
        if item[0] == "let":
            _, name, rhs = item
            solved = solve(model, env, parse(rhs), ts=ts)
            env.squares[name] = evaluate(model, env, solved)
            continue
        steps = item[1]
        values = []
        for step in steps:
            solved = solve(model, env, parse(step), ts=ts)
            values.append(evaluate(model, env, solved))
        outputs.append(values)
        if mode == "replay":
            for i in range(len(values) - 1):
                rep.tick("step-equality")
                if values[i] != values[i + 1]:
                    rep.fail(
                        "step-equality", f"step{i}", values[i], values[i + 1], count=False
                    )
        else:
            rep.tick("evaluated-chains")
    return rep, outputs
