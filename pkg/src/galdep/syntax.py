"""Selection-annotated core syntax: terms, eliminators, values, environments.

Annotations (``ann`` fields) are elements of a selection lattice; raw
syntax is the same tree with every ``ann`` equal to ``None`` (the unit
lattice).  ``HOLE`` is a compact stand-in for the all-bottom selection of
any shape and may appear wherever a term, eliminator or value is
expected.

Only constructor forms carry annotations: literals, records, nil/cons,
matrix constructors.  Variables, applications, projections and the like
are not selectable.
"""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import Any, Callable, Iterator, Optional, Union

from .lattice import Ann, Lattice, UNIT


class ShapeError(ValueError):
    """Two selections do not share a common raw shape."""


@dataclass(slots=True)
class SyntaxNode:
    """Base for all annotated syntax (core terms, eliminators, values and
    the surface language); the generic selection machinery (positions,
    erasure, pointwise lattice ops) traverses any of these."""


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open [start, end) offsets into a source file."""

    start: int
    end: int
    file: str = "<input>"


class Hole:
    """The all-bottom selection of any shape."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "Hole"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Hole)

    def __hash__(self) -> int:
        return hash(Hole)


HOLE = Hole()


# ---------------------------------------------------------------------------
# Terms


@dataclass(slots=True)
class Term(SyntaxNode):
    pass


@dataclass(slots=True)
class Var(Term):
    name: str
    span: Optional[Span] = None


@dataclass(slots=True)
class Int(Term):
    value: int
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Flt(Term):
    value: float
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Str(Term):
    value: str
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Bool(Term):
    value: bool
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Rec(Term):
    fields: tuple[tuple[str, Term], ...]
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Proj(Term):
    record: Term
    field: str
    span: Optional[Span] = None


@dataclass(slots=True)
class Nil(Term):
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Cons(Term):
    head: Term
    tail: Term
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class Lam(Term):
    elim: "Elim"
    span: Optional[Span] = None


@dataclass(slots=True)
class App(Term):
    fn: Term
    arg: Term
    span: Optional[Span] = None


@dataclass(slots=True)
class PrimApp(Term):
    op: str
    args: tuple[Term, ...]
    span: Optional[Span] = None


@dataclass(slots=True)
class LetRec(Term):
    defs: tuple[tuple[str, "Elim"], ...]
    body: Term
    span: Optional[Span] = None


@dataclass(slots=True)
class MatGen(Term):
    """Matrix generator: grid of ``body`` evaluated at 1-based (i, j)."""

    rows: Term
    cols: Term
    var_i: str
    var_j: str
    body: Term
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class MatLit(Term):
    """Literal matrix: a rectangular grid of subterms."""

    cells: tuple[tuple[Term, ...], ...]
    ann: Ann = None
    span: Optional[Span] = None


@dataclass(slots=True)
class MatLookup(Term):
    matrix: Term
    row: Term
    col: Term
    span: Optional[Span] = None


@dataclass(slots=True)
class MatDims(Term):
    matrix: Term
    span: Optional[Span] = None


# ---------------------------------------------------------------------------
# Eliminators

# A continuation is a Term (leaf) or a further Elim; Hole stands for either.
Cont = Union[Term, "Elim", Hole]


@dataclass(slots=True)
class Elim(SyntaxNode):
    pass


@dataclass(slots=True)
class ElimVar(Elim):
    name: str
    cont: Cont


@dataclass(slots=True)
class ElimBool(Elim):
    if_true: Cont
    if_false: Cont


@dataclass(slots=True)
class ElimRec(Elim):
    """Record eliminator; fields are consumed left to right, each by the
    current continuation, which must be a further eliminator until the
    last field has been consumed."""

    field_names: tuple[str, ...]
    cont: Cont


@dataclass(slots=True)
class ElimList(Elim):
    if_nil: Cont
    if_cons: Cont  # eliminates the head, then the tail


# Partial single-branch eliminators (surface elaboration only).


@dataclass(slots=True)
class ElimTrue(Elim):
    cont: Cont


@dataclass(slots=True)
class ElimFalse(Elim):
    cont: Cont


@dataclass(slots=True)
class ElimNil(Elim):
    cont: Cont


@dataclass(slots=True)
class ElimCons(Elim):
    cont: Cont


# ---------------------------------------------------------------------------
# Values


@dataclass(slots=True)
class Val(SyntaxNode):
    pass


@dataclass(slots=True)
class VInt(Val):
    value: int
    ann: Ann = None


@dataclass(slots=True)
class VFlt(Val):
    value: float
    ann: Ann = None


@dataclass(slots=True)
class VStr(Val):
    value: str
    ann: Ann = None


@dataclass(slots=True)
class VBool(Val):
    value: bool
    ann: Ann = None


@dataclass(slots=True)
class VRec(Val):
    fields: tuple[tuple[str, Val], ...]
    ann: Ann = None


@dataclass(slots=True)
class VNil(Val):
    ann: Ann = None


@dataclass(slots=True)
class VCons(Val):
    head: Val
    tail: Val
    ann: Ann = None


@dataclass(slots=True)
class VMat(Val):
    """Matrix value: grid of cells plus annotated dimension values.

    ``rows_val``/``cols_val`` are the dimension integers with their own
    annotations; ``ann`` is the container annotation.
    """

    cells: tuple[tuple[Val, ...], ...]
    rows: int
    cols: int
    rows_ann: Ann = None
    cols_ann: Ann = None
    ann: Ann = None


@dataclass(slots=True)
class VClosure(Val):
    """Function closure capturing its environment, the mutually recursive
    definitions it was introduced with, and the ambient availability."""

    env: "Env"
    defs: tuple[tuple[str, Elim], ...]
    elim: Elim
    ann: Ann = None


ATOM_VALS = (VInt, VFlt, VStr, VBool, VNil)
ATOM_TERMS = (Int, Flt, Str, Bool, Nil)


# ---------------------------------------------------------------------------
# Environments


class Env:
    """Ordered name/value bindings; later bindings shadow earlier ones.

    Also used for environment *selections*, in which case values may be
    ``HOLE``.  ``all_holes`` lets joins short-circuit without deep
    traversals.
    """

    __slots__ = ("entries", "_all_holes", "_bot_memo", "_cd_memo")

    def __init__(self, entries: tuple[tuple[str, Any], ...] = (), all_holes: Optional[bool] = None):
        self.entries = entries
        self._all_holes = all_holes  # lazily computed; True for bot_like results
        self._bot_memo: Optional[Env] = None
        self._cd_memo: Optional[dict] = None

    def is_all_holes(self) -> bool:
        if self._all_holes is None:
            self._all_holes = all(isinstance(v, Hole) for _, v in self.entries)
        return self._all_holes

    def __iter__(self) -> Iterator[tuple[str, Any]]:
        return iter(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Env) and self.entries == other.entries

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}={v!r}" for k, v in self.entries)
        return f"Env({inner})"

    def lookup(self, name: str) -> Any:
        entries = self.entries
        for i in range(len(entries) - 1, -1, -1):
            e = entries[i]
            if e[0] == name:
                return e[1]
        raise KeyError(name)

    def lookup_index(self, name: str) -> int:
        """Index of the most recent binding of ``name``."""
        for i in range(len(self.entries) - 1, -1, -1):
            if self.entries[i][0] == name:
                return i
        raise KeyError(name)

    def has(self, name: str) -> bool:
        return any(k == name for k, _ in self.entries)

    def extend(self, more: "Env | tuple[tuple[str, Any], ...]") -> "Env":
        extra = more.entries if isinstance(more, Env) else tuple(more)
        return Env(self.entries + extra)

    def bind(self, name: str, value: Any) -> "Env":
        return Env(self.entries + ((name, value),))

    def split_at(self, *lengths: int) -> list["Env"]:
        """Split positionally into consecutive pieces of the given lengths
        plus the leading remainder: lengths count from the *end*."""
        total = sum(lengths)
        if total > len(self.entries):
            raise ShapeError("environment too short to split")
        head_len = len(self.entries) - total
        parts = [Env(self.entries[:head_len])]
        pos = head_len
        for n in lengths:
            parts.append(Env(self.entries[pos:pos + n]))
            pos += n
        return parts

    def bot_like(self) -> "Env":
        """The all-hole selection of this environment's shape (memoized)."""
        if self._bot_memo is None:
            self._bot_memo = Env(tuple((k, HOLE) for k, _ in self.entries), all_holes=True)
            self._bot_memo._bot_memo = self._bot_memo
        return self._bot_memo


EMPTY_ENV = Env()


# ---------------------------------------------------------------------------
# Generic traversal helpers

Node = Union[SyntaxNode, Env, Hole, tuple]


def _is_ann_field(f: Any) -> bool:
    return f.name in ("ann", "rows_ann", "cols_ann")


def children(x: Node) -> list[Node]:
    """Syntactic children of a node, in canonical (field) order."""
    out: list[Node] = []
    if isinstance(x, Hole):
        return out
    if isinstance(x, Env):
        return [v for _, v in x.entries]
    if isinstance(x, SyntaxNode):
        for f in fields(x):
            if _is_ann_field(f) or f.name == "span":
                continue
            v = getattr(x, f.name)
            out.extend(_flatten(v))
        return out
    raise TypeError(f"not a syntax node: {x!r}")


def _flatten(v: Any) -> list[Node]:
    if isinstance(v, (SyntaxNode, Env, Hole)):
        return [v]
    if isinstance(v, tuple):
        out: list[Node] = []
        for item in v:
            out.extend(_flatten(item))
        return out
    return []  # names, ints, strs: not syntax


def ann_slots(x: Node) -> list[Ann]:
    """Annotations carried by this node itself (not descendants)."""
    if isinstance(x, (Hole, Env)):
        return []
    out = []
    for f in fields(x):
        if _is_ann_field(f):
            out.append(getattr(x, f.name))
    return out


def positions(x: Node) -> list[Ann]:
    """All annotation slots of ``x`` in canonical DFS pre-order."""
    out = ann_slots(x) if not isinstance(x, (Env, Hole)) else []
    for c in children(x) if not isinstance(x, Hole) else []:
        out.extend(positions(c))
    return out


def count_positions(x: Node) -> int:
    return len(positions(x))


def with_positions(x: Node, anns: list[Ann]) -> Node:
    """Rebuild ``x`` with annotation slots replaced in DFS pre-order."""
    it = iter(anns)
    y = _with_positions(x, it)
    try:
        next(it)
    except StopIteration:
        return y
    raise ValueError("too many annotations supplied")


def _with_positions(x: Any, it: Iterator[Ann]) -> Any:
    if isinstance(x, Hole):
        return x
    if isinstance(x, Env):
        return Env(tuple((k, _with_positions(v, it)) for k, v in x.entries))
    if isinstance(x, SyntaxNode):
        # node annotations are consumed before children, matching positions()
        kwargs = {}
        for f in fields(x):
            if _is_ann_field(f):
                kwargs[f.name] = next(it)
        for f in fields(x):
            if not _is_ann_field(f):
                v = getattr(x, f.name)
                kwargs[f.name] = _map_syntax(v, lambda n: _with_positions(n, it))
        return type(x)(**kwargs)
    return x


def _map_syntax(v: Any, fn: Callable[[Node], Node]) -> Any:
    if isinstance(v, (SyntaxNode, Env, Hole)):
        return fn(v)
    if isinstance(v, tuple):
        return tuple(_map_syntax(item, fn) for item in v)
    return v


def map_anns(x: Node, fn: Callable[[Ann], Ann]) -> Node:
    """Apply ``fn`` to every annotation slot of ``x`` (holes untouched)."""
    if isinstance(x, Hole):
        return x
    if isinstance(x, Env):
        return Env(tuple((k, map_anns(v, fn)) for k, v in x.entries))
    kwargs = {}
    for f in fields(x):
        v = getattr(x, f.name)
        if _is_ann_field(f):
            kwargs[f.name] = fn(v)
        else:
            kwargs[f.name] = _map_syntax(v, lambda n: map_anns(n, fn))
    return type(x)(**kwargs)


def erase(x: Node, like: Optional[Node] = None) -> Node:
    """Drop all selection information, yielding the raw shape.

    Holes cannot be erased without a shape witness: pass the raw shape as
    ``like`` to expand them.
    """
    if isinstance(x, Hole):
        if like is None:
            raise ShapeError("cannot erase a hole without a shape witness")
        return erase(like)
    return map_anns(x, lambda _: None)


def top_of(x: Node, lat: Lattice) -> Node:
    """The selection of ``x``'s shape with top at every position."""
    return map_anns(x, lambda _: lat.top)


def bot_of(x: Node, lat: Lattice) -> Node:
    return map_anns(x, lambda _: lat.bot)


# ---------------------------------------------------------------------------
# Partial order with holes (values, terms, eliminators, environments)


def _same_shape_meta(a: Node, b: Node) -> bool:
    """Non-annotation scalar payloads must agree for a shared shape."""
    if type(a) is not type(b):
        return False
    for f in fields(a):
        if _is_ann_field(f) or f.name == "span":
            continue
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if isinstance(va, (Term, Elim, Val, Env, Hole, tuple)):
            continue
        if va != vb:
            return False
    return True


def leq_sel(a: Node, b: Node, lat: Lattice) -> bool:
    """Partial order on same-shape selections, extended with holes.

    Hole is below everything; a constructor is below Hole iff all its
    annotations are bottom.  Raises ShapeError when the two sides are not
    hole-compatible with a common shape.
    """
    if isinstance(a, Hole):
        return True
    if isinstance(b, Hole):
        return _all_bot(a, lat)
    if isinstance(a, Env) and isinstance(b, Env):
        if [k for k, _ in a.entries] != [k for k, _ in b.entries]:
            raise ShapeError("environment shapes differ")
        return all(leq_sel(va, vb, lat) for (_, va), (_, vb) in zip(a.entries, b.entries))
    if isinstance(a, Env) or isinstance(b, Env):
        raise ShapeError("environment compared with non-environment")
    if not _same_shape_meta(a, b):
        raise ShapeError(f"shape mismatch: {a!r} vs {b!r}")
    for sa, sb in zip(ann_slots(a), ann_slots(b)):
        if not lat.leq(sa, sb):
            return False
    ca, cb = children(a), children(b)
    if len(ca) != len(cb):
        raise ShapeError("shape mismatch in children")
    return all(leq_sel(x, y, lat) for x, y in zip(ca, cb))


def _all_bot(a: Node, lat: Lattice) -> bool:
    if isinstance(a, Hole):
        return True
    if isinstance(a, Env):
        return all(_all_bot(v, lat) for _, v in a.entries)
    return all(s == lat.bot for s in ann_slots(a)) and all(
        _all_bot(c, lat) for c in children(a)
    )


def hole_eq(a: Node, b: Node, lat: Lattice) -> bool:
    """Hole equivalence: the intersection of <= and >=."""
    return leq_sel(a, b, lat) and leq_sel(b, a, lat)


def _zip_sel(a: Node, b: Node, op: Callable[[Ann, Ann], Ann], lat: Lattice,
             hole_wins: bool) -> Node:
    """Pointwise combination of same-shape selections.

    ``hole_wins`` selects the hole shortcut: for meet, Hole absorbs
    (result Hole); for join, Hole is discarded.
    """
    if isinstance(a, Hole):
        return a if hole_wins else b
    if isinstance(b, Hole):
        return b if hole_wins else a
    if isinstance(a, Env) and isinstance(b, Env):
        if len(a.entries) != len(b.entries):
            raise ShapeError("environment shapes differ")
        if a.is_all_holes():
            return a if hole_wins else b
        if b.is_all_holes():
            return b if hole_wins else a
        ents = []
        for (ka, va), (kb, vb) in zip(a.entries, b.entries):
            if ka != kb:
                raise ShapeError(f"environment names differ: {ka} vs {kb}")
            ents.append((ka, _zip_sel(va, vb, op, lat, hole_wins)))
        return Env(tuple(ents))
    if not _same_shape_meta(a, b):
        raise ShapeError(f"shape mismatch: {a!r} vs {b!r}")
    return _zip_build(a, b, op, lat, hole_wins)


def _zip_build(a: Any, b: Any, op: Callable[[Ann, Ann], Ann], lat: Lattice,
               hole_wins: bool) -> Any:
    kwargs = {}
    for f in fields(a):
        va, vb = getattr(a, f.name), getattr(b, f.name)
        if _is_ann_field(f):
            kwargs[f.name] = op(va, vb)
        elif f.name == "span":
            kwargs[f.name] = va
        else:
            kwargs[f.name] = _zip_field(va, vb, op, lat, hole_wins)
    return type(a)(**kwargs)


def _zip_field(va: Any, vb: Any, op: Callable[[Ann, Ann], Ann], lat: Lattice,
               hole_wins: bool) -> Any:
    if isinstance(va, (SyntaxNode, Env, Hole)) or isinstance(vb, (SyntaxNode, Env, Hole)):
        return _zip_sel(va, vb, op, lat, hole_wins)
    if isinstance(va, tuple):
        if not isinstance(vb, tuple) or len(va) != len(vb):
            raise ShapeError("tuple field shapes differ")
        return tuple(_zip_field(x, y, op, lat, hole_wins) for x, y in zip(va, vb))
    if va != vb:
        raise ShapeError(f"payload mismatch: {va!r} vs {vb!r}")
    return va


def join_sel(a: Node, b: Node, lat: Lattice) -> Node:
    """Pointwise join; Hole |_| v is v (shortcut, up to hole-equivalence)."""
    return _fast_zip(a, b, lat.join, lat, False)


def meet_sel(a: Node, b: Node, lat: Lattice) -> Node:
    """Pointwise meet; Hole |^| v is Hole."""
    return _fast_zip(a, b, lat.meet, lat, True)


def _fast_zip(a, b, op, lat, hole_wins):
    """Pointwise combination specialized over the core syntax classes;
    avoids dataclass introspection on the hot paths."""
    if isinstance(a, Hole):
        return a if hole_wins else b
    if isinstance(b, Hole):
        return b if hole_wins else a
    cls = type(a)
    if cls is not type(b):
        raise ShapeError(f"shape mismatch: {a!r} vs {b!r}")
    if cls is VInt or cls is VFlt or cls is VStr or cls is VBool:
        if a.value != b.value:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return cls(a.value, op(a.ann, b.ann))
    if cls is VNil:
        return VNil(op(a.ann, b.ann))
    if cls is VCons:
        return VCons(_fast_zip(a.head, b.head, op, lat, hole_wins),
                     _fast_zip(a.tail, b.tail, op, lat, hole_wins),
                     op(a.ann, b.ann))
    if cls is VRec:
        fields_out = tuple(
            (ka, _fast_zip(va, vb, op, lat, hole_wins))
            for (ka, va), (_, vb) in zip(a.fields, b.fields)
        )
        return VRec(fields_out, op(a.ann, b.ann))
    if cls is VMat:
        grid = tuple(
            tuple(_fast_zip(x, y, op, lat, hole_wins) for x, y in zip(ra, rb))
            for ra, rb in zip(a.cells, b.cells)
        )
        return VMat(grid, a.rows, a.cols, op(a.rows_ann, b.rows_ann),
                    op(a.cols_ann, b.cols_ann), op(a.ann, b.ann))
    if cls is VClosure:
        defs = tuple(
            (na, _fast_zip(ea, eb, op, lat, hole_wins))
            for (na, ea), (_, eb) in zip(a.defs, b.defs)
        )
        return VClosure(_fast_zip(a.env, b.env, op, lat, hole_wins), defs,
                        _fast_zip(a.elim, b.elim, op, lat, hole_wins),
                        op(a.ann, b.ann))
    if cls is Env:
        if len(a.entries) != len(b.entries):
            raise ShapeError("environment shapes differ")
        if a.is_all_holes():
            return a if hole_wins else b
        if b.is_all_holes():
            return b if hole_wins else a
        ents = tuple(
            (ka, _fast_zip(va, vb, op, lat, hole_wins))
            for (ka, va), (_, vb) in zip(a.entries, b.entries)
        )
        return Env(ents, all_holes=False)
    if cls is Var:
        if a.name != b.name:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return a
    if cls is Int or cls is Flt or cls is Str or cls is Bool:
        if a.value != b.value:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return cls(a.value, op(a.ann, b.ann), span=a.span)
    if cls is Nil:
        return Nil(op(a.ann, b.ann), span=a.span)
    if cls is Cons:
        return Cons(_fast_zip(a.head, b.head, op, lat, hole_wins),
                    _fast_zip(a.tail, b.tail, op, lat, hole_wins),
                    op(a.ann, b.ann), span=a.span)
    if cls is Rec:
        fields_out = tuple(
            (ka, _fast_zip(va, vb, op, lat, hole_wins))
            for (ka, va), (_, vb) in zip(a.fields, b.fields)
        )
        return Rec(fields_out, op(a.ann, b.ann), span=a.span)
    if cls is Proj:
        return Proj(_fast_zip(a.record, b.record, op, lat, hole_wins), a.field, span=a.span)
    if cls is App:
        return App(_fast_zip(a.fn, b.fn, op, lat, hole_wins),
                   _fast_zip(a.arg, b.arg, op, lat, hole_wins), span=a.span)
    if cls is PrimApp:
        if a.op != b.op:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return PrimApp(a.op, tuple(_fast_zip(x, y, op, lat, hole_wins)
                                   for x, y in zip(a.args, b.args)), span=a.span)
    if cls is Lam:
        return Lam(_fast_zip(a.elim, b.elim, op, lat, hole_wins), span=a.span)
    if cls is LetRec:
        defs = tuple(
            (na, _fast_zip(ea, eb, op, lat, hole_wins))
            for (na, ea), (_, eb) in zip(a.defs, b.defs)
        )
        return LetRec(defs, _fast_zip(a.body, b.body, op, lat, hole_wins), span=a.span)
    if cls is MatGen:
        return MatGen(_fast_zip(a.rows, b.rows, op, lat, hole_wins),
                      _fast_zip(a.cols, b.cols, op, lat, hole_wins),
                      a.var_i, a.var_j,
                      _fast_zip(a.body, b.body, op, lat, hole_wins),
                      op(a.ann, b.ann), span=a.span)
    if cls is MatLit:
        grid = tuple(
            tuple(_fast_zip(x, y, op, lat, hole_wins) for x, y in zip(ra, rb))
            for ra, rb in zip(a.cells, b.cells)
        )
        return MatLit(grid, op(a.ann, b.ann), span=a.span)
    if cls is MatLookup:
        return MatLookup(_fast_zip(a.matrix, b.matrix, op, lat, hole_wins),
                         _fast_zip(a.row, b.row, op, lat, hole_wins),
                         _fast_zip(a.col, b.col, op, lat, hole_wins), span=a.span)
    if cls is MatDims:
        return MatDims(_fast_zip(a.matrix, b.matrix, op, lat, hole_wins), span=a.span)
    if cls is ElimVar:
        if a.name != b.name:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return ElimVar(a.name, _fast_zip(a.cont, b.cont, op, lat, hole_wins))
    if cls is ElimBool:
        return ElimBool(_fast_zip(a.if_true, b.if_true, op, lat, hole_wins),
                        _fast_zip(a.if_false, b.if_false, op, lat, hole_wins))
    if cls is ElimList:
        return ElimList(_fast_zip(a.if_nil, b.if_nil, op, lat, hole_wins),
                        _fast_zip(a.if_cons, b.if_cons, op, lat, hole_wins))
    if cls is ElimRec:
        if a.field_names != b.field_names:
            raise ShapeError(f"payload mismatch: {a!r} vs {b!r}")
        return ElimRec(a.field_names, _fast_zip(a.cont, b.cont, op, lat, hole_wins))
    if cls is ElimTrue or cls is ElimFalse or cls is ElimNil or cls is ElimCons:
        return cls(_fast_zip(a.cont, b.cont, op, lat, hole_wins))
    return _zip_sel(a, b, op, lat, hole_wins)


def expand_hole(x: Node, raw: Node, lat: Lattice) -> Node:
    """Replace holes in ``x`` by explicit all-bottom selections of the
    corresponding subshape of ``raw``."""
    if isinstance(x, Hole):
        return bot_of(raw, lat)
    if isinstance(x, Env):
        if not isinstance(raw, Env) or len(x.entries) != len(raw.entries):
            raise ShapeError("environment shape witness mismatch")
        return Env(tuple(
            (k, expand_hole(v, rv, lat))
            for (k, v), (_, rv) in zip(x.entries, raw.entries)
        ))
    if type(x) is not type(raw):
        raise ShapeError(f"shape witness mismatch: {type(x).__name__} vs {type(raw).__name__}")
    kwargs = {}
    for f in fields(x):
        vx, vr = getattr(x, f.name), getattr(raw, f.name)
        if _is_ann_field(f) or f.name == "span":
            kwargs[f.name] = vx
        else:
            kwargs[f.name] = _expand_field(vx, vr, lat)
    return type(x)(**kwargs)


def _expand_field(vx: Any, vr: Any, lat: Lattice) -> Any:
    if isinstance(vx, (SyntaxNode, Env, Hole)):
        return expand_hole(vx, vr, lat)
    if isinstance(vx, tuple):
        return tuple(_expand_field(x, r, lat) for x, r in zip(vx, vr))
    return vx


def neg_sel(x: Node, raw: Node, lat: Lattice) -> Node:
    """Pointwise complement (Boolean lattices only).

    Holes are first expanded against ``raw`` so the complement of "nothing
    selected" is the fully selected shape; the all-top dual of the hole is
    never materialized as a distinct constructor.
    """
    if not lat.is_boolean():
        raise LatticeNotBooleanError("complement requires a Boolean lattice")
    return map_anns(expand_hole(x, raw, lat), lat.neg)  # type: ignore[attr-defined]


class LatticeNotBooleanError(TypeError):
    pass


# ---------------------------------------------------------------------------
# Hole-expansion views used by the analyses.  Each returns the components
# of the expected constructor, synthesizing bottom parts when the
# selection is a hole.


def atom_view(v: Node, lat: Lattice) -> Ann:
    """Annotation of an atomic value/term selection (hole gives bottom)."""
    if isinstance(v, Hole):
        return lat.bot
    if isinstance(v, ATOM_VALS + ATOM_TERMS):
        return v.ann
    raise ShapeError(f"not an annotated atom: {v!r}")


def cons_view(v: Node, lat: Lattice) -> tuple[Node, Node, Ann]:
    if isinstance(v, Hole):
        return HOLE, HOLE, lat.bot
    if isinstance(v, (VCons, Cons)):
        return v.head, v.tail, v.ann
    raise ShapeError(f"expected a cons selection, got {v!r}")


def record_view(v: Node, field_names: tuple[str, ...], lat: Lattice) -> tuple[dict, Ann]:
    if isinstance(v, Hole):
        return {name: HOLE for name in field_names}, lat.bot
    if isinstance(v, (VRec, Rec)):
        return dict(v.fields), v.ann
    raise ShapeError(f"expected a record selection, got {v!r}")


def closure_view(v: Node, raw: VClosure, lat: Lattice) -> tuple[Env, tuple, Ann, Node]:
    if isinstance(v, Hole):
        defs = tuple((name, HOLE) for name, _ in raw.defs)
        return raw.env.bot_like(), defs, lat.bot, HOLE
    if isinstance(v, VClosure):
        return v.env, v.defs, v.ann, v.elim
    raise ShapeError(f"expected a closure selection, got {v!r}")


def matrix_view(v: Node, raw: VMat, lat: Lattice) -> tuple[tuple, Ann, Ann, Ann]:
    if isinstance(v, Hole):
        grid = tuple((HOLE,) * raw.cols for _ in range(raw.rows))
        return grid, lat.bot, lat.bot, lat.bot
    if isinstance(v, VMat):
        return v.cells, v.rows_ann, v.cols_ann, v.ann
    raise ShapeError(f"expected a matrix selection, got {v!r}")


# ---------------------------------------------------------------------------
# Term-selection views (hole expansion for term positions)


def term_atom_ann(e, lat: Lattice) -> Ann:
    return lat.bot if isinstance(e, Hole) else e.ann


def rec_term_view(e, names: tuple[str, ...], lat: Lattice):
    if isinstance(e, Hole):
        return {n: HOLE for n in names}, lat.bot
    if isinstance(e, Rec):
        return dict(e.fields), e.ann
    raise ShapeError(f"expected a record term selection, got {e!r}")


def app_view(e):
    if isinstance(e, Hole):
        return HOLE, HOLE
    if isinstance(e, App):
        return e.fn, e.arg
    raise ShapeError(f"expected an application selection, got {e!r}")


def proj_view(e):
    if isinstance(e, Hole):
        return HOLE
    if isinstance(e, Proj):
        return e.record
    raise ShapeError(f"expected a projection selection, got {e!r}")


def cons_term_view(e, lat: Lattice):
    if isinstance(e, Hole):
        return HOLE, HOLE, lat.bot
    if isinstance(e, Cons):
        return e.head, e.tail, e.ann
    raise ShapeError(f"expected a cons term selection, got {e!r}")


def lam_view(e):
    if isinstance(e, Hole):
        return HOLE
    if isinstance(e, Lam):
        return e.elim
    raise ShapeError(f"expected a lambda selection, got {e!r}")


def primapp_view(e, arity: int):
    if isinstance(e, Hole):
        return (HOLE,) * arity
    if isinstance(e, PrimApp):
        return e.args
    raise ShapeError(f"expected a primitive application selection, got {e!r}")


def letrec_view(e, names: tuple[str, ...]):
    if isinstance(e, Hole):
        return tuple((n, HOLE) for n in names), HOLE
    if isinstance(e, LetRec):
        return e.defs, e.body
    raise ShapeError(f"expected a letrec selection, got {e!r}")


def matgen_view(e, lat: Lattice):
    if isinstance(e, Hole):
        return HOLE, HOLE, HOLE, lat.bot
    if isinstance(e, MatGen):
        return e.rows, e.cols, e.body, e.ann
    raise ShapeError(f"expected a matrix generator selection, got {e!r}")


def matlit_view(e, m: int, n: int, lat: Lattice):
    if isinstance(e, Hole):
        return tuple((HOLE,) * n for _ in range(m)), lat.bot
    if isinstance(e, MatLit):
        return e.cells, e.ann
    raise ShapeError(f"expected a matrix literal selection, got {e!r}")


def matlookup_view(e):
    if isinstance(e, Hole):
        return HOLE, HOLE, HOLE
    if isinstance(e, MatLookup):
        return e.matrix, e.row, e.col
    raise ShapeError(f"expected a matrix lookup selection, got {e!r}")


def matdims_view(e):
    if isinstance(e, Hole):
        return HOLE
    if isinstance(e, MatDims):
        return e.matrix
    raise ShapeError(f"expected a dims selection, got {e!r}")



# ---------------------------------------------------------------------------
# Convenience constructors


def list_val(items: list[Val], lat: Lattice = UNIT, ann: Ann = None) -> Val:
    out: Val = VNil(ann)
    for item in reversed(items):
        out = VCons(item, out, ann)
    return out


def iter_list_val(v: Val) -> Iterator[Val]:
    while isinstance(v, VCons):
        yield v.head
        v = v.tail
    if not isinstance(v, VNil):
        raise ShapeError("not a proper list value")


def match_binding_count(w: Any) -> int:
    """Number of variable bindings a match witness introduces."""
    from .evaluator import MVar, MBool, MNil, MCons, MRec  # local import to avoid cycle

    if isinstance(w, MVar):
        return 1
    if isinstance(w, (MBool, MNil)):
        return 0
    if isinstance(w, MCons):
        return match_binding_count(w.head) + match_binding_count(w.tail)
    if isinstance(w, MRec):
        return sum(match_binding_count(x) for _, x in w.fields)
    raise TypeError(f"not a match witness: {w!r}")
