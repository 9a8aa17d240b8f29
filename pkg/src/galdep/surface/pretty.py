"""Canonical pretty-printing of surface terms, and rendering of surface
selections as source highlights.

Highlights use the spans recorded by the parser: every selectable node
whose annotation is above bottom contributes its span.  Two rendering
layers exist by convention: selections made by the user, and selections
computed by an analysis.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..lattice import Lattice
from ..syntax import Span, ann_slots, children
from .ast import (
    Clause, Pattern, PBool, PCons, PList, PListEnd, PListNext, PListRest,
    PNil, PRec, PVar, QDecl, QGen, QGuard, Qual, SApp, SBool, SCons, SFlt,
    SFun, SIf, SInt, SLet, SLetRec, SListComp, SListEnd, SListEnum, SListLit,
    SListNext, SListNil, SListRest, SMatch, SMatDims, SMatGen, SMatLit,
    SMatLookup, SOp, SPrim, SProj, SRec, SStr, SurfaceTerm, SVar,
)

_ATOMS = (SVar, SOp, SInt, SFlt, SStr, SBool, SRec, SListNil, SListLit,
          SListComp, SListEnum, SMatLit, SMatGen)


def _parens(s: str) -> str:
    return f"({s})"


def _atomic(term: SurfaceTerm, text: str) -> str:
    if isinstance(term, _ATOMS):
        return text
    return _parens(text)


def pretty(s: SurfaceTerm) -> str:
    if isinstance(s, SVar):
        return s.name
    if isinstance(s, SOp):
        return f"({s.name})"
    if isinstance(s, SInt):
        return str(s.value) if s.value >= 0 else f"({s.value})"
    if isinstance(s, SFlt):
        return repr(s.value) if s.value >= 0 else f"({s.value!r})"
    if isinstance(s, SStr):
        escaped = s.value.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n")
        return f'"{escaped}"'
    if isinstance(s, SBool):
        return "true" if s.value else "false"
    if isinstance(s, SRec):
        inner = ", ".join(f"{n}: {pretty(v)}" for n, v in s.fields)
        return "{" + inner + "}"
    if isinstance(s, SProj):
        return f"{_atomic(s.record, pretty(s.record))}.{s.field}"
    if isinstance(s, SApp):
        fn = pretty(s.fn)
        if not isinstance(s.fn, (SApp, SVar, SOp, SProj, SMatLookup) + _ATOMS):
            fn = _parens(fn)
        return f"{fn} {_atomic(s.arg, pretty(s.arg))}"
    if isinstance(s, SPrim):
        if len(s.args) == 2:
            left, right = (_atomic(a, pretty(a)) for a in s.args)
            return f"{left} {s.op} {right}"
        inner = " ".join(_atomic(a, pretty(a)) for a in s.args)
        return f"({s.op}) {inner}"
    if isinstance(s, SCons):
        return f"{_atomic(s.head, pretty(s.head))} : {_atomic(s.tail, pretty(s.tail))}"
    if isinstance(s, SListNil):
        return "[]"
    if isinstance(s, SListLit):
        items = [pretty(s.first)]
        rest = s.rest
        while isinstance(rest, SListNext):
            items.append(pretty(rest.item))
            rest = rest.rest
        return "[" + ", ".join(items) + "]"
    if isinstance(s, SListEnum):
        return f"[{pretty(s.lo)} .. {pretty(s.hi)}]"
    if isinstance(s, SListComp):
        quals = ", ".join(pretty_qual(q) for q in s.quals)
        return f"[{pretty(s.body)} | {quals}]" if quals else f"[{pretty(s.body)} |]"
    if isinstance(s, SFun):
        if len(s.clauses) == 1:
            c = s.clauses[0]
            pats = " ".join(pretty_pattern(p) for p in c.patterns)
            return f"fun {pats} -> {pretty(c.body)}"
        inner = "; ".join(
            " ".join(pretty_pattern(p) for p in c.patterns) + " -> " + pretty(c.body)
            for c in s.clauses
        )
        return "fun { " + inner + " }"
    if isinstance(s, SMatch):
        inner = "; ".join(
            " ".join(pretty_pattern(p) for p in c.patterns) + " -> " + pretty(c.body)
            for c in s.clauses
        )
        return f"match {pretty(s.scrutinee)} as {{ {inner} }}"
    if isinstance(s, SIf):
        return f"if {pretty(s.cond)} then {pretty(s.then)} else {pretty(s.otherwise)}"
    if isinstance(s, SLet):
        return (f"let {pretty_pattern(s.pattern)} = {pretty(s.value)} "
                f"in {pretty(s.body)}")
    if isinstance(s, SLetRec):
        eqs = []
        for name, clauses in s.groups:
            for c in clauses:
                pats = " ".join(pretty_pattern(p) for p in c.patterns)
                eqs.append(f"{name} {pats} = {pretty(c.body)}")
        return "letrec " + "; ".join(eqs) + f" in {pretty(s.body)}"
    if isinstance(s, SMatLit):
        rows = "; ".join(", ".join(pretty(c) for c in row) for row in s.cells)
        return f"<< {rows} >>"
    if isinstance(s, SMatGen):
        return (f"<| {pretty(s.body)} | ({s.var_i}, {s.var_j}) in "
                f"({pretty(s.rows)}, {pretty(s.cols)}) |>")
    if isinstance(s, SMatLookup):
        return f"{_atomic(s.matrix, pretty(s.matrix))}!({pretty(s.row)}, {pretty(s.col)})"
    if isinstance(s, SMatDims):
        return f"dims {_atomic(s.matrix, pretty(s.matrix))}"
    raise TypeError(f"cannot print {type(s).__name__}")


def pretty_qual(q: Qual) -> str:
    if isinstance(q, QGuard):
        return pretty(q.cond)
    if isinstance(q, QDecl):
        return f"let {pretty_pattern(q.pattern)} = {pretty(q.value)}"
    if isinstance(q, QGen):
        return f"{pretty_pattern(q.pattern)} <- {pretty(q.source)}"
    raise TypeError(f"not a qualifier: {q!r}")


def pretty_pattern(p: Pattern) -> str:
    if isinstance(p, PVar):
        return p.name
    if isinstance(p, PBool):
        return "true" if p.value else "false"
    if isinstance(p, PNil):
        return "[]"
    if isinstance(p, PCons):
        head = pretty_pattern(p.head)
        if isinstance(p.head, (PCons, PList)):
            head = _parens(head)
        return _parens(f"{head} : {pretty_pattern(p.tail)}")
    if isinstance(p, PList):
        items = [pretty_pattern(p.first)]
        rest = p.rest
        while isinstance(rest, PListNext):
            items.append(pretty_pattern(rest.item))
            rest = rest.rest
        return "[" + ", ".join(items) + "]"
    if isinstance(p, PRec):
        inner = ", ".join(f"{n}: {pretty_pattern(sub)}" for n, sub in p.fields)
        return "{" + inner + "}"
    raise TypeError(f"not a pattern: {p!r}")


# ---------------------------------------------------------------------------
# Highlight extraction


@dataclass(frozen=True)
class Highlight:
    span: Span
    ann: object  # lattice element above bottom


def collect_highlights(sel, lat: Lattice, file: Optional[str] = None) -> list[Highlight]:
    """Spans of selectable surface nodes whose annotation is above bottom.

    ``file`` restricts the result to spans from one source file (the
    prelude is spliced into every program and is usually filtered out).
    """
    out: list[Highlight] = []

    def walk(node) -> None:
        span = getattr(node, "span", None)
        for ann in ann_slots(node):
            if ann is not None and ann != lat.bot and span is not None:
                if file is None or span.file == file:
                    out.append(Highlight(span, ann))
        for c in children(node):
            walk(c)

    walk(sel)
    out.sort(key=lambda h: (h.span.start, h.span.end))
    return out


def render_marked_source(source: str, highlights: list[Highlight],
                         open_mark: str = "\u00ab", close_mark: str = "\u00bb") -> str:
    """The source text with highlighted spans wrapped in markers."""
    events: list[tuple[int, int, str]] = []
    for h in highlights:
        events.append((h.span.start, 1, open_mark))
        events.append((h.span.end, 0, close_mark))
    events.sort(key=lambda e: (e[0], e[1]))
    parts = []
    pos = 0
    for offset, _, mark in events:
        parts.append(source[pos:offset])
        parts.append(mark)
        pos = offset
    parts.append(source[pos:])
    return "".join(parts)
