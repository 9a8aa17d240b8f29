"""Surface-language AST.

Selectable forms (literals, list brackets, comprehensions, matrix
constructors) carry an ``ann`` slot; every node carries a source span so
backward-desugared demand can be rendered as highlights.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..lattice import Ann
from ..syntax import Span, SyntaxNode


@dataclass
class SurfaceTerm(SyntaxNode):
    pass


@dataclass
class SVar(SurfaceTerm):
    name: str
    span: Optional[Span] = None


@dataclass
class SOp(SurfaceTerm):
    """First-class operator section, e.g. ``(+)``."""

    name: str
    span: Optional[Span] = None


@dataclass
class SInt(SurfaceTerm):
    value: int
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SFlt(SurfaceTerm):
    value: float
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SStr(SurfaceTerm):
    value: str
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SBool(SurfaceTerm):
    value: bool
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SRec(SurfaceTerm):
    fields: tuple[tuple[str, SurfaceTerm], ...]
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SProj(SurfaceTerm):
    record: SurfaceTerm
    field: str
    span: Optional[Span] = None


@dataclass
class SApp(SurfaceTerm):
    fn: SurfaceTerm
    arg: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SPrim(SurfaceTerm):
    """Saturated primitive application; infix in the concrete syntax for
    binary operators."""

    op: str
    args: tuple[SurfaceTerm, ...]
    span: Optional[Span] = None


@dataclass
class SCons(SurfaceTerm):
    head: SurfaceTerm
    tail: SurfaceTerm
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SListNil(SurfaceTerm):
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SListRest(SyntaxNode):
    pass


@dataclass
class SListEnd(SListRest):
    """The closing bracket of a list literal."""

    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SListNext(SListRest):
    """A delimiter plus the following element of a list literal."""

    item: SurfaceTerm
    rest: SListRest
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SListLit(SurfaceTerm):
    """Non-empty list literal ``[s, ...]``; the opening bracket carries
    the annotation, delimiters and the closing bracket carry the rest's."""

    first: SurfaceTerm
    rest: SListRest
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SListEnum(SurfaceTerm):
    lo: SurfaceTerm
    hi: SurfaceTerm
    span: Optional[Span] = None


# Patterns


@dataclass
class Pattern(SyntaxNode):
    pass


@dataclass
class PVar(Pattern):
    name: str
    span: Optional[Span] = None


@dataclass
class PBool(Pattern):
    value: bool
    span: Optional[Span] = None


@dataclass
class PNil(Pattern):
    span: Optional[Span] = None


@dataclass
class PCons(Pattern):
    head: Pattern
    tail: Pattern
    span: Optional[Span] = None


@dataclass
class PRec(Pattern):
    fields: tuple[tuple[str, Pattern], ...]
    span: Optional[Span] = None


@dataclass
class PListRest(SyntaxNode):
    pass


@dataclass
class PListEnd(PListRest):
    span: Optional[Span] = None


@dataclass
class PListNext(PListRest):
    item: Pattern
    rest: PListRest
    span: Optional[Span] = None


@dataclass
class PList(Pattern):
    """Non-empty list pattern ``[p, ...]``."""

    first: Pattern
    rest: PListRest
    span: Optional[Span] = None


# Qualifiers and clauses


@dataclass
class Qual(SyntaxNode):
    pass


@dataclass
class QGuard(Qual):
    cond: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class QDecl(Qual):
    pattern: Pattern
    value: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class QGen(Qual):
    pattern: Pattern
    source: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SListComp(SurfaceTerm):
    body: SurfaceTerm
    quals: tuple[Qual, ...]
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class Clause(SyntaxNode):
    patterns: tuple[Pattern, ...]
    body: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SFun(SurfaceTerm):
    clauses: tuple[Clause, ...]
    span: Optional[Span] = None


@dataclass
class SMatch(SurfaceTerm):
    scrutinee: SurfaceTerm
    clauses: tuple[Clause, ...]
    span: Optional[Span] = None


@dataclass
class SIf(SurfaceTerm):
    cond: SurfaceTerm
    then: SurfaceTerm
    otherwise: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SLet(SurfaceTerm):
    pattern: Pattern
    value: SurfaceTerm
    body: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SLetRec(SurfaceTerm):
    groups: tuple[tuple[str, tuple[Clause, ...]], ...]
    body: SurfaceTerm
    span: Optional[Span] = None


# Matrices


@dataclass
class SMatLit(SurfaceTerm):
    cells: tuple[tuple[SurfaceTerm, ...], ...]
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SMatGen(SurfaceTerm):
    body: SurfaceTerm
    var_i: str
    var_j: str
    rows: SurfaceTerm
    cols: SurfaceTerm
    ann: Ann = None
    span: Optional[Span] = None


@dataclass
class SMatLookup(SurfaceTerm):
    matrix: SurfaceTerm
    row: SurfaceTerm
    col: SurfaceTerm
    span: Optional[Span] = None


@dataclass
class SMatDims(SurfaceTerm):
    matrix: SurfaceTerm
    span: Optional[Span] = None
