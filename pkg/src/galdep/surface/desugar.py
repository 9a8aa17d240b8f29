"""Bidirectional desugaring between the surface language and the core.

Forward desugaring carries selections from surface constructs onto the
core constructs they elaborate into; backward desugaring joins demand on
generated core syntax back onto the surface constructs responsible,
guided by the original raw surface term.  Clause groups elaborate into
eliminators via a disjoint join; generator patterns are totalised so
non-matching elements contribute empty lists.
"""

from __future__ import annotations

from typing import Optional

from ..lattice import Ann, Lattice
from ..syntax import (
    App, Bool, Cons, Elim, ElimBool, ElimCons, ElimFalse, ElimList, ElimNil,
    ElimRec, ElimTrue, ElimVar, Flt, Hole, HOLE, Int, Lam, LetRec, MatDims,
    MatGen, MatLit, MatLookup, Nil, PrimApp, Proj, Rec, ShapeError, Span,
    Str, Term, Var, app_view, cons_term_view, lam_view, letrec_view,
    matdims_view, matgen_view, matlit_view, matlookup_view, primapp_view,
    proj_view, rec_term_view, term_atom_ann,
)
from .ast import (
    Clause, Pattern, PBool, PCons, PList, PListEnd, PListNext, PListRest,
    PNil, PRec, PVar, QDecl, QGen, QGuard, Qual, SApp, SBool, SCons, SFlt,
    SFun, SIf, SInt, SLet, SLetRec, SListComp, SListEnd, SListEnum, SListLit,
    SListNext, SListNil, SListRest, SMatch, SMatDims, SMatGen, SMatLit,
    SMatLookup, SOp, SPrim, SProj, SRec, SStr, SurfaceTerm, SVar,
)


class DesugarError(Exception):
    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class ClauseOverlapError(DesugarError):
    pass


# fresh names for the value positions introduced by totalise; these cannot
# collide with parsed identifiers
FRESH_HEAD = "$h"
FRESH_TAIL = "$t"


# ---------------------------------------------------------------------------
# Disjoint join of partial continuations


def disjoint_join(a, b):
    if isinstance(a, Lam) and isinstance(b, Lam):
        return Lam(disjoint_join(a.elim, b.elim), span=a.span)
    if isinstance(a, ElimVar) and isinstance(b, ElimVar):
        if a.name != b.name:
            raise ClauseOverlapError(
                f"clauses bind different names ('{a.name}' vs '{b.name}') "
                "at the same position")
        return ElimVar(a.name, disjoint_join(a.cont, b.cont))
    if isinstance(a, ElimTrue):
        if isinstance(b, ElimTrue):
            return ElimTrue(disjoint_join(a.cont, b.cont))
        if isinstance(b, ElimFalse):
            return ElimBool(a.cont, b.cont)
        if isinstance(b, ElimBool):
            return ElimBool(disjoint_join(a.cont, b.if_true), b.if_false)
    if isinstance(a, ElimFalse):
        if isinstance(b, ElimFalse):
            return ElimFalse(disjoint_join(a.cont, b.cont))
        if isinstance(b, ElimTrue):
            return ElimBool(b.cont, a.cont)
        if isinstance(b, ElimBool):
            return ElimBool(b.if_true, disjoint_join(a.cont, b.if_false))
    if isinstance(a, ElimBool):
        if isinstance(b, ElimTrue):
            return ElimBool(disjoint_join(a.if_true, b.cont), a.if_false)
        if isinstance(b, ElimFalse):
            return ElimBool(a.if_true, disjoint_join(a.if_false, b.cont))
        if isinstance(b, ElimBool):
            return ElimBool(disjoint_join(a.if_true, b.if_true),
                            disjoint_join(a.if_false, b.if_false))
    if isinstance(a, ElimNil):
        if isinstance(b, ElimNil):
            return ElimNil(disjoint_join(a.cont, b.cont))
        if isinstance(b, ElimCons):
            return ElimList(a.cont, b.cont)
        if isinstance(b, ElimList):
            return ElimList(disjoint_join(a.cont, b.if_nil), b.if_cons)
    if isinstance(a, ElimCons):
        if isinstance(b, ElimCons):
            return ElimCons(disjoint_join(a.cont, b.cont))
        if isinstance(b, ElimNil):
            return ElimList(b.cont, a.cont)
        if isinstance(b, ElimList):
            return ElimList(b.if_nil, disjoint_join(a.cont, b.if_cons))
    if isinstance(a, ElimList):
        if isinstance(b, ElimNil):
            return ElimList(disjoint_join(a.if_nil, b.cont), a.if_cons)
        if isinstance(b, ElimCons):
            return ElimList(a.if_nil, disjoint_join(a.if_cons, b.cont))
        if isinstance(b, ElimList):
            return ElimList(disjoint_join(a.if_nil, b.if_nil),
                            disjoint_join(a.if_cons, b.if_cons))
    if isinstance(a, ElimRec) and isinstance(b, ElimRec):
        if a.field_names != b.field_names:
            raise ClauseOverlapError("record clauses match different field sets")
        return ElimRec(a.field_names, disjoint_join(a.cont, b.cont))
    raise ClauseOverlapError(
        f"overlapping clauses: cannot merge {type(a).__name__} with {type(b).__name__}")


# ---------------------------------------------------------------------------
# Clauses: patterns to eliminators (forward)


def pattern_fwd(p: Pattern, kappa):
    if isinstance(p, PVar):
        return ElimVar(p.name, kappa)
    if isinstance(p, PBool):
        return ElimTrue(kappa) if p.value else ElimFalse(kappa)
    if isinstance(p, PNil):
        return ElimNil(kappa)
    if isinstance(p, PCons):
        return ElimCons(pattern_fwd(p.head, pattern_fwd(p.tail, kappa)))
    if isinstance(p, PList):
        return ElimCons(pattern_fwd(p.first, _rest_pattern_fwd(p.rest, kappa)))
    if isinstance(p, PRec):
        names = tuple(n for n, _ in p.fields)
        cont = kappa
        for _, sub in reversed(p.fields):
            cont = pattern_fwd(sub, cont)
        return ElimRec(names, cont)
    raise DesugarError(f"not a pattern: {p!r}")


def _rest_pattern_fwd(o: PListRest, kappa):
    if isinstance(o, PListEnd):
        return ElimNil(kappa)
    if isinstance(o, PListNext):
        return ElimCons(pattern_fwd(o.item, _rest_pattern_fwd(o.rest, kappa)))
    raise DesugarError(f"not a list-rest pattern: {o!r}")


def clause_fwd(patterns: tuple[Pattern, ...], body: Term):
    """Curried elaboration: every pattern after the first is consumed by a
    nested anonymous function."""
    kappa: object = body
    for p in reversed(patterns[1:]):
        kappa = Lam(pattern_fwd(p, kappa))
    return pattern_fwd(patterns[0], kappa)


def clauses_fwd(clauses: tuple[Clause, ...]) -> Elim:
    elims = [clause_fwd(c.patterns, desugar_fwd(c.body)) for c in clauses]
    out = elims[0]
    for e in elims[1:]:
        out = disjoint_join(out, e)
    return out


# ---------------------------------------------------------------------------
# Clauses: navigation (backward)


def _lam_elim_view(cont):
    if isinstance(cont, Hole):
        return HOLE
    if isinstance(cont, Lam):
        return cont.elim
    raise ShapeError(f"expected a function selection, got {cont!r}")


def pattern_bwd(sigma, p: Pattern):
    """Navigate an eliminator selection along one pattern, returning the
    selection of the continuation the pattern guards."""
    if isinstance(sigma, Hole):
        return HOLE
    if isinstance(p, PVar):
        if isinstance(sigma, ElimVar):
            return sigma.cont
    elif isinstance(p, PBool):
        if isinstance(sigma, ElimBool):
            return sigma.if_true if p.value else sigma.if_false
        if isinstance(sigma, (ElimTrue, ElimFalse)):
            return sigma.cont
    elif isinstance(p, PNil):
        if isinstance(sigma, ElimList):
            return sigma.if_nil
        if isinstance(sigma, ElimNil):
            return sigma.cont
    elif isinstance(p, PCons):
        inner = sigma.if_cons if isinstance(sigma, ElimList) else (
            sigma.cont if isinstance(sigma, ElimCons) else None)
        if inner is not None:
            return pattern_bwd(pattern_bwd(inner, p.head), p.tail)
    elif isinstance(p, PList):
        inner = sigma.if_cons if isinstance(sigma, ElimList) else (
            sigma.cont if isinstance(sigma, ElimCons) else None)
        if inner is not None:
            return _rest_pattern_bwd(pattern_bwd(inner, p.first), p.rest)
    elif isinstance(p, PRec):
        if isinstance(sigma, ElimRec):
            cont = sigma.cont
            for _, sub in p.fields:
                cont = pattern_bwd(cont, sub)
            return cont
    raise ShapeError(f"pattern {p!r} does not fit eliminator selection {sigma!r}")


def _rest_pattern_bwd(sigma, o: PListRest):
    if isinstance(sigma, Hole):
        return HOLE
    if isinstance(o, PListEnd):
        if isinstance(sigma, ElimList):
            return sigma.if_nil
        if isinstance(sigma, ElimNil):
            return sigma.cont
    elif isinstance(o, PListNext):
        inner = sigma.if_cons if isinstance(sigma, ElimList) else (
            sigma.cont if isinstance(sigma, ElimCons) else None)
        if inner is not None:
            return _rest_pattern_bwd(pattern_bwd(inner, o.item), o.rest)
    raise ShapeError(f"list-rest pattern {o!r} does not fit {sigma!r}")


def clause_bwd(sigma, patterns: tuple[Pattern, ...]):
    cont = pattern_bwd(sigma, patterns[0])
    for p in patterns[1:]:
        cont = pattern_bwd(_lam_elim_view(cont), p)
    return cont


def clauses_bwd(sigma, raw_clauses: tuple[Clause, ...], lat: Lattice) -> tuple[Clause, ...]:
    out = []
    for c in raw_clauses:
        leaf = clause_bwd(sigma, c.patterns)
        out.append(Clause(c.patterns, desugar_bwd(leaf, c.body, lat), span=c.span))
    return tuple(out)


# ---------------------------------------------------------------------------
# Totalise: complete a generator's partial eliminator with empty-list
# branches so that non-matching elements contribute nothing.


def totalise_fwd(kappa, ann: Ann, work: list):
    if not work:
        return kappa
    item, rest = work[0], work[1:]
    if isinstance(item, PVar):
        return ElimVar(item.name, totalise_fwd(kappa.cont, ann, rest))
    if isinstance(item, PBool):
        done = totalise_fwd(kappa.cont, ann, rest)
        if item.value:
            return ElimBool(done, Nil(ann))
        return ElimBool(Nil(ann), done)
    if isinstance(item, (PNil, PListEnd)):
        skip = ElimVar(FRESH_HEAD, ElimVar(FRESH_TAIL, Nil(ann)))
        return ElimList(totalise_fwd(kappa.cont, ann, rest), skip)
    if isinstance(item, PCons):
        return ElimList(Nil(ann), totalise_fwd(kappa.cont, ann, [item.head, item.tail] + rest))
    if isinstance(item, PList):
        return ElimList(Nil(ann), totalise_fwd(kappa.cont, ann, [item.first, item.rest] + rest))
    if isinstance(item, PListNext):
        return ElimList(Nil(ann), totalise_fwd(kappa.cont, ann, [item.item, item.rest] + rest))
    if isinstance(item, PRec):
        subs = [p for _, p in item.fields]
        return ElimRec(kappa.field_names, totalise_fwd(kappa.cont, ann, subs + rest))
    raise DesugarError(f"cannot totalise pattern {item!r}")


def _nil_ann(sel, lat: Lattice) -> Ann:
    if isinstance(sel, Hole):
        return lat.bot
    if isinstance(sel, Nil):
        return sel.ann
    raise ShapeError(f"expected an inserted-nil selection, got {sel!r}")


def _skip_branch_ann(sel, lat: Lattice) -> Ann:
    """Demand on the nil of the inserted skip branch (two variable
    eliminators around a nil)."""
    for _ in range(2):
        if isinstance(sel, Hole):
            return lat.bot
        sel = sel.cont
    return _nil_ann(sel, lat)


def totalise_bwd(kappa, work: list, lat: Lattice):
    """Undo ``totalise_fwd`` on a selection: recover the untotalised
    continuation selection plus the join of demand on the inserted nils."""
    if not work:
        return kappa, lat.bot
    item, rest = work[0], work[1:]
    if isinstance(kappa, Hole):
        kappa = _hole_elim_for(item)
    if isinstance(item, PVar):
        sub, ann = totalise_bwd(kappa.cont, rest, lat)
        return ElimVar(item.name, sub), ann
    if isinstance(item, PBool):
        taken = kappa.if_true if item.value else kappa.if_false
        inserted = kappa.if_false if item.value else kappa.if_true
        sub, ann = totalise_bwd(taken, rest, lat)
        wrapped = ElimTrue(sub) if item.value else ElimFalse(sub)
        return wrapped, lat.join(_nil_ann(inserted, lat), ann)
    if isinstance(item, (PNil, PListEnd)):
        inserted_ann = _skip_branch_ann(kappa.if_cons, lat)
        sub, ann = totalise_bwd(kappa.if_nil, rest, lat)
        return ElimNil(sub), lat.join(inserted_ann, ann)
    if isinstance(item, (PCons, PList, PListNext)):
        if isinstance(item, PCons):
            subwork = [item.head, item.tail] + rest
        elif isinstance(item, PList):
            subwork = [item.first, item.rest] + rest
        else:
            subwork = [item.item, item.rest] + rest
        inserted_ann = _nil_ann(kappa.if_nil, lat)
        sub, ann = totalise_bwd(kappa.if_cons, subwork, lat)
        return ElimCons(sub), lat.join(inserted_ann, ann)
    if isinstance(item, PRec):
        subs = [p for _, p in item.fields]
        sub, ann = totalise_bwd(kappa.cont, subs + rest, lat)
        return ElimRec(kappa.field_names, sub), ann
    raise DesugarError(f"cannot untotalise pattern {item!r}")


def _hole_elim_for(item):
    """Expand a hole to the eliminator shape ``totalise_fwd`` produced."""
    if isinstance(item, PVar):
        return ElimVar(item.name, HOLE)
    if isinstance(item, PBool):
        return ElimBool(HOLE, HOLE)
    if isinstance(item, (PNil, PListEnd, PCons, PList, PListNext)):
        return ElimList(HOLE, HOLE)
    if isinstance(item, PRec):
        return ElimRec(tuple(n for n, _ in item.fields), HOLE)
    raise DesugarError(f"cannot expand hole for pattern {item!r}")


# ---------------------------------------------------------------------------
# Forward desugaring


def desugar_fwd(s: SurfaceTerm) -> Term:
    if isinstance(s, SVar):
        return Var(s.name, span=s.span)
    if isinstance(s, SOp):
        return Var(s.name, span=s.span)
    if isinstance(s, SInt):
        return Int(s.value, s.ann, span=s.span)
    if isinstance(s, SFlt):
        return Flt(s.value, s.ann, span=s.span)
    if isinstance(s, SStr):
        return Str(s.value, s.ann, span=s.span)
    if isinstance(s, SBool):
        return Bool(s.value, s.ann, span=s.span)
    if isinstance(s, SRec):
        return Rec(tuple((n, desugar_fwd(v)) for n, v in s.fields), s.ann, span=s.span)
    if isinstance(s, SProj):
        return Proj(desugar_fwd(s.record), s.field, span=s.span)
    if isinstance(s, SApp):
        return App(desugar_fwd(s.fn), desugar_fwd(s.arg), span=s.span)
    if isinstance(s, SPrim):
        return PrimApp(s.op, tuple(desugar_fwd(a) for a in s.args), span=s.span)
    if isinstance(s, SCons):
        return Cons(desugar_fwd(s.head), desugar_fwd(s.tail), s.ann, span=s.span)
    if isinstance(s, SListNil):
        return Nil(s.ann, span=s.span)
    if isinstance(s, SListLit):
        return Cons(desugar_fwd(s.first), _rest_fwd(s.rest), s.ann, span=s.span)
    if isinstance(s, SListEnum):
        fn = App(Var("enumFromTo", span=s.span), desugar_fwd(s.lo), span=s.span)
        return App(fn, desugar_fwd(s.hi), span=s.span)
    if isinstance(s, SListComp):
        return _comp_fwd(s.body, list(s.quals), s.ann, s.span)
    if isinstance(s, SFun):
        return Lam(clauses_fwd(s.clauses), span=s.span)
    if isinstance(s, SMatch):
        return App(Lam(clauses_fwd(s.clauses), span=s.span),
                   desugar_fwd(s.scrutinee), span=s.span)
    if isinstance(s, SIf):
        elim = ElimBool(desugar_fwd(s.then), desugar_fwd(s.otherwise))
        return App(Lam(elim, span=s.span), desugar_fwd(s.cond), span=s.span)
    if isinstance(s, SLet):
        elim = pattern_fwd(s.pattern, desugar_fwd(s.body))
        return App(Lam(elim, span=s.span), desugar_fwd(s.value), span=s.span)
    if isinstance(s, SLetRec):
        defs = tuple((name, clauses_fwd(cs)) for name, cs in s.groups)
        return LetRec(defs, desugar_fwd(s.body), span=s.span)
    if isinstance(s, SMatLit):
        cells = tuple(tuple(desugar_fwd(c) for c in row) for row in s.cells)
        return MatLit(cells, s.ann, span=s.span)
    if isinstance(s, SMatGen):
        return MatGen(desugar_fwd(s.rows), desugar_fwd(s.cols), s.var_i, s.var_j,
                      desugar_fwd(s.body), s.ann, span=s.span)
    if isinstance(s, SMatLookup):
        return MatLookup(desugar_fwd(s.matrix), desugar_fwd(s.row),
                         desugar_fwd(s.col), span=s.span)
    if isinstance(s, SMatDims):
        return MatDims(desugar_fwd(s.matrix), span=s.span)
    raise DesugarError(f"cannot desugar {type(s).__name__}", getattr(s, "span", None))


def _rest_fwd(r: SListRest) -> Term:
    if isinstance(r, SListEnd):
        return Nil(r.ann, span=r.span)
    if isinstance(r, SListNext):
        return Cons(desugar_fwd(r.item), _rest_fwd(r.rest), r.ann, span=r.span)
    raise DesugarError(f"not a list rest: {r!r}")


def _comp_fwd(body: SurfaceTerm, quals: list[Qual], ann: Ann, span) -> Term:
    if not quals:
        e = desugar_fwd(body)
        return Cons(e, Nil(ann, span=span), ann, span=span)
    q, rest = quals[0], quals[1:]
    inner = _comp_fwd(body, rest, ann, span)
    if isinstance(q, QGuard):
        elim = ElimBool(inner, Nil(ann, span=span))
        return App(Lam(elim, span=span), desugar_fwd(q.cond), span=span)
    if isinstance(q, QDecl):
        elim = pattern_fwd(q.pattern, inner)
        return App(Lam(elim, span=span), desugar_fwd(q.value), span=span)
    if isinstance(q, QGen):
        sigma = totalise_fwd(pattern_fwd(q.pattern, inner), ann, [q.pattern])
        fn = App(Var("concatMap", span=span), Lam(sigma, span=span), span=span)
        return App(fn, desugar_fwd(q.source), span=span)
    raise DesugarError(f"not a qualifier: {q!r}")


# ---------------------------------------------------------------------------
# Backward desugaring


def desugar_bwd(e, s: SurfaceTerm, lat: Lattice) -> SurfaceTerm:
    """Join demand on the core selection ``e`` back onto the surface term
    that desugared to it; ``s`` is the raw surface term guiding the walk."""
    if isinstance(s, SVar):
        return SVar(s.name, span=s.span)
    if isinstance(s, SOp):
        return SOp(s.name, span=s.span)
    if isinstance(s, SInt):
        return SInt(s.value, term_atom_ann(e, lat), span=s.span)
    if isinstance(s, SFlt):
        return SFlt(s.value, term_atom_ann(e, lat), span=s.span)
    if isinstance(s, SStr):
        return SStr(s.value, term_atom_ann(e, lat), span=s.span)
    if isinstance(s, SBool):
        return SBool(s.value, term_atom_ann(e, lat), span=s.span)
    if isinstance(s, SRec):
        names = tuple(n for n, _ in s.fields)
        sub, ann = rec_term_view(e, names, lat)
        fields = tuple((n, desugar_bwd(sub[n], v, lat)) for n, v in s.fields)
        return SRec(fields, ann, span=s.span)
    if isinstance(s, SProj):
        return SProj(desugar_bwd(proj_view(e), s.record, lat), s.field, span=s.span)
    if isinstance(s, SApp):
        fn, arg = app_view(e)
        return SApp(desugar_bwd(fn, s.fn, lat), desugar_bwd(arg, s.arg, lat), span=s.span)
    if isinstance(s, SPrim):
        args = primapp_view(e, len(s.args))
        return SPrim(s.op, tuple(desugar_bwd(a, t, lat) for a, t in zip(args, s.args)),
                     span=s.span)
    if isinstance(s, SCons):
        head, tail, ann = cons_term_view(e, lat)
        return SCons(desugar_bwd(head, s.head, lat), desugar_bwd(tail, s.tail, lat),
                     ann, span=s.span)
    if isinstance(s, SListNil):
        return SListNil(term_atom_ann(e, lat), span=s.span)
    if isinstance(s, SListLit):
        head, tail, ann = cons_term_view(e, lat)
        return SListLit(desugar_bwd(head, s.first, lat), _rest_bwd(tail, s.rest, lat),
                        ann, span=s.span)
    if isinstance(s, SListEnum):
        fn, hi = app_view(e)
        _, lo = app_view(fn)
        return SListEnum(desugar_bwd(lo, s.lo, lat), desugar_bwd(hi, s.hi, lat), span=s.span)
    if isinstance(s, SListComp):
        body, quals, ann = _comp_bwd(e, s.body, list(s.quals), lat)
        return SListComp(body, tuple(quals), ann, span=s.span)
    if isinstance(s, SFun):
        return SFun(clauses_bwd(lam_view(e), s.clauses, lat), span=s.span)
    if isinstance(s, SMatch):
        fn, arg = app_view(e)
        return SMatch(desugar_bwd(arg, s.scrutinee, lat),
                      clauses_bwd(lam_view(fn), s.clauses, lat), span=s.span)
    if isinstance(s, SIf):
        fn, cond = app_view(e)
        elim = lam_view(fn)
        if isinstance(elim, Hole):
            then_sel = otherwise_sel = HOLE
        else:
            then_sel, otherwise_sel = elim.if_true, elim.if_false
        return SIf(desugar_bwd(cond, s.cond, lat),
                   desugar_bwd(then_sel, s.then, lat),
                   desugar_bwd(otherwise_sel, s.otherwise, lat), span=s.span)
    if isinstance(s, SLet):
        fn, value = app_view(e)
        leaf = pattern_bwd(lam_view(fn), s.pattern)
        return SLet(s.pattern, desugar_bwd(value, s.value, lat),
                    desugar_bwd(leaf, s.body, lat), span=s.span)
    if isinstance(s, SLetRec):
        names = tuple(name for name, _ in s.groups)
        defs_sel, body_sel = letrec_view(e, names)
        groups = tuple(
            (name, clauses_bwd(elim_sel, clauses, lat))
            for (name, clauses), (_, elim_sel) in zip(s.groups, defs_sel)
        )
        return SLetRec(groups, desugar_bwd(body_sel, s.body, lat), span=s.span)
    if isinstance(s, SMatLit):
        m, n = len(s.cells), len(s.cells[0])
        cells_sel, ann = matlit_view(e, m, n, lat)
        cells = tuple(
            tuple(desugar_bwd(cells_sel[i][j], s.cells[i][j], lat) for j in range(n))
            for i in range(m)
        )
        return SMatLit(cells, ann, span=s.span)
    if isinstance(s, SMatGen):
        rows, cols, body, ann = matgen_view(e, lat)
        return SMatGen(desugar_bwd(body, s.body, lat), s.var_i, s.var_j,
                       desugar_bwd(rows, s.rows, lat),
                       desugar_bwd(cols, s.cols, lat), ann, span=s.span)
    if isinstance(s, SMatLookup):
        mat, row, col = matlookup_view(e)
        return SMatLookup(desugar_bwd(mat, s.matrix, lat),
                          desugar_bwd(row, s.row, lat),
                          desugar_bwd(col, s.col, lat), span=s.span)
    if isinstance(s, SMatDims):
        return SMatDims(desugar_bwd(matdims_view(e), s.matrix, lat), span=s.span)
    raise DesugarError(f"cannot backward-desugar onto {type(s).__name__}",
                       getattr(s, "span", None))


def _rest_bwd(e, r: SListRest, lat: Lattice) -> SListRest:
    if isinstance(r, SListEnd):
        return SListEnd(term_atom_ann(e, lat), span=r.span)
    if isinstance(r, SListNext):
        head, tail, ann = cons_term_view(e, lat)
        return SListNext(desugar_bwd(head, r.item, lat), _rest_bwd(tail, r.rest, lat),
                         ann, span=r.span)
    raise DesugarError(f"not a list rest: {r!r}")


def _comp_bwd(e, body: SurfaceTerm, quals: list[Qual], lat: Lattice):
    """Returns (body', quals', comprehension annotation)."""
    if not quals:
        head, tail, cons_ann = cons_term_view(e, lat)
        nil_ann = term_atom_ann(tail, lat)
        return desugar_bwd(head, body, lat), [], lat.join(cons_ann, nil_ann)
    q, rest = quals[0], quals[1:]
    if isinstance(q, QGuard):
        fn, cond = app_view(e)
        elim = lam_view(fn)
        if isinstance(elim, Hole):
            inner_sel: object = HOLE
            nil_ann = lat.bot
        else:
            inner_sel = elim.if_true
            nil_ann = term_atom_ann(elim.if_false, lat)
        body2, quals2, beta = _comp_bwd(inner_sel, body, rest, lat)
        cond2 = desugar_bwd(cond, q.cond, lat)
        return body2, [QGuard(cond2, span=q.span)] + quals2, lat.join(nil_ann, beta)
    if isinstance(q, QDecl):
        fn, value = app_view(e)
        inner_sel = pattern_bwd(lam_view(fn), q.pattern)
        body2, quals2, beta = _comp_bwd(inner_sel, body, rest, lat)
        value2 = desugar_bwd(value, q.value, lat)
        return body2, [QDecl(q.pattern, value2, span=q.span)] + quals2, beta
    if isinstance(q, QGen):
        fn, source = app_view(e)
        _, lam_sel = app_view(fn)
        sigma = lam_view(lam_sel)
        untot, inserted_ann = totalise_bwd(sigma, [q.pattern], lat)
        inner_sel = pattern_bwd(untot, q.pattern)
        body2, quals2, beta = _comp_bwd(inner_sel, body, rest, lat)
        source2 = desugar_bwd(source, q.source, lat)
        return body2, [QGen(q.pattern, source2, span=q.span)] + quals2, lat.join(inserted_ann, beta)
    raise DesugarError(f"not a qualifier: {q!r}")
