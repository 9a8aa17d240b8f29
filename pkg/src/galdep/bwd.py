"""Backward dependency analysis: rewind a trace, mapping an output
selection (demand) to an environment selection, a term selection and an
ambient demand.

Environment demands are emitted hole-shaped and joined pointwise on the
way up; the join short-circuits when one side is all holes, so sparse
demands stay cheap.  Demand on a shared source expression (a function
body replayed many times, a matrix generator body) accumulates by join.
"""

from __future__ import annotations

from .evaluator import (
    Match, MBool, MCons, MNil, MRec, MVar, TApp, TBool, TCons, TFlt, TInt,
    TLambda, TLetRec, TMatDims, TMatGen, TMatLit, TMatLookup, TPrimApp,
    TProj, TRecord, TNil, TStr, TVar, Trace,
)
from .lattice import Ann, Lattice
from .primitives import get_prim
from .syntax import (
    App, Bool, Cons, Elim, ElimBool, ElimList, ElimRec, ElimVar, Env, Flt,
    Hole, HOLE, Int, Lam, LetRec, MatDims, MatGen, MatLit, MatLookup, Nil,
    PrimApp, Proj, Rec, ShapeError, Str, Term, Val, Var, VBool, VClosure,
    VCons, VFlt, VInt, VMat, VNil, VRec, VStr, atom_view, closure_view,
    cons_view, join_sel, match_binding_count, matrix_view, record_view,
)


def _join_env(a: Env, b: Env, lat: Lattice) -> Env:
    return join_sel(a, b, lat)


def env_lookup_bwd(raw_env: Env, name: str, v: Val) -> Env:
    """Demand ``v`` on the most recent binding of ``name``, holes elsewhere."""
    idx = raw_env.lookup_index(name)
    base = raw_env.bot_like()
    entries = base.entries[:idx] + ((name, v),) + base.entries[idx + 1:]
    return Env(entries)


def _atom_demand(raw: Val, ann: Ann) -> Val:
    if isinstance(raw, VInt):
        return VInt(raw.value, ann)
    if isinstance(raw, VFlt):
        return VFlt(raw.value, ann)
    if isinstance(raw, VStr):
        return VStr(raw.value, ann)
    if isinstance(raw, VBool):
        return VBool(raw.value, ann)
    raise ShapeError(f"expected an atomic raw value, got {raw!r}")


def raw_cont_after(w: Match, raw_elim):
    """The raw continuation left after ``raw_elim`` consumes one match."""
    from .syntax import ElimCons, ElimFalse, ElimNil, ElimTrue

    if isinstance(w, MVar):
        return raw_elim.cont
    if isinstance(w, MBool):
        if isinstance(raw_elim, ElimBool):
            return raw_elim.if_true if w.value else raw_elim.if_false
        if isinstance(raw_elim, (ElimTrue, ElimFalse)):
            return raw_elim.cont
    if isinstance(w, MNil):
        return raw_elim.if_nil if isinstance(raw_elim, ElimList) else raw_elim.cont
    if isinstance(w, MCons):
        head_elim = raw_elim.if_cons if isinstance(raw_elim, ElimList) else raw_elim.cont
        return raw_cont_after(w.tail, raw_cont_after(w.head, head_elim))
    if isinstance(w, MRec):
        cont = raw_elim.cont
        for _, sub_w in w.fields:
            cont = raw_cont_after(sub_w, cont)
        return cont
    raise ShapeError(f"match {w!r} does not fit eliminator {raw_elim!r}")


def match_bwd(w: Match, bindings: tuple, kappa, ambient: Ann, raw_elim, lat: Lattice):
    """Backward-match along ``w``: turn demand on the bindings and the
    taken continuation into demand on the matched value and eliminator.

    ``bindings`` is the slice of environment-demand entries introduced by
    this match (one (name, value) pair per variable bound, in order).
    The eliminator demand is shaped like ``raw_elim``, with holes on
    untaken branches.
    """
    from .syntax import ElimCons, ElimFalse, ElimNil, ElimTrue

    if isinstance(w, MVar):
        ((_, v),) = bindings
        return v, ElimVar(w.name, kappa)
    if isinstance(w, MBool):
        value = VBool(w.value, ambient)
        if isinstance(raw_elim, ElimBool):
            return value, (ElimBool(kappa, HOLE) if w.value else ElimBool(HOLE, kappa))
        return value, (ElimTrue(kappa) if w.value else ElimFalse(kappa))
    if isinstance(w, MNil):
        if isinstance(raw_elim, ElimList):
            return VNil(ambient), ElimList(kappa, HOLE)
        return VNil(ambient), ElimNil(kappa)
    if isinstance(w, MCons):
        head_raw = raw_elim.if_cons if isinstance(raw_elim, ElimList) else raw_elim.cont
        n_head = match_binding_count(w.head)
        head_bind, tail_bind = bindings[:n_head], bindings[n_head:]
        tail_raw = raw_cont_after(w.head, head_raw)
        v_tail, sigma = match_bwd(w.tail, tail_bind, kappa, ambient, tail_raw, lat)
        v_head, tau = match_bwd(w.head, head_bind, sigma, ambient, head_raw, lat)
        value = VCons(v_head, v_tail, ambient)
        if isinstance(raw_elim, ElimList):
            return value, ElimList(HOLE, tau)
        return value, ElimCons(tau)
    if isinstance(w, MRec):
        splits = []
        rest = bindings
        raw_cont = raw_elim.cont
        for name, sub_w in w.fields:
            n = match_binding_count(sub_w)
            splits.append((name, sub_w, rest[:n], raw_cont))
            rest = rest[n:]
            raw_cont = raw_cont_after(sub_w, raw_cont)
        cont = kappa
        values: dict[str, Val] = {}
        for name, sub_w, sub_bind, sub_raw in reversed(splits):
            values[name], cont = match_bwd(sub_w, sub_bind, cont, ambient, sub_raw, lat)
        fields = tuple((name, values[name]) for name, _ in w.fields)
        names = tuple(name for name, _ in w.fields)
        return VRec(fields, ambient), ElimRec(names, cont)
    raise TypeError(f"not a match witness: {w!r}")


def close_defs_bwd(rho2: Env, raw_env: Env, raw_defs: tuple, lat: Lattice):
    """Split demand on recursive-closure bindings into demand on the
    captured environment, the definition block and the ambient state.

    Hole bindings contribute nothing and are skipped outright.
    """
    env_out = raw_env.bot_like()
    ambient = lat.bot
    names = tuple(name for name, _ in raw_defs)
    h_out: list = [HOLE] * len(raw_defs)
    for i, (name, clo_sel) in enumerate(rho2.entries):
        if isinstance(clo_sel, Hole):
            continue
        if not isinstance(clo_sel, VClosure):
            raise ShapeError(f"expected a closure selection, got {clo_sel!r}")
        env_out = _join_env(env_out, clo_sel.env, lat)
        ambient = lat.join(ambient, clo_sel.ann)
        h_out[i] = _join_elim(h_out[i], clo_sel.elim, lat)
        for j, (_, sub) in enumerate(clo_sel.defs):
            if not isinstance(sub, Hole):
                h_out[j] = _join_elim(h_out[j], sub, lat)
    return env_out, tuple(zip(names, h_out)), ambient


def _join_elim(a, b, lat: Lattice):
    if isinstance(a, Hole):
        return b
    if isinstance(b, Hole):
        return a
    return join_sel(a, b, lat)


def _bwd_var(t: TVar, v, lat: Lattice):
    return env_lookup_bwd(t.env, t.name, v), Var(t.name), lat.bot


def _bwd_int(t: TInt, v, lat: Lattice):
    ann = atom_view(v, lat)
    return t.env.bot_like(), Int(t.value, ann), ann


def _bwd_flt(t: TFlt, v, lat: Lattice):
    ann = atom_view(v, lat)
    return t.env.bot_like(), Flt(t.value, ann), ann


def _bwd_str(t: TStr, v, lat: Lattice):
    ann = atom_view(v, lat)
    return t.env.bot_like(), Str(t.value, ann), ann


def _bwd_bool(t: TBool, v, lat: Lattice):
    ann = atom_view(v, lat)
    return t.env.bot_like(), Bool(t.value, ann), ann


def _bwd_record(t: TRecord, v, lat: Lattice):
    names = tuple(n for n, _ in t.fields)
    fields, ann = record_view(v, names, lat)
    env_out = t.env.bot_like()
    ambient = ann
    out_fields = []
    for name, sub in t.fields:
        rho, e, alpha = eval_bwd(sub, fields[name], lat)
        env_out = _join_env(env_out, rho, lat)
        ambient = lat.join(ambient, alpha)
        out_fields.append((name, e))
    return env_out, Rec(tuple(out_fields), ann), ambient


def _bwd_proj(t: TProj, v, lat: Lattice):
    names = tuple(n for n, _ in t.record_val.fields)
    fields = tuple(
        (name, v if name == t.field else HOLE) for name in names
    )
    # the record constructor itself is never demanded
    rec_demand = VRec(fields, lat.bot)
    rho, e, alpha = eval_bwd(t.record, rec_demand, lat)
    return rho, Proj(e, t.field), alpha


def _bwd_nil(t: TNil, v, lat: Lattice):
    ann = atom_view(v, lat)
    return t.env.bot_like(), Nil(ann), ann


def _bwd_cons(t: TCons, v, lat: Lattice):
    head, tail, ann = cons_view(v, lat)
    rho1, e1, a1 = eval_bwd(t.head, head, lat)
    rho2, e2, a2 = eval_bwd(t.tail, tail, lat)
    return (
        _join_env(rho1, rho2, lat),
        Cons(e1, e2, ann),
        lat.join(ann, lat.join(a1, a2)),
    )


def _bwd_lambda(t: TLambda, v, lat: Lattice):
    raw_clo = VClosure(t.env, (), t.elim)
    rho, _h, ann, sigma = closure_view(v, raw_clo, lat)
    return rho, Lam(sigma), ann


def _bwd_app(t: TApp, v, lat: Lattice):
    body_env, e_body, beta = eval_bwd(t.body, v, lat)
    n1 = len(t.closure.env)
    n2 = len(t.closure.defs)
    n3 = match_binding_count(t.match)
    if len(body_env) != n1 + n2 + n3:
        raise ShapeError("body environment demand does not fit the application")
    rho1 = Env(body_env.entries[:n1])
    rho2 = Env(body_env.entries[n1:n1 + n2])
    rho3 = body_env.entries[n1 + n2:]
    v_arg, sigma = match_bwd(t.match, rho3, e_body, beta, t.closure.elim, lat)
    rho_arg, e2, alpha = eval_bwd(t.arg, v_arg, lat)
    rho1b, h_demand, beta2 = close_defs_bwd(rho2, t.closure.env, t.closure.defs, lat)
    clo_demand = VClosure(
        _join_env(rho1, rho1b, lat), h_demand, sigma, ann=lat.join(beta, beta2)
    )
    rho_fn, e1, alpha2 = eval_bwd(t.fn, clo_demand, lat)
    return _join_env(rho_arg, rho_fn, lat), App(e1, e2), lat.join(alpha, alpha2)


def _bwd_primapp(t: TPrimApp, v, lat: Lattice):
    op = get_prim(t.op)
    ann = atom_view(v, lat)
    arg_anns = op.bwd_dep(t.arg_vals)(ann, lat)
    env_out = None
    ambient = lat.bot
    args = []
    for sub, raw, alpha in zip(t.args, t.arg_vals, arg_anns):
        rho, e, beta = eval_bwd(sub, _atom_demand(raw, alpha), lat)
        env_out = rho if env_out is None else _join_env(env_out, rho, lat)
        ambient = lat.join(ambient, beta)
        args.append(e)
    return env_out, PrimApp(t.op, tuple(args)), ambient


def _bwd_letrec(t: TLetRec, v, lat: Lattice):
    body_env, e_body, alpha = eval_bwd(t.body, v, lat)
    n = len(t.defs)
    outer = Env(body_env.entries[:len(body_env) - n])
    rho1 = Env(body_env.entries[len(body_env) - n:])
    rho2, h_demand, alpha2 = close_defs_bwd(rho1, t.env, t.defs, lat)
    return (
        _join_env(outer, rho2, lat),
        LetRec(h_demand, e_body),
        lat.join(alpha, alpha2),
    )


def _bwd_matgen(t: TMatGen, v, lat: Lattice):
    raw = VMat((), t.rows, t.cols)
    grid, beta_r, beta_c, ann = matrix_view(v, raw, lat)
    env_out = t.env.bot_like()
    ambient = ann
    body_demand = HOLE
    rows_idx_demand = beta_r
    cols_idx_demand = beta_c
    for i in range(t.rows):
        grid_row = grid[i]
        trace_row = t.cells[i]
        for j in range(t.cols):
            cell_sel = grid_row[j]
            if isinstance(cell_sel, Hole):
                continue
            rho, e, alpha = eval_bwd(trace_row[j], cell_sel, lat)
            outer = Env(rho.entries[:len(rho) - 2])
            (_, vi), (_, vj) = rho.entries[len(rho) - 2:]
            rows_idx_demand = lat.join(rows_idx_demand, atom_view(vi, lat))
            cols_idx_demand = lat.join(cols_idx_demand, atom_view(vj, lat))
            env_out = _join_env(env_out, outer, lat)
            ambient = lat.join(ambient, alpha)
            body_demand = join_sel(body_demand, e, lat)
    rho_r, e_rows, alpha_r = eval_bwd(t.rows_trace, VInt(t.rows, rows_idx_demand), lat)
    rho_c, e_cols, alpha_c = eval_bwd(t.cols_trace, VInt(t.cols, cols_idx_demand), lat)
    env_out = _join_env(_join_env(env_out, rho_r, lat), rho_c, lat)
    term = MatGen(e_rows, e_cols, t.var_i, t.var_j, body_demand, ann)
    return env_out, term, lat.join(ambient, lat.join(alpha_r, alpha_c))


def _bwd_matlit(t: TMatLit, v, lat: Lattice):
    m, n = len(t.cells), len(t.cells[0])
    raw = VMat((), m, n)
    grid, beta_r, beta_c, ann = matrix_view(v, raw, lat)
    lit_ann = lat.join(ann, lat.join(beta_r, beta_c))
    env_out = t.env.bot_like()
    ambient = lit_ann
    rows_out = []
    for i in range(m):
        row = []
        for j in range(n):
            rho, e, alpha = eval_bwd(t.cells[i][j], grid[i][j], lat)
            env_out = _join_env(env_out, rho, lat)
            ambient = lat.join(ambient, alpha)
            row.append(e)
        rows_out.append(tuple(row))
    return env_out, MatLit(tuple(rows_out), lit_ann), ambient


def _bwd_matlookup(t: TMatLookup, v, lat: Lattice):
    grid = tuple(
        tuple(v if (i, j) == (t.row, t.col) else HOLE for j in range(1, t.cols + 1))
        for i in range(1, t.rows + 1)
    )
    mat_demand = VMat(grid, t.rows, t.cols, lat.bot, lat.bot, lat.bot)
    rho1, e1, a1 = eval_bwd(t.matrix, mat_demand, lat)
    rho2, e2, a2 = eval_bwd(t.row_trace, VInt(t.row, lat.bot), lat)
    rho3, e3, a3 = eval_bwd(t.col_trace, VInt(t.col, lat.bot), lat)
    env_out = _join_env(_join_env(rho1, rho2, lat), rho3, lat)
    return env_out, MatLookup(e1, e2, e3), lat.join(a1, lat.join(a2, a3))


def _bwd_matdims(t: TMatDims, v, lat: Lattice):
    names = ("rows", "cols")
    fields, ann = record_view(v, names, lat)
    gr = atom_view(fields["rows"], lat)
    gc = atom_view(fields["cols"], lat)
    grid = tuple((HOLE,) * t.cols for _ in range(t.rows))
    mat_demand = VMat(grid, t.rows, t.cols, lat.join(gr, ann), lat.join(gc, ann), lat.bot)
    rho, e, alpha = eval_bwd(t.matrix, mat_demand, lat)
    return rho, MatDims(e), alpha


_BWD_DISPATCH = {
    TVar: _bwd_var, TInt: _bwd_int, TFlt: _bwd_flt, TStr: _bwd_str,
    TBool: _bwd_bool, TRecord: _bwd_record, TProj: _bwd_proj, TNil: _bwd_nil,
    TCons: _bwd_cons, TLambda: _bwd_lambda, TApp: _bwd_app,
    TPrimApp: _bwd_primapp, TLetRec: _bwd_letrec, TMatGen: _bwd_matgen,
    TMatLit: _bwd_matlit, TMatLookup: _bwd_matlookup, TMatDims: _bwd_matdims,
}


_ATOM_VAL_TYPES = (VInt, VFlt, VStr, VBool, VNil)


def eval_bwd(trace: Trace, v, lat: Lattice):
    """Backward-evaluate along ``trace``: (env demand, term demand, ambient).

    A bottom demand short-circuits: the lower adjoint maps bottom to
    bottom, so the result is the all-hole input demand (up to
    hole-equivalence) without walking the subtrace.  Unselected atoms are
    recognized as bottom too; composite selections are walked normally.
    """
    if isinstance(v, Hole) or (
        isinstance(v, _ATOM_VAL_TYPES) and v.ann == lat.bot
    ):
        return trace.env.bot_like(), HOLE, lat.bot
    handler = _BWD_DISPATCH.get(type(trace))
    if handler is None:
        raise TypeError(f"not a trace: {trace!r}")
    return handler(trace, v, lat)
