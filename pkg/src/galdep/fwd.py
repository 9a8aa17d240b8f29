"""Forward dependency analysis: replay a trace, mapping input selections
(environment + term + ambient availability) to an output selection.

Selections may contain holes; whenever a rule needs a constructor the
hole is expanded on demand against the shape recorded in the trace.
Containers are independent of their contents: projection and lookup
preserve the selection of the extracted part and ignore the container's
own availability.
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
    Env, Hole, HOLE, ShapeError, Val, VBool, VClosure, VCons, VFlt, VInt,
    VMat, VNil, VRec, VStr, app_view, atom_view, closure_view, cons_view,
    cons_term_view, lam_view, letrec_view, match_binding_count, matdims_view,
    matgen_view, matlit_view, matlookup_view, matrix_view, primapp_view,
    proj_view, rec_term_view, record_view, term_atom_ann,
)


# --- forward match --------------------------------------------------------


def _taken_branch(sigma, w: Match):
    """Continuation selection at the branch ``w`` records as taken.

    The eliminator selection may be a hole, a total eliminator or one of
    the partial single-branch forms produced by clause elaboration.
    """
    from .syntax import ElimBool, ElimCons, ElimFalse, ElimList, ElimNil, ElimRec, ElimTrue, ElimVar

    if isinstance(sigma, Hole):
        return HOLE
    if isinstance(w, MVar) and isinstance(sigma, ElimVar):
        return sigma.cont
    if isinstance(w, MBool):
        if isinstance(sigma, ElimBool):
            return sigma.if_true if w.value else sigma.if_false
        if isinstance(sigma, ElimTrue) and w.value:
            return sigma.cont
        if isinstance(sigma, ElimFalse) and not w.value:
            return sigma.cont
    if isinstance(w, MNil):
        if isinstance(sigma, ElimList):
            return sigma.if_nil
        if isinstance(sigma, ElimNil):
            return sigma.cont
    if isinstance(w, MCons):
        if isinstance(sigma, ElimList):
            return sigma.if_cons
        if isinstance(sigma, ElimCons):
            return sigma.cont
    if isinstance(w, MRec) and isinstance(sigma, ElimRec):
        return sigma.cont
    raise ShapeError(f"eliminator selection {sigma!r} does not fit match {w!r}")


def match_fwd(w: Match, v: Val, sigma, lat: Lattice):
    """Forward-match along ``w``: transfer selections from the value into
    the bindings and from the eliminator into the taken continuation.

    Returns (bindings, continuation selection, availability), the latter
    being the meet of the selection states consumed from ``v``.
    """
    if isinstance(w, MVar):
        return ((w.name, v),), _taken_branch(sigma, w), lat.top
    if isinstance(w, (MBool, MNil)):
        return (), _taken_branch(sigma, w), atom_view(v, lat)
    if isinstance(w, MCons):
        head, tail, ann = cons_view(v, lat)
        rho1, tau, beta = match_fwd(w.head, head, _taken_branch(sigma, w), lat)
        rho2, kappa, beta2 = match_fwd(w.tail, tail, tau, lat)
        return rho1 + rho2, kappa, lat.meet(ann, lat.meet(beta, beta2))
    if isinstance(w, MRec):
        names = tuple(n for n, _ in w.fields)
        fields, ann = record_view(v, names, lat)
        cont = _taken_branch(sigma, w)
        bindings: tuple = ()
        avail = ann
        for name, sub_w in w.fields:
            rho, cont, beta = match_fwd(sub_w, fields[name], cont, lat)
            bindings += rho
            avail = lat.meet(avail, beta)
        return bindings, cont, avail
    raise TypeError(f"not a match witness: {w!r}")


def close_defs_fwd(env: Env, defs_sel, ambient: Ann, lat: Lattice) -> Env:
    """Each definition becomes a closure capturing the ambient availability."""
    return Env(tuple(
        (name, VClosure(env, tuple(defs_sel), elim, ann=ambient))
        for name, elim in defs_sel
    ))


# --- forward evaluation ---------------------------------------------------


def eval_fwd(trace: Trace, env: Env, term, ambient: Ann, lat: Lattice) -> Val:
    t = trace
    if isinstance(t, TVar):
        return env.lookup(t.name)  # ambient disregarded
    if isinstance(t, TInt):
        return VInt(t.value, lat.meet(ambient, term_atom_ann(term, lat)))
    if isinstance(t, TFlt):
        return VFlt(t.value, lat.meet(ambient, term_atom_ann(term, lat)))
    if isinstance(t, TStr):
        return VStr(t.value, lat.meet(ambient, term_atom_ann(term, lat)))
    if isinstance(t, TBool):
        return VBool(t.value, lat.meet(ambient, term_atom_ann(term, lat)))
    if isinstance(t, TRecord):
        names = tuple(n for n, _ in t.fields)
        sub_terms, ann = rec_term_view(term, names, lat)
        out = tuple(
            (name, eval_fwd(sub, env, sub_terms[name], ambient, lat))
            for name, sub in t.fields
        )
        return VRec(out, lat.meet(ambient, ann))
    if isinstance(t, TProj):
        rec_sel = eval_fwd(t.record, env, proj_view(term), ambient, lat)
        names = tuple(n for n, _ in t.record_val.fields)
        fields, _beta = record_view(rec_sel, names, lat)
        return fields[t.field]  # container availability disregarded
    if isinstance(t, TNil):
        return VNil(lat.meet(ambient, term_atom_ann(term, lat)))
    if isinstance(t, TCons):
        head_t, tail_t, ann = cons_term_view(term, lat)
        head = eval_fwd(t.head, env, head_t, ambient, lat)
        tail = eval_fwd(t.tail, env, tail_t, ambient, lat)
        return VCons(head, tail, lat.meet(ambient, ann))
    if isinstance(t, TLambda):
        sigma = lam_view(term)
        return VClosure(env, (), sigma, ann=ambient)
    if isinstance(t, TApp):
        fn_t, arg_t = app_view(term)
        clo_sel = eval_fwd(t.fn, env, fn_t, ambient, lat)
        rho1, h_sel, beta, sigma = closure_view(clo_sel, t.closure, lat)
        rho2 = close_defs_fwd(rho1, h_sel, beta, lat)
        v_arg = eval_fwd(t.arg, env, arg_t, ambient, lat)
        rho3, cont, beta2 = match_fwd(t.match, v_arg, sigma, lat)
        body_env = rho1.extend(rho2).extend(rho3)
        return eval_fwd(t.body, body_env, cont, lat.meet(beta, beta2), lat)
    if isinstance(t, TPrimApp):
        op = get_prim(t.op)
        arg_terms = primapp_view(term, op.arity)
        alphas = []
        for sub_t, sub_e in zip(t.args, arg_terms):
            v = eval_fwd(sub_t, env, sub_e, ambient, lat)
            alphas.append(atom_view(v, lat))
        out_ann = op.fwd_dep(t.arg_vals)(alphas, lat)
        raw = op.apply(t.arg_vals)
        return _annotate_atom(raw, out_ann)
    if isinstance(t, TLetRec):
        names = tuple(n for n, _ in t.defs)
        defs_sel, body_t = letrec_view(term, names)
        rho2 = close_defs_fwd(env, defs_sel, ambient, lat)
        return eval_fwd(t.body, env.extend(rho2), body_t, ambient, lat)
    if isinstance(t, TMatGen):
        rows_t, cols_t, body_t, ann = matgen_view(term, lat)
        rows_sel = eval_fwd(t.rows_trace, env, rows_t, ambient, lat)
        cols_sel = eval_fwd(t.cols_trace, env, cols_t, ambient, lat)
        beta_r = atom_view(rows_sel, lat)
        beta_c = atom_view(cols_sel, lat)
        grid = []
        for i in range(1, t.rows + 1):
            row = []
            for j in range(1, t.cols + 1):
                cell_env = env.bind(t.var_i, VInt(i, beta_r)).bind(t.var_j, VInt(j, beta_c))
                row.append(eval_fwd(t.cells[i - 1][j - 1], cell_env, body_t, ambient, lat))
            grid.append(tuple(row))
        return VMat(tuple(grid), t.rows, t.cols, beta_r, beta_c, lat.meet(ambient, ann))
    if isinstance(t, TMatLit):
        m, n = len(t.cells), len(t.cells[0])
        cell_terms, ann = matlit_view(term, m, n, lat)
        out_ann = lat.meet(ambient, ann)
        grid = tuple(
            tuple(
                eval_fwd(t.cells[i][j], env, cell_terms[i][j], ambient, lat)
                for j in range(n)
            )
            for i in range(m)
        )
        return VMat(grid, m, n, out_ann, out_ann, out_ann)
    if isinstance(t, TMatLookup):
        mat_t, _row_t, _col_t = matlookup_view(term)
        mat_sel = eval_fwd(t.matrix, env, mat_t, ambient, lat)
        raw = VMat((), t.rows, t.cols)
        grid, _br, _bc, _ann = matrix_view(mat_sel, raw, lat)
        return grid[t.row - 1][t.col - 1]  # container and dims disregarded
    if isinstance(t, TMatDims):
        mat_t = matdims_view(term)
        mat_sel = eval_fwd(t.matrix, env, mat_t, ambient, lat)
        raw = VMat((), t.rows, t.cols)
        _grid, beta_r, beta_c, _ann = matrix_view(mat_sel, raw, lat)
        return VRec(
            (("rows", VInt(t.rows, beta_r)), ("cols", VInt(t.cols, beta_c))),
            lat.meet(beta_r, beta_c),
        )
    raise TypeError(f"not a trace: {t!r}")


def _annotate_atom(raw: Val, ann: Ann) -> Val:
    if isinstance(raw, VInt):
        return VInt(raw.value, ann)
    if isinstance(raw, VFlt):
        return VFlt(raw.value, ann)
    if isinstance(raw, VStr):
        return VStr(raw.value, ann)
    if isinstance(raw, VBool):
        return VBool(raw.value, ann)
    raise ShapeError(f"primitive produced a non-atom: {raw!r}")
