"""Big-step evaluation of raw terms, producing a value and a trace.

Traces are term-like proof trees of the evaluation; the forward and
backward analyses replay them.  Leaf trace nodes snapshot the raw
environment (by reference) because the backward analysis emits
environment demands of that shape; application nodes record the closure
actually applied so demand can be split positionally on the way back.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Optional

from .primitives import PrimError, REGISTRY as _PRIMS
from .syntax import (
    App, Bool, Cons, Elim, ElimBool, ElimCons, ElimFalse, ElimList, ElimNil,
    ElimRec, ElimTrue, ElimVar, Env, Flt, Hole, Int, Lam, LetRec, MatDims,
    MatGen, MatLit, MatLookup, Nil, PrimApp, Proj, Rec, Span, Str, Term, Val,
    Var, VBool, VCons, VClosure, VFlt, VInt, VMat, VNil, VRec, VStr,
)

if sys.getrecursionlimit() < 10000:
    sys.setrecursionlimit(10000)


class EvalError(Exception):
    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span


class MatchFailure(EvalError):
    pass


# ---------------------------------------------------------------------------
# Match witnesses


@dataclass(slots=True)
class Match:
    pass


@dataclass(slots=True)
class MVar(Match):
    name: str


@dataclass(slots=True)
class MBool(Match):
    value: bool


@dataclass(slots=True)
class MNil(Match):
    pass


@dataclass(slots=True)
class MCons(Match):
    head: Match
    tail: Match


@dataclass(slots=True)
class MRec(Match):
    fields: tuple[tuple[str, Match], ...]


# ---------------------------------------------------------------------------
# Traces


@dataclass(slots=True)
class Trace:
    pass


@dataclass(slots=True)
class TVar(Trace):
    name: str
    env: Env


@dataclass(slots=True)
class TInt(Trace):
    value: int
    env: Env


@dataclass(slots=True)
class TFlt(Trace):
    value: float
    env: Env


@dataclass(slots=True)
class TStr(Trace):
    value: str
    env: Env


@dataclass(slots=True)
class TBool(Trace):
    value: bool
    env: Env


@dataclass(slots=True)
class TRecord(Trace):
    fields: tuple[tuple[str, Trace], ...]
    env: Env


@dataclass(slots=True)
class TProj(Trace):
    record: Trace
    record_val: VRec
    field: str
    env: Env


@dataclass(slots=True)
class TNil(Trace):
    env: Env


@dataclass(slots=True)
class TCons(Trace):
    head: Trace
    tail: Trace
    env: Env


@dataclass(slots=True)
class TLambda(Trace):
    elim: Elim
    env: Env


@dataclass(slots=True)
class TApp(Trace):
    fn: Trace
    arg: Trace
    closure: VClosure  # raw closure that was applied
    match: Match
    body: Trace
    env: Env


@dataclass(slots=True)
class TPrimApp(Trace):
    op: str
    args: tuple[Trace, ...]
    arg_vals: tuple[Val, ...]  # concrete argument values, per the dependency functions
    env: Env


@dataclass(slots=True)
class TLetRec(Trace):
    defs: tuple[tuple[str, Elim], ...]
    env: Env
    body: Trace


@dataclass(slots=True)
class TMatGen(Trace):
    rows_trace: Trace
    cols_trace: Trace
    rows: int
    cols: int
    var_i: str
    var_j: str
    cells: tuple[tuple[Trace, ...], ...]
    env: Env


@dataclass(slots=True)
class TMatLit(Trace):
    cells: tuple[tuple[Trace, ...], ...]
    env: Env


@dataclass(slots=True)
class TMatLookup(Trace):
    matrix: Trace
    row_trace: Trace
    col_trace: Trace
    row: int
    col: int
    rows: int
    cols: int
    env: Env


@dataclass(slots=True)
class TMatDims(Trace):
    matrix: Trace
    rows: int
    cols: int
    env: Env


# ---------------------------------------------------------------------------
# Pattern matching


_MTRUE = MBool(True)
_MFALSE = MBool(False)
_MNIL = MNil()
_MVAR_CACHE: dict = {}


def _mvar(name: str) -> MVar:
    w = _MVAR_CACHE.get(name)
    if w is None:
        w = _MVAR_CACHE[name] = MVar(name)
    return w


def match_value(v: Val, elim: Elim) -> tuple[Match, tuple[tuple[str, Val], ...], object]:
    """Match ``v`` against ``elim``: witness, bindings, continuation.

    Cons matches eliminate the head then the tail; records eliminate their
    fields left to right through the nested continuation.
    """
    if isinstance(elim, ElimVar):
        return _mvar(elim.name), ((elim.name, v),), elim.cont
    if isinstance(elim, ElimBool):
        if isinstance(v, VBool):
            return (_MTRUE if v.value else _MFALSE), (), (
                elim.if_true if v.value else elim.if_false)
        raise MatchFailure(f"boolean eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimList):
        if isinstance(v, VNil):
            return _MNIL, (), elim.if_nil
        if isinstance(v, VCons):
            w_head, rho1, tau = match_value(v.head, _as_elim(elim.if_cons))
            w_tail, rho2, kappa = match_value(v.tail, _as_elim(tau))
            return MCons(w_head, w_tail), rho1 + rho2, kappa
        raise MatchFailure(f"list eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimTrue):
        if isinstance(v, VBool) and v.value:
            return _MTRUE, (), elim.cont
        raise MatchFailure(f"partial true eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimFalse):
        if isinstance(v, VBool) and not v.value:
            return _MFALSE, (), elim.cont
        raise MatchFailure(f"partial false eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimNil):
        if isinstance(v, VNil):
            return _MNIL, (), elim.cont
        raise MatchFailure(f"partial nil eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimCons):
        if isinstance(v, VCons):
            w_head, rho1, tau = match_value(v.head, _as_elim(elim.cont))
            w_tail, rho2, kappa = match_value(v.tail, _as_elim(tau))
            return MCons(w_head, w_tail), rho1 + rho2, kappa
        raise MatchFailure(f"partial cons eliminator cannot match {describe_val(v)}")
    if isinstance(elim, ElimRec):
        if not isinstance(v, VRec):
            raise MatchFailure(f"record eliminator cannot match {describe_val(v)}")
        have = dict(v.fields)
        if set(have) != set(elim.field_names):
            raise MatchFailure(
                f"record fields {sorted(have)} do not match pattern fields "
                f"{sorted(elim.field_names)}"
            )
        cont: object = elim.cont
        bindings: tuple[tuple[str, Val], ...] = ()
        ws: list[tuple[str, Match]] = []
        for name in elim.field_names:
            w, rho, cont = match_value(have[name], _as_elim(cont))
            bindings += rho
            ws.append((name, w))
        return MRec(tuple(ws)), bindings, cont
    raise MatchFailure(f"cannot match against eliminator {type(elim).__name__}")


def _as_elim(cont: object) -> Elim:
    if isinstance(cont, Elim):
        return cont
    raise MatchFailure("eliminator expected more structure than the value provides")


def close_defs(env: Env, defs: tuple[tuple[str, Elim], ...]) -> Env:
    """Bind each function name to a closure capturing ``env`` and ``defs``."""
    return Env(tuple((name, VClosure(env, defs, elim)) for name, elim in defs))


def close_defs_extended(env: Env, defs: tuple[tuple[str, Elim], ...]) -> Env:
    """``env`` extended with the recursive closures; memoized per (env,
    defs) pair since evaluation rebuilds it on every application."""
    memo = env._cd_memo
    if memo is None:
        memo = env._cd_memo = {}
    out = memo.get(id(defs))
    if out is None:
        out = env.extend(close_defs(env, defs))
        memo[id(defs)] = out
    return out


# ---------------------------------------------------------------------------
# Evaluation.  One monolithic recursion with branches ordered by observed
# frequency: variable lookups and applications dominate real traces, and
# the per-node cost here bounds the whole system.


def eval_term(env: Env, term: Term) -> tuple[Trace, Val]:
    cls = type(term)
    if cls is Var:
        name = term.name
        entries = env.entries
        for i in range(len(entries) - 1, -1, -1):
            e = entries[i]
            if e[0] == name:
                return TVar(name, env), e[1]
        raise EvalError(f"unbound variable: {name}", term.span)
    if cls is App:
        t_fn, v_fn = eval_term(env, term.fn)
        if type(v_fn) is not VClosure:
            raise EvalError(f"application of a non-function ({describe_val(v_fn)})", term.span)
        t_arg, v_arg = eval_term(env, term.arg)
        defs = v_fn.defs
        clo_env = v_fn.env
        if defs:
            memo = clo_env._cd_memo
            if memo is None:
                memo = clo_env._cd_memo = {}
            base_env = memo.get(id(defs))
            if base_env is None:
                base_env = Env(
                    clo_env.entries
                    + tuple((n, VClosure(clo_env, defs, el)) for n, el in defs)
                )
                memo[id(defs)] = base_env
        else:
            base_env = clo_env
        elim = v_fn.elim
        if type(elim) is ElimVar:
            w, rho3, cont = _mvar(elim.name), ((elim.name, v_arg),), elim.cont
        else:
            try:
                w, rho3, cont = match_value(v_arg, elim)
            except MatchFailure as e:
                raise MatchFailure(e.message, term.span) from None
        if not isinstance(cont, Term):
            raise EvalError("function applied to too few arguments", term.span)
        body_env = Env(base_env.entries + rho3) if rho3 else base_env
        t_body, v_out = eval_term(body_env, cont)
        return TApp(t_fn, t_arg, v_fn, w, t_body, env), v_out
    if cls is PrimApp:
        op = _PRIMS.get(term.op)
        if op is None:
            raise EvalError(f"unknown primitive: {term.op}", term.span)
        if len(term.args) != op.arity:
            raise EvalError(f"{term.op}: expected {op.arity} arguments", term.span)
        traces = []
        vals = []
        for sub in term.args:
            t, v = eval_term(env, sub)
            traces.append(t)
            vals.append(v)
        try:
            out = op.apply(vals)
        except PrimError as e:
            raise EvalError(str(e), term.span) from None
        return TPrimApp(term.op, tuple(traces), tuple(vals), env), out
    if cls is Lam:
        return TLambda(term.elim, env), VClosure(env, (), term.elim)
    if cls is Int:
        return TInt(term.value, env), VInt(term.value)
    if cls is Cons:
        t1, v1 = eval_term(env, term.head)
        t2, v2 = eval_term(env, term.tail)
        return TCons(t1, t2, env), VCons(v1, v2)
    if cls is Nil:
        return TNil(env), VNil()
    if cls is Bool:
        return TBool(term.value, env), VBool(term.value)
    if cls is Flt:
        return TFlt(term.value, env), VFlt(term.value)
    if cls is Str:
        return TStr(term.value, env), VStr(term.value)
    if cls is Proj:
        t, v = eval_term(env, term.record)
        if not isinstance(v, VRec):
            raise EvalError(f"projection from a non-record ({describe_val(v)})", term.span)
        for name, fv in v.fields:
            if name == term.field:
                return TProj(t, v, term.field, env), fv
        raise EvalError(f"record has no field '{term.field}'", term.span)
    if cls is Rec:
        traces = []
        vals = []
        for name, sub in term.fields:
            t, v = eval_term(env, sub)
            traces.append((name, t))
            vals.append((name, v))
        return TRecord(tuple(traces), env), VRec(tuple(vals))
    if cls is LetRec:
        defs = term.defs
        memo = env._cd_memo
        if memo is None:
            memo = env._cd_memo = {}
        body_env = memo.get(id(defs))
        if body_env is None:
            body_env = Env(
                env.entries + tuple((n, VClosure(env, defs, el)) for n, el in defs)
            )
            memo[id(defs)] = body_env
        t, v = eval_term(body_env, term.body)
        return TLetRec(defs, env, t), v
    if cls is MatGen:
        return _ev_matgen(env, term)
    if cls is MatLit:
        return _ev_matlit(env, term)
    if cls is MatLookup:
        return _ev_matlookup(env, term)
    if cls is MatDims:
        return _ev_matdims(env, term)
    raise EvalError(f"cannot evaluate {type(term).__name__}",
                    getattr(term, "span", None))


def close_defs_extended(env: Env, defs: tuple[tuple[str, Elim], ...]) -> Env:
    """``env`` extended with the recursive closures; memoized per (env,
    defs) pair since evaluation rebuilds it on every application."""
    memo = env._cd_memo
    if memo is None:
        memo = env._cd_memo = {}
    out = memo.get(id(defs))
    if out is None:
        out = env.extend(close_defs(env, defs))
        memo[id(defs)] = out
    return out


def _ev_matgen(env: Env, term: MatGen):
    t_rows, v_rows = eval_term(env, term.rows)
    t_cols, v_cols = eval_term(env, term.cols)
    m = _dim(v_rows, "rows", term.span)
    n = _dim(v_cols, "cols", term.span)
    if m < 1 or n < 1:
        raise EvalError("matrix dimensions must be positive", term.span)
    cell_traces = []
    cell_vals = []
    var_i, var_j, body = term.var_i, term.var_j, term.body
    for i in range(1, m + 1):
        row_traces = []
        row_vals = []
        vi = VInt(i)
        for j in range(1, n + 1):
            cell_env = Env(env.entries + ((var_i, vi), (var_j, VInt(j))))
            t, v = eval_term(cell_env, body)
            row_traces.append(t)
            row_vals.append(v)
        cell_traces.append(tuple(row_traces))
        cell_vals.append(tuple(row_vals))
    trace = TMatGen(t_rows, t_cols, m, n, var_i, var_j, tuple(cell_traces), env)
    return trace, VMat(tuple(cell_vals), m, n)


def _ev_matlit(env: Env, term: MatLit):
    m = len(term.cells)
    n = len(term.cells[0]) if m else 0
    if m == 0 or n == 0 or any(len(row) != n for row in term.cells):
        raise EvalError("matrix literal must be rectangular and non-empty", term.span)
    cell_traces = []
    cell_vals = []
    for row in term.cells:
        rts, rvs = [], []
        for sub in row:
            t, v = eval_term(env, sub)
            rts.append(t)
            rvs.append(v)
        cell_traces.append(tuple(rts))
        cell_vals.append(tuple(rvs))
    return TMatLit(tuple(cell_traces), env), VMat(tuple(cell_vals), m, n)


def _ev_matlookup(env: Env, term: MatLookup):
    t_mat, v_mat = eval_term(env, term.matrix)
    if not isinstance(v_mat, VMat):
        raise EvalError(f"matrix lookup on {describe_val(v_mat)}", term.span)
    t_i, v_i = eval_term(env, term.row)
    t_j, v_j = eval_term(env, term.col)
    i = _dim(v_i, "row index", term.span)
    j = _dim(v_j, "column index", term.span)
    if not (1 <= i <= v_mat.rows and 1 <= j <= v_mat.cols):
        raise EvalError(
            f"matrix index ({i},{j}) out of bounds for "
            f"{v_mat.rows}x{v_mat.cols}", term.span)
    trace = TMatLookup(t_mat, t_i, t_j, i, j, v_mat.rows, v_mat.cols, env)
    return trace, v_mat.cells[i - 1][j - 1]


def _ev_matdims(env: Env, term: MatDims):
    t_mat, v_mat = eval_term(env, term.matrix)
    if not isinstance(v_mat, VMat):
        raise EvalError(f"dims of {describe_val(v_mat)}", term.span)
    dims = VRec((("rows", VInt(v_mat.rows)), ("cols", VInt(v_mat.cols))))
    return TMatDims(t_mat, v_mat.rows, v_mat.cols, env), dims


def _dim(v: Val, what: str, span: Optional[Span]) -> int:
    if not isinstance(v, VInt):
        raise EvalError(f"{what} must be an integer, got {describe_val(v)}", span)
    return v.value


def describe_val(v: Val) -> str:
    names = {
        VInt: "an integer", VFlt: "a float", VStr: "a string",
        VBool: "a boolean", VNil: "a list", VCons: "a list",
        VRec: "a record", VMat: "a matrix", VClosure: "a function",
    }
    return names.get(type(v), type(v).__name__)


# ---------------------------------------------------------------------------
# Trace dumps (debugging and golden tests)


def trace_to_json(t: Trace) -> dict:
    if isinstance(t, TVar):
        return {"t": "var", "name": t.name}
    if isinstance(t, TInt):
        return {"t": "int", "value": t.value}
    if isinstance(t, TFlt):
        return {"t": "float", "value": t.value}
    if isinstance(t, TStr):
        return {"t": "str", "value": t.value}
    if isinstance(t, TBool):
        return {"t": "bool", "value": t.value}
    if isinstance(t, TRecord):
        return {"t": "record", "fields": {k: trace_to_json(v) for k, v in t.fields}}
    if isinstance(t, TProj):
        return {"t": "project", "of": trace_to_json(t.record), "field": t.field}
    if isinstance(t, TNil):
        return {"t": "nil"}
    if isinstance(t, TCons):
        return {"t": "cons", "head": trace_to_json(t.head), "tail": trace_to_json(t.tail)}
    if isinstance(t, TLambda):
        return {"t": "lambda"}
    if isinstance(t, TApp):
        return {
            "t": "app", "fn": trace_to_json(t.fn), "arg": trace_to_json(t.arg),
            "match": match_to_json(t.match), "body": trace_to_json(t.body),
        }
    if isinstance(t, TPrimApp):
        return {"t": "prim", "op": t.op, "args": [trace_to_json(a) for a in t.args]}
    if isinstance(t, TLetRec):
        return {"t": "letrec", "names": [n for n, _ in t.defs], "body": trace_to_json(t.body)}
    if isinstance(t, TMatGen):
        return {
            "t": "matgen", "rows": t.rows, "cols": t.cols,
            "cells": [[trace_to_json(c) for c in row] for row in t.cells],
        }
    if isinstance(t, TMatLit):
        return {"t": "matlit", "cells": [[trace_to_json(c) for c in row] for row in t.cells]}
    if isinstance(t, TMatLookup):
        return {"t": "matlookup", "of": trace_to_json(t.matrix), "at": [t.row, t.col]}
    if isinstance(t, TMatDims):
        return {"t": "matdims", "of": trace_to_json(t.matrix)}
    raise TypeError(f"not a trace: {t!r}")


def match_to_json(w: Match) -> object:
    if isinstance(w, MVar):
        return {"m": "var", "name": w.name}
    if isinstance(w, MBool):
        return {"m": "bool", "value": w.value}
    if isinstance(w, MNil):
        return {"m": "nil"}
    if isinstance(w, MCons):
        return {"m": "cons", "head": match_to_json(w.head), "tail": match_to_json(w.tail)}
    if isinstance(w, MRec):
        return {"m": "record", "fields": {k: match_to_json(v) for k, v in w.fields}}
    raise TypeError(f"not a match: {w!r}")


def trace_to_text(t: Trace, indent: int = 0) -> str:
    pad = "  " * indent
    j = trace_to_json(t)

    def walk(node: dict, depth: int) -> list[str]:
        prefix = "  " * depth
        kind = node["t"]
        header = prefix + kind
        scalar = {k: v for k, v in node.items()
                  if not isinstance(v, (dict, list)) and k != "t"}
        if scalar:
            header += " " + " ".join(f"{k}={v}" for k, v in scalar.items())
        lines = [header]
        for k, v in node.items():
            if isinstance(v, dict) and k != "match":
                lines.extend(walk(v, depth + 1))
            elif isinstance(v, list):
                for item in v:
                    if isinstance(item, dict):
                        lines.extend(walk(item, depth + 1))
                    elif isinstance(item, list):
                        for sub in item:
                            lines.extend(walk(sub, depth + 1))
        return lines

    return "\n".join(walk(j, indent))


def trace_size(t: Trace) -> int:
    j = [t]
    n = 0
    while j:
        node = j.pop()
        n += 1
        for f in node.__dataclass_fields__:
            v = getattr(node, f)
            if isinstance(v, Trace):
                j.append(v)
            elif isinstance(v, tuple):
                for item in v:
                    if isinstance(item, Trace):
                        j.append(item)
                    elif isinstance(item, tuple):
                        j.extend(x for x in item if isinstance(x, Trace))
    return n
