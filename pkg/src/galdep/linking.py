"""De Morgan dualization of the evaluation analyses, and output-to-output
linking over shared data.

The backward analysis answers "what is needed to compute this selection";
its De Morgan dual answers "what is needed *only* for it".  The forward
analysis answers "what can be computed from this selection"; its dual
answers "what cannot be computed without it".  Composing backward
analysis on one view with the dual forward analysis on another view links
selections between two outputs computed from the same data.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .bwd import eval_bwd
from .evaluator import Trace, eval_term
from .fwd import eval_fwd
from .lattice import Ann, BooleanLattice, Lattice
from .syntax import (
    Env, HOLE, LatticeNotBooleanError, ShapeError, Term, Val, erase,
    expand_hole, map_anns, neg_sel,
)


def _require_boolean(lat: Lattice) -> BooleanLattice:
    if not lat.is_boolean():
        raise LatticeNotBooleanError(
            "De Morgan dualization needs a lattice with complement")
    return lat  # type: ignore[return-value]


def fwd_dual(trace: Trace, env_sel: Env, term_sel: Term, ambient: Ann,
             raw_env: Env, raw_term: Term, lat: Lattice) -> Val:
    """Outputs that cannot be computed if the selected inputs are missing:
    complement the inputs, replay forwards, complement the result."""
    blat = _require_boolean(lat)
    env_neg = neg_sel(env_sel, raw_env, blat)
    term_neg = neg_sel(term_sel, raw_term, blat)
    out = eval_fwd(trace, env_neg, term_neg, blat.neg(ambient), blat)
    return map_anns(out, blat.neg)


def bwd_dual(trace: Trace, v_sel: Val, raw_env: Env, raw_term: Term,
             raw_result: Val, lat: Lattice) -> tuple[Env, Term, Ann]:
    """Inputs needed only for the selected outputs: complement the output,
    rewind, complement the resulting input selection."""
    blat = _require_boolean(lat)
    v_neg = neg_sel(v_sel, raw_result, blat)
    env_d, term_d, ambient_d = eval_bwd(trace, v_neg, blat)
    return (
        neg_sel(env_d, raw_env, blat),
        neg_sel(term_d, raw_term, blat),
        blat.neg(ambient_d),
    )


@dataclass
class View:
    """One program computed over the shared data: its core term, trace and
    raw result."""

    name: str
    term: Term
    trace: Trace
    result: Val
    env: Env  # full raw environment the view was evaluated under


@dataclass
class LinkSpec:
    """Shared dataset plus the views computed from it."""

    data: Env  # shared named raw values
    views: list[View] = field(default_factory=list)

    def view(self, key) -> View:
        if isinstance(key, int):
            return self.views[key]
        for v in self.views:
            if v.name == key:
                return v
        raise KeyError(f"no view named {key!r}")


def make_link_spec(data: Env, named_terms: list[tuple[str, Term]]) -> LinkSpec:
    """Evaluate each view term under the shared data environment."""
    spec = LinkSpec(data)
    for name, term in named_terms:
        trace, result = eval_term(data, term)
        spec.views.append(View(name, term, trace, result, data))
    return spec


@dataclass
class LinkResult:
    data_sel: Env  # demand restricted to the shared names
    other_sel: Val  # dependent selection on the other view's output
    full_env_sel: Env  # unrestricted environment demand of the source view


def restrict_to_shared(env_sel: Env, shared: Env) -> Env:
    """Keep demand only on the shared-data bindings (positional prefix)."""
    n = len(shared)
    return Env(env_sel.entries[:n])


def payload_only(sel, lat: Lattice):
    """Drop demand from structural positions, keeping only content atoms.

    Any output depends on the shape of the shared data (list spines,
    matrix dimensions), so dualizing structural demand would mark every
    output as dependent.  Containers are independent of their contents;
    linking relates the contents.
    """
    from .syntax import (
        Hole, VBool, VCons, VFlt, VInt, VMat, VNil, VRec, VStr,
    )

    if isinstance(sel, Hole):
        return sel
    if isinstance(sel, Env):
        return Env(tuple((n, payload_only(v, lat)) for n, v in sel.entries))
    if isinstance(sel, (VInt, VFlt, VStr, VBool)):
        return sel
    if isinstance(sel, VNil):
        return VNil(lat.bot)
    if isinstance(sel, VCons):
        return VCons(payload_only(sel.head, lat), payload_only(sel.tail, lat), lat.bot)
    if isinstance(sel, VRec):
        return VRec(tuple((n, payload_only(v, lat)) for n, v in sel.fields), lat.bot)
    if isinstance(sel, VMat):
        cells = tuple(tuple(payload_only(c, lat) for c in row) for row in sel.cells)
        return VMat(cells, sel.rows, sel.cols, lat.bot, lat.bot, lat.bot)
    raise ShapeError(f"shared data contains a non-data value: {sel!r}")


def link(spec: LinkSpec, from_view, to_view, sel: Val, lat: Lattice) -> LinkResult:
    """Backward from a selection on one view's output to the shared data,
    then dual-forward into the other view's output.

    Non-shared inputs (the other view's program text) stay fully available
    in the dualized pass, so only shared-data unavailability propagates.
    """
    blat = _require_boolean(lat)
    src = spec.view(from_view)
    dst = spec.view(to_view)
    env_d, _term_d, _amb = eval_bwd(src.trace, sel, blat)
    data_sel = restrict_to_shared(env_d, spec.data)
    data_expanded = payload_only(expand_hole(data_sel, spec.data, blat), blat)
    other = fwd_dual(
        dst.trace,
        data_expanded,
        HOLE,
        blat.bot,
        dst.env,
        dst.term,
        blat,
    )
    return LinkResult(data_sel=data_expanded, other_sel=other, full_env_sel=env_d)
