"""Program assembly: parse a surface program, splice in the prelude and
the first-class operator wrappers, and desugar to a runnable core term.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from importlib import resources
from ..lattice import Lattice
from ..primitives import REGISTRY
from ..syntax import Span, Term, erase
from .ast import Clause, PVar, QGen, SLetRec, SListComp, SListEnum, SOp, SPrim, SurfaceTerm, SVar
from .desugar import desugar_bwd, desugar_fwd
from .parser import parse

PRELUDE_FILE = "<prelude>"


def _read_prelude_source() -> str:
    return resources.files("galdep.surface").joinpath("prelude.fld").read_text()


@functools.cache
def prelude_groups() -> tuple:
    """Prelude function groups plus curried wrappers for every primitive
    operator, so sections like ``(+)`` are ordinary variables."""
    tree = parse(_read_prelude_source(), file=PRELUDE_FILE)
    assert isinstance(tree, SLetRec)
    groups = list(tree.groups)
    span = Span(0, 0, PRELUDE_FILE)
    for name, op in REGISTRY.items():
        params = tuple(PVar(f"$x{i}", span=span) for i in range(op.arity))
        body = SPrim(name, tuple(SVar(p.name, span=span) for p in params), span=span)
        groups.append((name, (Clause(params, body, span=span),)))
    return tuple(groups)


def _referenced_names(node, acc: set) -> None:
    if isinstance(node, (SVar, SOp)):
        acc.add(node.name)
        return
    if isinstance(node, SListComp) and any(isinstance(q, QGen) for q in node.quals):
        acc.add("concatMap")
    elif isinstance(node, SListEnum):
        acc.add("enumFromTo")
    from ..syntax import children

    for c in children(node):
        _referenced_names(c, acc)


@functools.cache
def _prelude_dep_closure() -> dict[str, set[str]]:
    """Transitive prelude names needed by each prelude definition."""
    groups = dict(prelude_groups())
    direct: dict[str, set[str]] = {}
    for name, clauses in groups.items():
        acc: set = set()
        for c in clauses:
            _referenced_names(c.body, acc)
        direct[name] = acc & set(groups)
    closed: dict[str, set[str]] = {}
    for name in groups:
        need = {name}
        frontier = [name]
        while frontier:
            for dep in direct[frontier.pop()]:
                if dep not in need:
                    need.add(dep)
                    frontier.append(dep)
        closed[name] = need
    return closed


def needed_prelude_groups(user: SurfaceTerm) -> tuple:
    """The prelude restricted to definitions the program can reach; a
    smaller recursive block keeps environments (and traces) lean."""
    used: set = set()
    _referenced_names(user, used)
    closure = _prelude_dep_closure()
    keep: set = set()
    for name in used:
        if name in closure:
            keep |= closure[name]
    return tuple((n, cs) for n, cs in prelude_groups() if n in keep)


@dataclass
class Program:
    """A parsed and desugared program: the raw surface tree (prelude
    included), the raw core term, and the source text for rendering."""

    source: str
    file: str
    surface: SurfaceTerm  # raw (unit-lattice) surface tree
    core: Term  # raw core term

    def desugar_sel(self, surface_sel: SurfaceTerm) -> Term:
        return desugar_fwd(surface_sel)

    def desugar_bwd_sel(self, core_sel: Term, lat: Lattice) -> SurfaceTerm:
        return desugar_bwd(core_sel, self.surface, lat)


def load_program(source: str, file: str = "<input>", with_prelude: bool = True) -> Program:
    user = parse(source, file=file)
    tree: SurfaceTerm = user
    if with_prelude:
        groups = needed_prelude_groups(user)
        if groups:
            tree = SLetRec(groups, user, span=Span(0, len(source), file))
    raw_surface = erase(tree)
    core = desugar_fwd(raw_surface)
    return Program(source, file, raw_surface, core)
