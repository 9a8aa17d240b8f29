"""Session layer: a loaded program (or linked pair of view programs) with
its cached evaluation, exposing selection-level operations to the CLI and
the HTTP service.

A session is immutable after creation; every analysis replays the cached
trace, so repeated identical queries return identical results.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from .bwd import eval_bwd
from .evaluator import Trace, eval_term
from .fwd import eval_fwd
from .lattice import Lattice, lattice_from_spec
from .linking import LinkSpec, View, bwd_dual, fwd_dual, link
from .paths import SelectionDoc, apply_paths, selection_to_doc
from .surface import Program, load_program
from .surface.desugar import desugar_bwd
from .surface.desugar import desugar_fwd
from .surface.pretty import collect_highlights, render_marked_source
from .syntax import SyntaxNode
from .syntax import Env, HOLE, Term, Val, expand_hole
from .util import run_deep
from .wire import decode_data_env, encode_val




def apply_highlights(surface_raw, highlights: list[dict], lat: Lattice):
    """Rebuild a surface selection from highlight spans, then a core term
    selection via forward desugaring.  This is how a client replays a
    computed source layer back into a forward query."""
    by_span: dict[tuple, Any] = {}
    for h in highlights:
        key = (h.get("file", "<input>"), h["start"], h["end"])
        by_span[key] = h.get("ann", True)

    def rebuild(node):
        if isinstance(node, Env) or not isinstance(node, SyntaxNode):
            return node
        span = getattr(node, "span", None)
        ann_here = None
        if span is not None:
            ann_here = by_span.get((span.file, span.start, span.end))
        import dataclasses

        kwargs = {}
        for f in dataclasses.fields(node):
            v = getattr(node, f.name)
            if f.name in ("ann", "rows_ann", "cols_ann"):
                kwargs[f.name] = lat.from_json(ann_here) if ann_here is not None else lat.bot
            elif isinstance(v, (SyntaxNode, Env)):
                kwargs[f.name] = rebuild(v)
            elif isinstance(v, tuple):
                kwargs[f.name] = _rebuild_tuple(v)
            else:
                kwargs[f.name] = v
        return type(node)(**kwargs)

    def _rebuild_tuple(v):
        return tuple(
            rebuild(item) if isinstance(item, (SyntaxNode, Env))
            else (_rebuild_tuple(item) if isinstance(item, tuple) else item)
            for item in v
        )

    surface_sel = rebuild(surface_raw)
    return desugar_fwd(surface_sel)


@dataclass
class ViewState:
    name: str
    program: Program
    env: Env
    trace: Trace
    result: Val


@dataclass
class Session:
    lattice: Lattice
    views: list[ViewState]
    data: Env  # shared data (may be empty)

    def view(self, name) -> ViewState:
        if name is None:
            return self.views[0]
        for v in self.views:
            if v.name == name:
                return v
        if isinstance(name, int) or (isinstance(name, str) and name.isdigit()):
            index = int(name)
            if 1 <= index <= len(self.views):
                return self.views[index - 1]
        raise KeyError(f"no view named {name!r}")

    # -- selection plumbing -------------------------------------------------

    def output_selection(self, view: ViewState, doc: SelectionDoc) -> Val:
        return apply_paths(view.result, doc, target=None)

    def input_env_selection(self, view: ViewState, doc: SelectionDoc) -> Env:
        entries = []
        for name, raw in view.env.entries:
            if name in doc.targets():
                entries.append((name, apply_paths(raw, doc, target=name)))
            else:
                entries.append((name, HOLE))
        return Env(tuple(entries))

    # -- analyses ------------------------------------------------------------

    def bwd(self, doc: SelectionDoc, view_name: Optional[str] = None) -> dict:
        view = self.view(view_name)
        sel = self.output_selection(view, doc)
        env_d, term_d, ambient = run_deep(eval_bwd, view.trace, sel, self.lattice)
        return self._render_input(view, env_d, term_d, ambient)

    def fwd(self, doc: SelectionDoc, view_name: Optional[str] = None,
            ambient: Optional[Any] = None,
            highlights: Optional[list[dict]] = None) -> dict:
        view = self.view(view_name)
        env_sel = self.input_env_selection(view, doc)
        term_sel: Any = HOLE
        if highlights:
            term_sel = apply_highlights(view.program.surface, highlights, self.lattice)
        amb = self.lattice.top if ambient is None else ambient
        out = run_deep(eval_fwd, view.trace, env_sel, term_sel, amb, self.lattice)
        return self._render_output(view, out)

    def fwd_dual(self, doc: SelectionDoc, view_name: Optional[str] = None) -> dict:
        view = self.view(view_name)
        env_sel = self.input_env_selection(view, doc)
        out = run_deep(
            fwd_dual, view.trace, env_sel, HOLE, self.lattice.bot,
            view.env, view.program.core, self.lattice,
        )
        return self._render_output(view, out)

    def bwd_dual(self, doc: SelectionDoc, view_name: Optional[str] = None) -> dict:
        view = self.view(view_name)
        sel = self.output_selection(view, doc)
        env_d, term_d, ambient = run_deep(
            bwd_dual, view.trace, sel, view.env, view.program.core,
            view.result, self.lattice,
        )
        return self._render_input(view, env_d, term_d, ambient)

    def link(self, doc: SelectionDoc, from_view: str, to_view: Optional[str] = None) -> dict:
        if len(self.views) < 2:
            raise ValueError("linking needs at least two views")
        src = self.view(from_view)
        dst = self.view(to_view) if to_view else next(
            v for v in self.views if v.name != from_view)
        sel = self.output_selection(src, doc)
        spec = LinkSpec(self.data, [
            View(v.name, v.program.core, v.trace, v.result, v.env)
            for v in self.views
        ])
        result = run_deep(link, spec, src.name, dst.name, sel, self.lattice)
        data_sel = {
            name: encode_val(v, self.lattice)
            for name, v in result.data_sel.entries
        }
        return {
            "from": src.name,
            "to": dst.name,
            "data": data_sel,
            "other": encode_val(result.other_sel, self.lattice),
            "other_doc": selection_to_doc(result.other_sel, self.lattice).to_json(),
        }

    # -- rendering -----------------------------------------------------------

    def _render_input(self, view: ViewState, env_d: Env, term_d: Term, ambient) -> dict:
        lat = self.lattice
        env_expanded = expand_hole(env_d, view.env, lat)
        inputs = {}
        docs = []
        for name, v in env_expanded.entries:
            inputs[name] = encode_val(v, lat)
            sub = selection_to_doc(v, lat, target=name)
            docs.extend(sub.assignments)
        surface_sel = desugar_bwd(term_d, view.program.surface, lat)
        highlights = collect_highlights(surface_sel, lat)
        return {
            "env": inputs,
            "env_doc": SelectionDoc(docs, lat).to_json(),
            "ambient": lat.to_json(ambient),
            "highlights": [
                {"file": h.span.file, "start": h.span.start, "end": h.span.end,
                 "ann": lat.to_json(h.ann)}
                for h in highlights
            ],
            "marked_source": render_marked_source(
                view.program.source,
                [h for h in highlights if h.span.file == view.program.file],
            ),
        }

    def _render_output(self, view: ViewState, out: Val) -> dict:
        lat = self.lattice
        expanded = expand_hole(out, view.result, lat)
        return {
            "output": encode_val(expanded, lat),
            "output_doc": selection_to_doc(expanded, lat).to_json(),
        }

    def output_leq(self, doc_a: SelectionDoc, doc_b: SelectionDoc,
                   view_name: Optional[str] = None) -> bool:
        from .syntax import leq_sel

        view = self.view(view_name)
        a = self.output_selection(view, doc_a)
        b = self.output_selection(view, doc_b)
        return leq_sel(expand_hole(a, view.result, self.lattice),
                       expand_hole(b, view.result, self.lattice), self.lattice)

    def describe(self) -> dict:
        return {
            "lattice": self.lattice.name,
            "views": [
                {
                    "name": v.name,
                    "source": v.program.source,
                    "file": v.program.file,
                    "result": encode_val(v.result, self.lattice),
                }
                for v in self.views
            ],
            "data": {n: encode_val(v, self.lattice) for n, v in self.data.entries},
        }


# ---------------------------------------------------------------------------
# Session construction


def _eval_view(name: str, program: Program, env: Env) -> ViewState:
    trace, result = run_deep(eval_term, env, program.core)
    return ViewState(name, program, env, trace, result)


def open_session(source: str, file: str = "<input>", data: Optional[Env] = None,
                 lattice: Any = None) -> Session:
    lat = lattice if isinstance(lattice, Lattice) else lattice_from_spec(lattice)
    env = data or Env()
    program = load_program(source, file=file)
    return Session(lat, [_eval_view("main", program, env)], env)


def open_link_session(data: Env, views: list[tuple[str, str, str]],
                      lattice: Any = None) -> Session:
    """``views``: (name, source text, file name) triples."""
    lat = lattice if isinstance(lattice, Lattice) else lattice_from_spec(lattice)
    states = []
    for name, source, file in views:
        program = load_program(source, file=file)
        states.append(_eval_view(name, program, data))
    return Session(lat, states, data)


def load_manifest(path: Path, lattice: Any = None) -> Session:
    """Manifest: {"data": "file.json", "views": [{"name", "source"}, ...]}."""
    manifest = json.loads(path.read_text())
    base = path.parent
    data = Env()
    if manifest.get("data"):
        data = decode_data_env(json.loads((base / manifest["data"]).read_text()))
    views = []
    for item in manifest["views"]:
        src_path = base / item["source"]
        views.append((item["name"], src_path.read_text(), item["source"]))
    return open_link_session(data, views, lattice)


def sidecar_data(path: Path) -> Optional[Env]:
    """`FILE.fld` may ship with `FILE.data.json` holding its input bindings."""
    candidate = path.with_suffix(".data.json")
    if candidate.exists():
        return decode_data_env(json.loads(candidate.read_text()))
    return None


# ---------------------------------------------------------------------------
# Bundled demos


def demo_dir() -> Path:
    return Path(str(resources.files("galdep"))) / "demos"


def list_demos() -> list[dict]:
    out = []
    root = demo_dir()
    for path in sorted(root.glob("*.manifest.json")):
        out.append({"name": path.name.replace(".manifest.json", ""), "kind": "link"})
    for path in sorted(root.glob("*.fld")):
        out.append({"name": path.stem, "kind": "program"})
    return out


def open_demo(name: str, lattice: Any = None) -> Session:
    root = demo_dir()
    manifest = root / f"{name}.manifest.json"
    if manifest.exists():
        return load_manifest(manifest, lattice)
    program = root / f"{name}.fld"
    if program.exists():
        data = sidecar_data(program) or Env()
        return open_session(program.read_text(), file=program.name, data=data,
                            lattice=lattice)
    raise KeyError(f"no demo named {name!r}")
