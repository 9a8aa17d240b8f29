"""HTTP service exposing evaluation, slicing and linking to the UI.

Sessions are immutable after creation and cached in memory; repeated
identical queries return identical bodies.  Codes: 400 bad path or
shape, 404 unknown session, 422 parse or evaluation error.
"""

from __future__ import annotations

import threading
import uuid
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from .engine import Session, list_demos, open_demo, open_link_session, open_session
from .evaluator import EvalError
from .lattice import LatticeMismatchError
from .paths import PathError, parse_selection_doc
from .surface.parser import ParseError
from .syntax import Env, ShapeError
from .wire import WireError, decode_data_env


class ViewSource(BaseModel):
    name: str
    source: str


class SessionRequest(BaseModel):
    source: Optional[str] = None
    views: Optional[list[ViewSource]] = None
    example: Optional[str] = None
    data: Optional[dict] = None
    colors: Optional[int] = None


class SelectionRequest(BaseModel):
    selection: Any
    view: Optional[str] = None
    ambient: Optional[str] = None
    highlights: Optional[list] = None


class LeqRequest(BaseModel):
    a: Any
    b: Any
    view: Optional[str] = None


class LinkRequest(BaseModel):
    selection: Any
    view: str
    to: Optional[str] = None


class SessionStore:
    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def add(self, session: Session) -> str:
        sid = uuid.uuid4().hex[:12]
        with self._lock:
            self._sessions[sid] = session
        return sid

    def get(self, sid: str) -> Session:
        with self._lock:
            session = self._sessions.get(sid)
        if session is None:
            raise HTTPException(404, f"no session {sid}")
        return session


def create_app(static_dir: Optional[Path] = None) -> FastAPI:
    app = FastAPI(title="galdep", version="0.1.0")
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"],
    )
    store = SessionStore()

    def run(fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, EvalError) as e:
            raise HTTPException(422, getattr(e, "message", str(e))) from None
        except (PathError, ShapeError, WireError, LatticeMismatchError, ValueError) as e:
            raise HTTPException(400, str(e)) from None
        except KeyError as e:
            raise HTTPException(400, str(e)) from None

    @app.get("/examples")
    def examples() -> dict:
        return {"examples": list_demos()}

    @app.post("/session")
    def new_session(req: SessionRequest) -> dict:
        if req.example:
            session = run(open_demo, req.example, lattice=req.colors)
        elif req.views:
            data = Env()
            if req.data:
                data = run(decode_data_env, req.data)
            triples = [(v.name, v.source, f"{v.name}.fld") for v in req.views]
            session = run(open_link_session, data, triples, req.colors)
        elif req.source is not None:
            data = Env()
            if req.data:
                data = run(decode_data_env, req.data)
            session = run(open_session, req.source, data=data, lattice=req.colors)
        else:
            raise HTTPException(400, "need 'source', 'views' or 'example'")
        sid = store.add(session)
        return {"id": sid, **session.describe()}

    @app.post("/session/{sid}/bwd")
    def bwd(sid: str, req: SelectionRequest) -> dict:
        session = store.get(sid)
        doc = run(parse_selection_doc, req.selection, session.lattice)
        return run(session.bwd, doc, req.view)

    @app.post("/session/{sid}/fwd")
    def fwd(sid: str, req: SelectionRequest) -> dict:
        session = store.get(sid)
        doc = run(parse_selection_doc, req.selection, session.lattice)
        ambient = None
        if req.ambient is not None:
            ambient = {"tt": session.lattice.top, "ff": session.lattice.bot}[req.ambient]
        return run(session.fwd, doc, req.view, ambient, req.highlights)

    @app.post("/session/{sid}/fwd-dual")
    def fwd_dual(sid: str, req: SelectionRequest) -> dict:
        session = store.get(sid)
        doc = run(parse_selection_doc, req.selection, session.lattice)
        return run(session.fwd_dual, doc, req.view)

    @app.post("/session/{sid}/bwd-dual")
    def bwd_dual(sid: str, req: SelectionRequest) -> dict:
        session = store.get(sid)
        doc = run(parse_selection_doc, req.selection, session.lattice)
        return run(session.bwd_dual, doc, req.view)

    @app.post("/session/{sid}/leq")
    def leq(sid: str, req: LeqRequest) -> dict:
        session = store.get(sid)
        doc_a = run(parse_selection_doc, req.a, session.lattice)
        doc_b = run(parse_selection_doc, req.b, session.lattice)
        return {"leq": run(session.output_leq, doc_a, doc_b, req.view)}

    @app.post("/session/{sid}/link")
    def link(sid: str, req: LinkRequest) -> dict:
        session = store.get(sid)
        doc = run(parse_selection_doc, req.selection, session.lattice)
        return run(session.link, doc, req.view, req.to)

    ui_dir = static_dir
    if ui_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        ui_dir = candidate if candidate.exists() else None
    if ui_dir is not None and ui_dir.exists():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app
