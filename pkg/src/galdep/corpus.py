"""Corpus of small programs for the exhaustive property suites.

Each program keeps its total selection-position count small enough that
every input and output selection over the two-point lattice can be
enumerated outright.  Comprehension programs carry their own miniature
recursive definitions instead of the full prelude so the position budget
holds.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .surface import parse
from .surface.desugar import desugar_fwd
from .syntax import (
    App, Bool, Cons, ElimBool, ElimList, ElimRec, ElimTrue, ElimVar, Env,
    Int, Lam, LetRec, MatDims, MatGen, MatLit, MatLookup, Nil, PrimApp,
    Proj, Rec, Str, Term, Var, VBool, VCons, VInt, VMat, VNil, VRec, VStr,
    erase,
)


@dataclass
class CorpusProgram:
    name: str
    env: Env
    term: Term
    surface_src: Optional[str] = None  # set for programs born in the surface syntax


def _surface(name: str, src: str, env: Env = Env()) -> CorpusProgram:
    term = desugar_fwd(erase(parse(src)))
    return CorpusProgram(name, env, term, surface_src=src)


_MINI_CONCAT = (
    "letrec append xs ys = match xs as { [] -> ys; (z : zs) -> z : append zs ys };"
    " concatMap f xs = match xs as { [] -> []; (y : ys) -> append (f y) (concatMap f ys) } in "
)


def build_corpus() -> list[CorpusProgram]:
    length_elim = ElimList(
        Int(0),
        ElimVar("x", ElimVar("xs", PrimApp("+", (Int(1), App(Var("length"), Var("xs")))))),
    )
    even = ElimVar("n", App(
        Lam(ElimBool(Bool(True), App(Var("odd"), PrimApp("-", (Var("n"), Int(1)))))),
        PrimApp("==", (Var("n"), Int(0)))))
    odd = ElimVar("n", App(
        Lam(ElimBool(Bool(False), App(Var("even"), PrimApp("-", (Var("n"), Int(1)))))),
        PrimApp("==", (Var("n"), Int(0)))))

    return [
        CorpusProgram("atom-int", Env(), Int(5)),
        CorpusProgram(
            "record-builder",
            Env((("v", VInt(7)),)),
            Rec((("name", Str("China")), ("out", Var("v"))), None),
        ),
        CorpusProgram(
            "cons-builder",
            Env((("x", VInt(2)),)),
            Cons(Int(1), Cons(Var("x"), Cons(Int(3), Nil(None), None), None), None),
        ),
        CorpusProgram(
            "shadowing",
            Env((("x", VInt(1)), ("x", VInt(2)))),
            App(Lam(ElimVar("x", PrimApp("+", (Var("x"), Var("x"))))), Int(10)),
        ),
        CorpusProgram(
            "letrec-length",
            Env((("l", VCons(VInt(7), VNil())),)),
            LetRec((("length", length_elim),), App(Var("length"), Var("l"))),
        ),
        CorpusProgram(
            "letrec-mutual",
            Env(),
            LetRec((("even", even), ("odd", odd)), App(Var("even"), Int(2))),
        ),
        CorpusProgram(
            "prim-times-zero",
            Env((("y", VInt(5)),)),
            Cons(PrimApp("*", (Int(0), Var("y"))),
                 Cons(PrimApp("*", (Var("y"), Int(0))), Nil(None), None), None),
        ),
        CorpusProgram("prim-times-both-zero", Env(), PrimApp("*", (Int(0), Int(0)))),
        CorpusProgram(
            "string-equality",
            Env((("s", VStr("Hydro")),)),
            App(Lam(ElimBool(Str("yes"), Str("no"))),
                PrimApp("==", (Var("s"), Str("Hydro")))),
        ),
        CorpusProgram(
            "record-match-project",
            Env((("r", VRec((("a", VInt(1)), ("b", VInt(2))))),)),
            PrimApp("+", (
                Proj(Var("r"), "a"),
                App(Lam(ElimRec(("a", "b"), ElimVar("u", ElimVar("w", Var("w"))))), Var("r")),
            )),
        ),
        CorpusProgram(
            "matrix-gen-lookup",
            Env((("m", VMat(((VInt(1), VInt(2)),), 1, 2)),)),
            MatLookup(MatGen(Int(1), Int(2), "i", "j",
                             PrimApp("*", (MatLookup(Var("m"), Var("i"), Var("j")), Int(2))),
                             None),
                      Int(1), Int(2)),
        ),
        CorpusProgram(
            "matrix-literal-dims",
            Env(),
            Proj(MatDims(MatLit(((Int(5), Int(6)),), None)), "cols"),
        ),
        CorpusProgram(
            "partial-clause",
            Env((("b", VBool(True)),)),
            App(Lam(ElimTrue(Int(1))), Var("b")),
        ),
        _surface(
            "comprehension-gen",
            _MINI_CONCAT + "[x * 2 | x <- xs]",
            Env((("xs", VCons(VInt(3), VNil())),)),
        ),
        _surface(
            "comprehension-guard",
            _MINI_CONCAT + "[x | x <- xs, x < 2]",
            Env((("xs", VCons(VInt(1), VNil())),)),
        ),
        _surface("comprehension-decl", "[y + 1 | let y = 2]"),
    ]
