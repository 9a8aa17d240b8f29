"""Executable property suites: every proved round-tripping statement
becomes an exhaustive (or randomized) check over the corpus.

Suites
------
* evaluation Galois connection, both inequalities, all enumerable
  selections;
* pattern-match, environment-lookup and recursive-binding Galois
  connections, standalone;
* primitive dependency pairs over a grid of argument tuples;
* the dualized pair (complemented forward/backward) on Boolean lattices;
* monotonicity of both analyses over randomized ordered pairs;
* idempotence of the composites and shape preservation;
* the desugaring Galois connection on a comprehension/clause corpus.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field

from .bwd import close_defs_bwd, env_lookup_bwd, eval_bwd, match_bwd
from .corpus import CorpusProgram, build_corpus
from .evaluator import close_defs, eval_term, match_value
from .fwd import close_defs_fwd, eval_fwd, match_fwd
from .lattice import Lattice, TWO
from .linking import bwd_dual, fwd_dual
from .primitives import REGISTRY, gc_check_prim
from .surface import desugar_bwd, desugar_fwd, parse
from .syntax import (
    Env, HOLE, count_positions, erase, expand_hole, hole_eq, join_sel,
    leq_sel, map_anns, neg_sel, with_positions, Term, VBool, VCons, VFlt,
    VInt, VNil, VStr,
)


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, message: str) -> None:
        if len(self.violations) < 20:
            self.violations.append(message)
        else:
            self.violations.append("... more omitted")


@dataclass
class Report:
    suites: list[SuiteResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(s.ok for s in self.suites)

    def summary(self) -> str:
        lines = []
        for s in self.suites:
            status = "ok " if s.ok else "FAIL"
            lines.append(f"{status} {s.name}: {s.cases} cases, {len(s.violations)} violations")
            for v in s.violations[:5]:
                lines.append(f"       {v}")
        return "\n".join(lines)


def _enum_bits(n: int, lat: Lattice = TWO):
    return itertools.product(tuple(lat.elements()), repeat=n)


def _prepare(prog: CorpusProgram):
    raw_env = erase(prog.env)
    raw_term = erase(prog.term)
    trace, result = eval_term(raw_env, raw_term)
    return raw_env, raw_term, trace, result


def _input_selections(raw_env, raw_term, lat: Lattice = TWO):
    ne = count_positions(raw_env)
    nt = count_positions(raw_term)
    for bits in _enum_bits(ne + nt + 1, lat):
        env_sel = with_positions(raw_env, list(bits[:ne]))
        term_sel = with_positions(raw_term, list(bits[ne:ne + nt]))
        yield env_sel, term_sel, bits[-1]


def check_eval_galois(programs=None, max_positions: int = 12,
                      lat: Lattice = TWO) -> SuiteResult:
    """Both Galois inequalities of (backward, forward) evaluation,
    exhaustively over all selections of every corpus program."""
    suite = SuiteResult("galois-evaluation")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, result = _prepare(prog)
        n_in = count_positions(raw_env) + count_positions(raw_term) + 1
        n_out = count_positions(result)
        budget = max_positions + 1 if len(lat.elements()) <= 2 else (max_positions + 1) // 2
        if max(n_in, n_out) > budget:
            suite.fail(f"{prog.name}: too many positions to enumerate ({n_in}/{n_out})")
            continue
        for env_sel, term_sel, amb in _input_selections(raw_env, raw_term, lat):
            suite.cases += 1
            out = eval_fwd(trace, env_sel, term_sel, amb, lat)
            env_b, term_b, amb_b = eval_bwd(trace, out, lat)
            if not (leq_sel(env_b, env_sel, lat) and leq_sel(term_b, term_sel, lat)
                    and lat.leq(amb_b, amb)):
                suite.fail(f"{prog.name}: bwd(fwd(in)) > in at {env_sel} {term_sel} {amb}")
        for bits in _enum_bits(n_out, lat):
            suite.cases += 1
            v_sel = with_positions(result, list(bits))
            env_b, term_b, amb_b = eval_bwd(trace, v_sel, lat)
            out2 = eval_fwd(trace, env_b, term_b, amb_b, lat)
            if not leq_sel(v_sel, out2, lat):
                suite.fail(f"{prog.name}: fwd(bwd(v)) < v at {v_sel}")
    return suite


def check_idempotent_composites(programs=None, max_positions: int = 12,
                                lat: Lattice = TWO) -> SuiteResult:
    """bwd.fwd.bwd = bwd and fwd.bwd.fwd = fwd (standard consequences of
    the adjunction), pointwise up to hole equivalence."""
    suite = SuiteResult("idempotent-composites")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, result = _prepare(prog)
        n_out = count_positions(result)
        if count_positions(raw_env) + count_positions(raw_term) + 1 > max_positions + 1 \
                or n_out > max_positions:
            continue
        for bits in _enum_bits(n_out, lat):
            suite.cases += 1
            v = with_positions(result, list(bits))
            b1 = eval_bwd(trace, v, lat)
            f1 = eval_fwd(trace, *b1, lat)
            b2 = eval_bwd(trace, f1, lat)
            if not (hole_eq(b1[0], b2[0], lat) and hole_eq(b1[1], b2[1], lat)
                    and b1[2] == b2[2]):
                suite.fail(f"{prog.name}: bwd.fwd.bwd deviates from bwd at {v}")
        for env_sel, term_sel, amb in _input_selections(raw_env, raw_term, lat):
            suite.cases += 1
            f1 = eval_fwd(trace, env_sel, term_sel, amb, lat)
            b1 = eval_bwd(trace, f1, lat)
            f2 = eval_fwd(trace, *b1, lat)
            if not hole_eq(f1, f2, lat):
                suite.fail(f"{prog.name}: fwd.bwd.fwd deviates from fwd")
    return suite


def check_shape_preservation(programs=None, max_positions: int = 12,
                             lat: Lattice = TWO) -> SuiteResult:
    """Erasing a forward result gives back the evaluation result."""
    suite = SuiteResult("shape-preservation")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, result = _prepare(prog)
        if count_positions(raw_env) + count_positions(raw_term) + 1 > max_positions + 1:
            continue
        for env_sel, term_sel, amb in _input_selections(raw_env, raw_term, lat):
            suite.cases += 1
            out = eval_fwd(trace, env_sel, term_sel, amb, lat)
            if erase(out, like=result) != result:
                suite.fail(f"{prog.name}: shape changed at {env_sel} {term_sel}")
    return suite


def _random_selection(rng, shape, lat: Lattice):
    n = count_positions(shape)
    return with_positions(shape, [rng.random() < 0.5 for _ in range(n)])


def check_monotonicity(programs=None, pairs_per_program: int = 80,
                       lat: Lattice = TWO, seed: int = 20260809) -> SuiteResult:
    """Randomized ordered input (and output) pairs map to ordered results."""
    rng = random.Random(seed)
    suite = SuiteResult("monotonicity")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, result = _prepare(prog)
        for _ in range(pairs_per_program):
            suite.cases += 1
            env_a = _random_selection(rng, raw_env, lat)
            term_a = _random_selection(rng, raw_term, lat)
            amb_a = rng.random() < 0.5
            env_b = join_sel(env_a, _random_selection(rng, raw_env, lat), lat)
            term_b = join_sel(term_a, _random_selection(rng, raw_term, lat), lat)
            amb_b = lat.join(amb_a, rng.random() < 0.5)
            out_a = eval_fwd(trace, env_a, term_a, amb_a, lat)
            out_b = eval_fwd(trace, env_b, term_b, amb_b, lat)
            if not leq_sel(out_a, out_b, lat):
                suite.fail(f"{prog.name}: forward analysis not monotone")
            v_a = _random_selection(rng, result, lat)
            v_b = join_sel(v_a, _random_selection(rng, result, lat), lat)
            ba = eval_bwd(trace, v_a, lat)
            bb = eval_bwd(trace, v_b, lat)
            if not (leq_sel(ba[0], bb[0], lat) and leq_sel(ba[1], bb[1], lat)
                    and lat.leq(ba[2], bb[2])):
                suite.fail(f"{prog.name}: backward analysis not monotone")
    return suite


def check_hole_insensitivity(programs=None, lat: Lattice = TWO,
                             seed: int = 7) -> SuiteResult:
    """Replacing all-bottom environment entries by holes changes the
    forward result only up to hole equivalence."""
    rng = random.Random(seed)
    suite = SuiteResult("hole-insensitivity")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, _ = _prepare(prog)
        for _ in range(30):
            suite.cases += 1
            env_sel = _random_selection(rng, raw_env, lat)
            term_sel = _random_selection(rng, raw_term, lat)
            sparse = Env(tuple(
                (name, HOLE if _is_all_bot(v, lat) else v)
                for name, v in env_sel.entries
            ))
            out_full = eval_fwd(trace, env_sel, term_sel, lat.top, lat)
            out_sparse = eval_fwd(trace, sparse, term_sel, lat.top, lat)
            if not hole_eq(out_full, out_sparse, lat):
                suite.fail(f"{prog.name}: hole substitution changed the result")
    return suite


def _is_all_bot(v, lat: Lattice) -> bool:
    from .syntax import _all_bot

    return _all_bot(v, lat)


def check_match_galois(lat: Lattice = TWO, max_positions: int = 10) -> SuiteResult:
    """Standalone Galois connection for pattern matching."""
    suite = SuiteResult("galois-match")
    from .syntax import ElimBool, ElimList, ElimRec, ElimVar, Int, Var, VRec

    instances = [
        (VBool(True), ElimBool(Int(1), Int(2))),
        (VCons(VInt(5), VNil()),
         ElimList(Int(0), ElimVar("x", ElimVar("xs", Var("x"))))),
        (VRec((("a", VInt(1)), ("b", VBool(False)))),
         ElimRec(("a", "b"), ElimVar("u", ElimBool(Int(1), Int(0))))),
        (VCons(VBool(True), VCons(VInt(2), VNil())),
         ElimList(Int(9), ElimBool(ElimVar("t", Var("t")), ElimVar("t", Int(0))))),
    ]
    for raw_v, raw_sigma in instances:
        w, raw_rho, raw_kappa = match_value(raw_v, raw_sigma)
        raw_rho_env = Env(raw_rho)
        nv, ns = count_positions(raw_v), count_positions(raw_sigma)
        nr = count_positions(raw_rho_env)
        nk = count_positions(raw_kappa) if isinstance(raw_kappa, Term) else count_positions(raw_kappa)
        if nv + ns > max_positions or nr + nk + 1 > max_positions + 1:
            suite.fail("instance too large to enumerate")
            continue
        # fwd(bwd) >= id on (rho, kappa, alpha)
        for bits in _enum_bits(nr + nk + 1):
            suite.cases += 1
            rho_sel = with_positions(raw_rho_env, list(bits[:nr]))
            kappa_sel = with_positions(raw_kappa, list(bits[nr:nr + nk]))
            amb = bits[-1]
            v_sel, sigma_sel = match_bwd(w, rho_sel.entries, kappa_sel, amb, raw_sigma, lat)
            rho2, kappa2, amb2 = match_fwd(w, v_sel, sigma_sel, lat)
            if not (leq_sel(rho_sel, Env(rho2), lat) and leq_sel(kappa_sel, kappa2, lat)
                    and lat.leq(amb, amb2)):
                suite.fail(f"match fwd(bwd) not inflationary at {bits}")
        # bwd(fwd) <= id on (v, sigma)
        for bits in _enum_bits(nv + ns):
            suite.cases += 1
            v_sel = with_positions(raw_v, list(bits[:nv]))
            sigma_sel = with_positions(raw_sigma, list(bits[nv:]))
            rho2, kappa2, amb2 = match_fwd(w, v_sel, sigma_sel, lat)
            v2, sigma2 = match_bwd(w, tuple(Env(tuple(rho2)).entries), kappa2, amb2,
                                   raw_sigma, lat)
            if not (leq_sel(v2, v_sel, lat) and leq_sel(sigma2, sigma_sel, lat)):
                suite.fail(f"match bwd(fwd) not deflationary at {bits}")
    return suite


def check_lookup_galois(lat: Lattice = TWO) -> SuiteResult:
    """Environment lookup: demand-then-read and read-then-demand."""
    suite = SuiteResult("galois-lookup")
    envs = [
        Env((("x", VInt(5)),)),
        Env((("x", VInt(1)), ("y", VBool(True)), ("x", VInt(2)))),
        Env((("a", VCons(VInt(1), VNil())), ("b", VStr("s")))),
    ]
    for raw_env in envs:
        for name in {n for n, _ in raw_env.entries}:
            raw_v = raw_env.lookup(name)
            nv = count_positions(raw_v)
            ne = count_positions(raw_env)
            for bits in _enum_bits(nv):
                suite.cases += 1
                v_sel = with_positions(raw_v, list(bits))
                env_sel = env_lookup_bwd(raw_env, name, v_sel)
                v2 = env_sel.lookup(name)
                if not leq_sel(v_sel, v2, lat):
                    suite.fail(f"lookup fwd(bwd) not inflationary for {name}")
            for bits in _enum_bits(ne):
                suite.cases += 1
                env_sel = with_positions(raw_env, list(bits))
                v_sel = env_sel.lookup(name)
                env2 = env_lookup_bwd(raw_env, name, v_sel)
                if not leq_sel(env2, env_sel, lat):
                    suite.fail(f"lookup bwd(fwd) not deflationary for {name}")
    return suite


def check_close_defs_galois(lat: Lattice = TWO, max_positions: int = 10) -> SuiteResult:
    """Recursive-binding closure: forward then backward and vice versa."""
    suite = SuiteResult("galois-close-defs")
    from .syntax import App, ElimVar, Int, Var

    cases = [
        (Env((("y", VInt(1)),)), (("f", ElimVar("x", Var("x"))),)),
        (Env(), (("f", ElimVar("x", App(Var("g"), Var("x")))),
                 ("g", ElimVar("x", Int(0))))),
        (Env((("z", VBool(True)),)),
         (("a", ElimVar("x", Var("z"))), ("b", ElimVar("x", Int(1))),
          ("c", ElimVar("x", Var("x"))))),
    ]
    for raw_env, raw_defs in cases:
        raw_out = close_defs(raw_env, raw_defs)
        ne = count_positions(raw_env)
        nh = sum(count_positions(e) for _, e in raw_defs)
        if ne + nh + 1 > max_positions + 1:
            suite.fail("close-defs instance too large")
            continue
        defs_shape = tuple(e for _, e in raw_defs)
        names = tuple(n for n, _ in raw_defs)
        for bits in _enum_bits(ne + nh + 1):
            suite.cases += 1
            env_sel = with_positions(raw_env, list(bits[:ne]))
            pos = ne
            defs_sel = []
            for _, raw_elim in raw_defs:
                k = count_positions(raw_elim)
                defs_sel.append(with_positions(raw_elim, list(bits[pos:pos + k])))
                pos += k
            amb = bits[-1]
            h_sel = tuple(zip(names, defs_sel))
            rho2 = close_defs_fwd(env_sel, h_sel, amb, lat)
            env_b, h_b, amb_b = close_defs_bwd(rho2, raw_env, raw_defs, lat)
            ok = leq_sel(env_b, env_sel, lat) and lat.leq(amb_b, amb) and all(
                leq_sel(eb, es, lat) for (_, eb), es in zip(h_b, defs_sel))
            if not ok:
                suite.fail("close-defs bwd(fwd) not deflationary")
        n2 = count_positions(raw_out)
        for bits in _enum_bits(n2):
            suite.cases += 1
            rho2_sel = with_positions(raw_out, list(bits))
            env_b, h_b, amb_b = close_defs_bwd(rho2_sel, raw_env, raw_defs, lat)
            rho2_again = close_defs_fwd(env_b, h_b, amb_b, lat)
            if not leq_sel(rho2_sel, rho2_again, lat):
                suite.fail("close-defs fwd(bwd) not inflationary")
    return suite


def check_primitives(lat: Lattice = TWO) -> SuiteResult:
    """Every registered primitive's dependency pair is a Galois connection
    on a grid of representative arguments."""
    suite = SuiteResult("galois-primitives")
    numeric_grid = [
        (VInt(7), VInt(0)), (VInt(0), VInt(7)), (VInt(0), VInt(0)),
        (VInt(3), VInt(4)), (VInt(-2), VInt(5)), (VFlt(0.5), VFlt(-1.5)),
    ]
    string_grid = [(VStr("Hydro"), VStr("Hydro")), (VStr("a"), VStr("b"))]
    for op in REGISTRY.values():
        if op.arity == 1:
            grids = [(VInt(3),), (VInt(0),), (VInt(-2),)]
        elif op.name == "++":
            grids = string_grid
        elif op.name in ("==", "/=", "<", "<=", ">", ">="):
            grids = numeric_grid + string_grid
        else:
            grids = numeric_grid
        for args in grids:
            if op.name in ("/", "quot", "mod") and getattr(args[-1], "value", 1) == 0:
                continue
            if op.name in ("quot", "mod") and any(isinstance(a, VFlt) for a in args):
                continue
            report = gc_check_prim(op, args, lat)
            suite.cases += report.cases
            if not report.ok:
                suite.fail(f"{op.name}{tuple(a.value for a in args)}: "
                           f"{len(report.violations)} violations")
    return suite


def check_dual_galois(programs=None, max_positions: int = 12,
                      lat: Lattice = TWO) -> SuiteResult:
    """The complemented pair is itself a Galois connection in the reverse
    direction, and the dual forward map preserves joins."""
    suite = SuiteResult("galois-dual")
    for prog in programs or build_corpus():
        raw_env, raw_term, trace, result = _prepare(prog)
        n_in = count_positions(raw_env) + count_positions(raw_term) + 1
        n_out = count_positions(result)
        if max(n_in, n_out) > max_positions + 1:
            continue
        # dual-fwd then dual-bwd deflates; dual-bwd then dual-fwd inflates
        for env_sel, term_sel, amb in _input_selections(raw_env, raw_term, lat):
            suite.cases += 1
            out = fwd_dual(trace, env_sel, term_sel, amb, raw_env, raw_term, lat)
            env_b, term_b, amb_b = bwd_dual(trace, out, raw_env, raw_term, result, lat)
            if not (leq_sel(env_sel, env_b, lat) and leq_sel(term_sel, term_b, lat)
                    and lat.leq(amb, amb_b)):
                suite.fail(f"{prog.name}: dual bwd(fwd) not inflationary")
        for bits in _enum_bits(n_out, lat):
            suite.cases += 1
            v_sel = with_positions(result, list(bits))
            env_b, term_b, amb_b = bwd_dual(trace, v_sel, raw_env, raw_term, result, lat)
            out2 = fwd_dual(trace, env_b, term_b, amb_b, raw_env, raw_term, lat)
            if not leq_sel(out2, v_sel, lat):
                suite.fail(f"{prog.name}: dual fwd(bwd) not deflationary")
        # join preservation of the dual forward map on sampled pairs
        rng = random.Random(99)
        for _ in range(40):
            suite.cases += 1
            env_a = _random_selection(rng, raw_env, lat)
            term_a = _random_selection(rng, raw_term, lat)
            env_b2 = _random_selection(rng, raw_env, lat)
            term_b2 = _random_selection(rng, raw_term, lat)
            amb_a = rng.random() < 0.5
            amb_b2 = rng.random() < 0.5
            out_a = fwd_dual(trace, env_a, term_a, amb_a, raw_env, raw_term, lat)
            out_b = fwd_dual(trace, env_b2, term_b2, amb_b2, raw_env, raw_term, lat)
            out_join = fwd_dual(trace, join_sel(env_a, env_b2, lat),
                                join_sel(term_a, term_b2, lat),
                                lat.join(amb_a, amb_b2), raw_env, raw_term, lat)
            if not hole_eq(out_join, join_sel(out_a, out_b, lat), lat):
                suite.fail(f"{prog.name}: dual forward map does not preserve joins")
    return suite


_DESUGAR_CORPUS = [
    "[x | x <- xs]",
    "[x + 1 | x <- xs, x < 2]",
    "[y | (y : ys) <- xs]",
    "[v | let v = 3]",
    "[1, 2, 3]",
    "if b then 1 else 2",
    "match b as { true -> 1; false -> 0 }",
    "(fun { [] y -> 0; (a : b) y -> y }) q r",
    "letrec f x = 1; f2 x = 2 in f 0",
    "let {a: u, b: w} = r in u",
    "<< 1, 2; 3, 4 >>",
    "<| 5 | (i, j) in (2, 2) |>",
    "[{p: x} | {p: x} <- xs]",
    "[x | [x, y] <- zs]",
]


def check_desugar_galois(sources=None, max_positions: int = 10,
                         lat: Lattice = TWO) -> SuiteResult:
    """Both inequalities of the desugaring Galois connection."""
    suite = SuiteResult("galois-desugar")
    for src in sources or _DESUGAR_CORPUS:
        raw_s = erase(parse(src))
        raw_e = desugar_fwd(raw_s)
        ns, ne = count_positions(raw_s), count_positions(raw_e)
        if max(ns, ne) > max_positions:
            suite.fail(f"{src!r}: too many positions ({ns}/{ne})")
            continue
        for bits in _enum_bits(ns):
            suite.cases += 1
            s_sel = with_positions(raw_s, list(bits))
            back = desugar_bwd(desugar_fwd(s_sel), raw_s, lat)
            if not leq_sel(back, s_sel, lat):
                suite.fail(f"{src!r}: bwd(fwd(s)) > s")
        for bits in _enum_bits(ne):
            suite.cases += 1
            e_sel = with_positions(raw_e, list(bits))
            again = desugar_fwd(desugar_bwd(e_sel, raw_s, lat))
            if not leq_sel(e_sel, again, lat):
                suite.fail(f"{src!r}: fwd(bwd(e)) < e")
    return suite


def run_all(max_positions: int = 12, monotonicity_pairs: int = 80) -> Report:
    programs = build_corpus()
    report = Report()
    report.suites.append(check_eval_galois(programs, max_positions))
    report.suites.append(check_match_galois())
    report.suites.append(check_lookup_galois())
    report.suites.append(check_close_defs_galois())
    report.suites.append(check_primitives())
    report.suites.append(check_dual_galois(programs, max_positions))
    report.suites.append(check_desugar_galois())
    report.suites.append(check_monotonicity(programs, monotonicity_pairs))
    report.suites.append(check_idempotent_composites(programs, max_positions))
    report.suites.append(check_shape_preservation(programs, max_positions))
    report.suites.append(check_hole_insensitivity(programs))
    return report
