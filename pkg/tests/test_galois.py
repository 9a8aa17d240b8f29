"""The round-tripping guarantees as executable suites over the corpus."""

import pytest

from galdep import checks
from galdep.corpus import build_corpus
from galdep.syntax import count_positions, erase


@pytest.fixture(scope="module")
def corpus():
    return build_corpus()


def test_corpus_is_large_and_small_enough(corpus):
    assert len(corpus) >= 12
    for prog in corpus:
        n = count_positions(erase(prog.env)) + count_positions(erase(prog.term))
        assert n <= 12, f"{prog.name} has {n} selection positions"


def test_evaluation_galois_connection(corpus):
    suite = checks.check_eval_galois(corpus)
    assert suite.ok, suite.violations


def test_match_galois_connection():
    suite = checks.check_match_galois()
    assert suite.ok, suite.violations


def test_lookup_galois_connection():
    suite = checks.check_lookup_galois()
    assert suite.ok, suite.violations


def test_close_defs_galois_connection():
    suite = checks.check_close_defs_galois()
    assert suite.ok, suite.violations


def test_primitive_dependency_pairs():
    suite = checks.check_primitives()
    assert suite.ok, suite.violations


def test_dual_pair_galois_connection(corpus):
    suite = checks.check_dual_galois(corpus)
    assert suite.ok, suite.violations


def test_desugar_galois_connection():
    suite = checks.check_desugar_galois()
    assert suite.ok, suite.violations


def test_monotonicity(corpus):
    suite = checks.check_monotonicity(corpus)
    assert suite.cases >= 1000
    assert suite.ok, suite.violations


def test_idempotent_composites(corpus):
    suite = checks.check_idempotent_composites(corpus)
    assert suite.ok, suite.violations


def test_shape_preservation(corpus):
    suite = checks.check_shape_preservation(corpus)
    assert suite.ok, suite.violations


def test_hole_insensitivity(corpus):
    suite = checks.check_hole_insensitivity(corpus)
    assert suite.ok, suite.violations


def test_evaluation_galois_over_bitvec_lattice():
    """The analyses are lattice-generic: the adjunction holds over a
    two-bit product lattice as well (checked on a trimmed corpus since
    enumeration grows with 4^n)."""
    from galdep.corpus import CorpusProgram
    from galdep.lattice import BitVecLattice
    from galdep.syntax import App, Bool, ElimBool, Env, Int, Lam, PrimApp, Var, VInt

    programs = [
        CorpusProgram("bv-atom", Env(), Int(5)),
        CorpusProgram("bv-plus", Env((("x", VInt(2)),)), PrimApp("+", (Var("x"), Int(3)))),
        CorpusProgram("bv-times-zero", Env(), PrimApp("*", (Int(0), Int(7)))),
        CorpusProgram("bv-apply", Env(), App(Lam(ElimBool(Int(1), Int(2))), Bool(True))),
    ]
    suite = checks.check_eval_galois(programs, max_positions=9,
                                     lat=BitVecLattice(2))
    assert suite.cases > 0 and suite.ok, suite.violations
