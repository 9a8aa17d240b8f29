"""Registry of primitive operations.

Each primitive supplies, besides its evaluation function, a pair of
value-indexed dependency functions: a forward one mapping argument
selection states to a result selection state, and a backward one mapping
a result state to argument states.  For every concrete argument tuple the
pair must form a Galois connection; ``gc_check_prim`` verifies this
exhaustively over a finite lattice.

The default policy is meet/replicate, which is a Galois connection by
construction.  Multiplication is value-sensitive: when exactly one
argument is zero the result depends only on that argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

from .lattice import Ann, Lattice, TWO
from .syntax import Val, VBool, VFlt, VInt, VStr


class PrimError(ValueError):
    """Bad argument kind or arity for a primitive application."""


Num = (VInt, VFlt)


@dataclass
class PrimOp:
    name: str
    arity: int
    apply: Callable[[Sequence[Val]], Val]
    # fwd_dep(args)(alphas, lat) -> alpha; bwd_dep(args)(alpha, lat) -> alphas
    fwd_dep: Callable[[Sequence[Val]], Callable[[Sequence[Ann], Lattice], Ann]]
    bwd_dep: Callable[[Sequence[Val]], Callable[[Ann, Lattice], tuple[Ann, ...]]]


def default_fwd(args: Sequence[Val]):
    def fwd(alphas: Sequence[Ann], lat: Lattice) -> Ann:
        return lat.meet_all(alphas)

    return fwd


def default_bwd(args: Sequence[Val]):
    n = len(args)

    def bwd(alpha: Ann, lat: Lattice) -> tuple[Ann, ...]:
        return (alpha,) * n

    return bwd


def times_dep(args: Sequence[Val]):
    """Annihilator-aware dependency functions for multiplication.

    With exactly one zero argument the result is that zero regardless of
    the other argument, so both dependency directions ignore the nonzero
    side.  With both (or neither) zero the symmetric default applies.
    """
    zero = [_is_zero(a) for a in args]
    only = zero.index(True) if zero.count(True) == 1 else None

    def fwd(alphas: Sequence[Ann], lat: Lattice) -> Ann:
        if only is not None:
            return alphas[only]
        return lat.meet_all(alphas)

    def bwd(alpha: Ann, lat: Lattice) -> tuple[Ann, ...]:
        if only is not None:
            return tuple(alpha if i == only else lat.bot for i in range(len(args)))
        return (alpha,) * len(args)

    return fwd, bwd


def _is_zero(v: Val) -> bool:
    return isinstance(v, Num) and v.value == 0


def _num(v: Val, op: str) -> int | float:
    if not isinstance(v, Num):
        raise PrimError(f"{op}: expected a number, got {type(v).__name__}")
    return v.value


def _mk_num(x: int | float) -> Val:
    return VInt(x) if isinstance(x, int) else VFlt(x)


def _arith(op: str, fn: Callable) -> Callable[[Sequence[Val]], Val]:
    def apply(args: Sequence[Val]) -> Val:
        a, b = (_num(v, op) for v in args)
        return _mk_num(fn(a, b))

    return apply


def _div(args: Sequence[Val]) -> Val:
    a, b = (_num(v, "/") for v in args)
    if b == 0:
        raise PrimError("division by zero")
    return VFlt(a / b)


def _quot(args: Sequence[Val]) -> Val:
    a, b = (_num(v, "quot") for v in args)
    if b == 0:
        raise PrimError("division by zero")
    if not (isinstance(a, int) and isinstance(b, int)):
        raise PrimError("quot: expected integers")
    return VInt(a // b)


def _mod(args: Sequence[Val]) -> Val:
    a, b = (_num(v, "mod") for v in args)
    if b == 0:
        raise PrimError("division by zero")
    if not (isinstance(a, int) and isinstance(b, int)):
        raise PrimError("mod: expected integers")
    return VInt(a % b)


_COMPARABLE = (VInt, VFlt, VStr, VBool)


def _cmp_key(v: Val, op: str):
    if isinstance(v, (VInt, VFlt)):
        return ("num", v.value)
    if isinstance(v, VStr):
        return ("str", v.value)
    if isinstance(v, VBool):
        return ("bool", v.value)
    raise PrimError(f"{op}: cannot compare {type(v).__name__}")


def _compare(op: str, fn: Callable) -> Callable[[Sequence[Val]], Val]:
    def apply(args: Sequence[Val]) -> Val:
        ka, kb = (_cmp_key(v, op) for v in args)
        if ka[0] != kb[0]:
            raise PrimError(f"{op}: mismatched kinds {ka[0]} vs {kb[0]}")
        return VBool(fn(ka[1], kb[1]))

    return apply


def _concat(args: Sequence[Val]) -> Val:
    a, b = args
    if not (isinstance(a, VStr) and isinstance(b, VStr)):
        raise PrimError("++: expected strings")
    return VStr(a.value + b.value)


def _to_float(args: Sequence[Val]) -> Val:
    (a,) = args
    return VFlt(float(_num(a, "toFloat")))


def _times(args: Sequence[Val]) -> Val:
    a, b = (_num(v, "*") for v in args)
    return _mk_num(a * b)


def _times_fwd(args: Sequence[Val]):
    return times_dep(args)[0]


def _times_bwd(args: Sequence[Val]):
    return times_dep(args)[1]


REGISTRY: dict[str, PrimOp] = {}


def register(op: PrimOp) -> None:
    REGISTRY[op.name] = op


def get_prim(name: str) -> PrimOp:
    try:
        return REGISTRY[name]
    except KeyError:
        raise PrimError(f"unknown primitive: {name}") from None


def _register_default(name: str, arity: int, apply: Callable[[Sequence[Val]], Val]) -> None:
    register(PrimOp(name, arity, apply, default_fwd, default_bwd))


_register_default("+", 2, _arith("+", lambda a, b: a + b))
_register_default("-", 2, _arith("-", lambda a, b: a - b))
register(PrimOp("*", 2, _times, _times_fwd, _times_bwd))
_register_default("/", 2, _div)
_register_default("quot", 2, _quot)
_register_default("mod", 2, _mod)
_register_default("==", 2, _compare("==", lambda a, b: a == b))
_register_default("/=", 2, _compare("/=", lambda a, b: a != b))
_register_default("<", 2, _compare("<", lambda a, b: a < b))
_register_default("<=", 2, _compare("<=", lambda a, b: a <= b))
_register_default(">", 2, _compare(">", lambda a, b: a > b))
_register_default(">=", 2, _compare(">=", lambda a, b: a >= b))
_register_default("++", 2, _concat)
_register_default("toFloat", 1, _to_float)


@dataclass
class GCViolation:
    direction: str  # "fwd_bwd" (f(g(y)) >= y) or "bwd_fwd" (g(f(x)) <= x)
    point: tuple


@dataclass
class GCReport:
    op: str
    args: tuple
    cases: int
    violations: list[GCViolation]

    @property
    def ok(self) -> bool:
        return not self.violations


def gc_check_prim(op: PrimOp, args: Sequence[Val], lat: Lattice = TWO) -> GCReport:
    """Exhaustively verify both Galois inequalities of ``op``'s dependency
    pair at the given concrete arguments, over a finite lattice."""
    if len(args) != op.arity:
        raise PrimError(f"{op.name}: arity mismatch")
    fwd = op.fwd_dep(args)
    bwd = op.bwd_dep(args)
    elems = lat.elements()
    violations: list[GCViolation] = []
    cases = 0

    def leq_tuple(xs, ys):
        return all(lat.leq(x, y) for x, y in zip(xs, ys))

    # fwd(bwd(y)) >= y
    for y in elems:
        cases += 1
        if not lat.leq(y, fwd(bwd(y, lat), lat)):
            violations.append(GCViolation("fwd_bwd", (y,)))
    # bwd(fwd(xs)) <= xs
    import itertools

    for xs in itertools.product(elems, repeat=op.arity):
        cases += 1
        if not leq_tuple(bwd(fwd(xs, lat), lat), xs):
            violations.append(GCViolation("bwd_fwd", xs))
    return GCReport(op.name, tuple(args), cases, violations)


def registry_dump() -> list[dict]:
    return [{"name": op.name, "arity": op.arity} for op in REGISTRY.values()]
