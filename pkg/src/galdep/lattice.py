"""Selection-state lattices.

Every analysis in this package is generic over a bounded lattice of
selection states.  Three instances are provided:

* ``TWO`` -- the two-point Boolean algebra, carried by Python ``bool``
  (``True`` = top, ``False`` = bottom).
* ``BitVec(k)`` -- k independent Boolean bits (componentwise product),
  carried by ``tuple[bool, ...]``; used for simultaneous multi-colour
  selections.
* ``UNIT`` -- the trivial one-point lattice, carried by ``None``; raw
  (selection-free) syntax is the unit-lattice instantiation of the
  annotated syntax.

Elements are tagged by their Python type (plus width for bit vectors);
mixing lattices raises ``LatticeMismatchError`` instead of computing
nonsense.
"""

from __future__ import annotations

from typing import Any, Iterable

Ann = Any  # lattice element: bool, tuple[bool, ...] or None


class LatticeMismatchError(TypeError):
    """Operands do not belong to this lattice instance."""


class Lattice:
    """Bounded lattice of selection states."""

    name = "abstract"

    @property
    def top(self) -> Ann:
        raise NotImplementedError

    @property
    def bot(self) -> Ann:
        raise NotImplementedError

    def meet(self, a: Ann, b: Ann) -> Ann:
        raise NotImplementedError

    def join(self, a: Ann, b: Ann) -> Ann:
        raise NotImplementedError

    def leq(self, a: Ann, b: Ann) -> bool:
        return self.meet(a, b) == a

    def check(self, a: Ann) -> Ann:
        """Validate that ``a`` belongs to this lattice; return it."""
        raise NotImplementedError

    def is_boolean(self) -> bool:
        return False

    def meet_all(self, xs: Iterable[Ann]) -> Ann:
        out = self.top
        for x in xs:
            out = self.meet(out, x)
        return out

    def join_all(self, xs: Iterable[Ann]) -> Ann:
        out = self.bot
        for x in xs:
            out = self.join(out, x)
        return out

    def elements(self) -> list[Ann]:
        """All elements, smallest lattices only (used by exhaustive checks)."""
        raise NotImplementedError

    # JSON wire form (Two <-> bool, BitVec <-> list of bools)
    def to_json(self, a: Ann) -> Any:
        raise NotImplementedError

    def from_json(self, obj: Any) -> Ann:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<lattice {self.name}>"


class BooleanLattice(Lattice):
    """Lattice with an involutive complement (Boolean algebra)."""

    def neg(self, a: Ann) -> Ann:
        raise NotImplementedError

    def is_boolean(self) -> bool:
        return True


class TwoLattice(BooleanLattice):
    """The two-point Boolean algebra {tt, ff}."""

    name = "two"

    @property
    def top(self) -> bool:
        return True

    @property
    def bot(self) -> bool:
        return False

    def check(self, a: Ann) -> bool:
        if not isinstance(a, bool):
            raise LatticeMismatchError(f"not a two-point element: {a!r}")
        return a

    def meet(self, a: Ann, b: Ann) -> bool:
        return self.check(a) and self.check(b)

    def join(self, a: Ann, b: Ann) -> bool:
        return self.check(a) or self.check(b)

    def leq(self, a: Ann, b: Ann) -> bool:
        return self.check(b) or not self.check(a)

    def neg(self, a: Ann) -> bool:
        return not self.check(a)

    def elements(self) -> list[bool]:
        return [False, True]

    def to_json(self, a: Ann) -> bool:
        return self.check(a)

    def from_json(self, obj: Any) -> bool:
        if not isinstance(obj, bool):
            raise LatticeMismatchError(f"expected a JSON boolean, got {obj!r}")
        return obj


class BitVecLattice(BooleanLattice):
    """Componentwise product of ``width`` copies of the two-point lattice."""

    def __init__(self, width: int):
        if width < 1:
            raise ValueError("bit-vector width must be >= 1")
        self.width = width
        self.name = f"bitvec{width}"

    @property
    def top(self) -> tuple[bool, ...]:
        return (True,) * self.width

    @property
    def bot(self) -> tuple[bool, ...]:
        return (False,) * self.width

    def check(self, a: Ann) -> tuple[bool, ...]:
        if not (isinstance(a, tuple) and all(isinstance(x, bool) for x in a)):
            raise LatticeMismatchError(f"not a bit vector: {a!r}")
        if len(a) != self.width:
            raise LatticeMismatchError(
                f"bit-vector width mismatch: expected {self.width}, got {len(a)}"
            )
        return a

    def meet(self, a: Ann, b: Ann) -> tuple[bool, ...]:
        return tuple(x and y for x, y in zip(self.check(a), self.check(b)))

    def join(self, a: Ann, b: Ann) -> tuple[bool, ...]:
        return tuple(x or y for x, y in zip(self.check(a), self.check(b)))

    def leq(self, a: Ann, b: Ann) -> bool:
        return all(y or not x for x, y in zip(self.check(a), self.check(b)))

    def neg(self, a: Ann) -> tuple[bool, ...]:
        return tuple(not x for x in self.check(a))

    def elements(self) -> list[tuple[bool, ...]]:
        out: list[tuple[bool, ...]] = [()]
        for _ in range(self.width):
            out = [v + (b,) for v in out for b in (False, True)]
        return out

    def to_json(self, a: Ann) -> list[bool]:
        return list(self.check(a))

    def from_json(self, obj: Any) -> tuple[bool, ...]:
        if not (isinstance(obj, list) and all(isinstance(x, bool) for x in obj)):
            raise LatticeMismatchError(f"expected a JSON array of booleans, got {obj!r}")
        return self.check(tuple(obj))


class UnitLattice(Lattice):
    """The one-point lattice; annotations of raw (erased) syntax."""

    name = "unit"

    @property
    def top(self) -> None:
        return None

    @property
    def bot(self) -> None:
        return None

    def check(self, a: Ann) -> None:
        if a is not None:
            raise LatticeMismatchError(f"not the unit element: {a!r}")
        return None

    def meet(self, a: Ann, b: Ann) -> None:
        self.check(a)
        self.check(b)
        return None

    def join(self, a: Ann, b: Ann) -> None:
        self.check(a)
        self.check(b)
        return None

    def leq(self, a: Ann, b: Ann) -> bool:
        self.check(a)
        self.check(b)
        return True

    def elements(self) -> list[None]:
        return [None]

    def to_json(self, a: Ann) -> None:
        return self.check(a)

    def from_json(self, obj: Any) -> None:
        if obj is not None:
            raise LatticeMismatchError(f"expected null, got {obj!r}")
        return None


TWO = TwoLattice()
UNIT = UnitLattice()


def lattice_from_spec(spec: Any) -> Lattice:
    """Resolve a lattice from a wire/CLI description.

    ``None`` or ``"two"`` gives the two-point lattice; an integer ``k`` or
    ``"bitvec:k"`` gives a k-bit vector lattice (the "colors" parameter).
    """
    if spec is None or spec == "two":
        return TWO
    if spec == "unit":
        return UNIT
    if isinstance(spec, int):
        return BitVecLattice(spec)
    if isinstance(spec, str) and spec.startswith("bitvec"):
        tail = spec[len("bitvec"):].lstrip(":")
        return BitVecLattice(int(tail))
    raise ValueError(f"unknown lattice spec: {spec!r}")
