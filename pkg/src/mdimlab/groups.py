"""Concrete amenable groups (the integers and the integer plane) and
finite-subset combinatorics: translates, Følner defects, the Shulman
temperedness condition and Ornstein-Weiss quotient tables.

Elements of the line are plain ``int``; elements of the plane are
``(int, int)`` tuples.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Iterable, Iterator, Sequence

Element = Hashable


class Family(str, enum.Enum):
    LINE = "IntegerLine"
    GRID = "IntegerGrid2D"


class Side(str, enum.Enum):
    LEFT = "Left"
    RIGHT = "Right"


@dataclass(frozen=True)
class GroupContext:
    """Element algebra of one group.

    Any other group can be supported by providing the same five methods
    (``identity``, ``compose``, ``invert``, ``length``, ``sort_key``).
    """

    family: Family

    @property
    def identity(self) -> Element:
        return 0 if self.family is Family.LINE else (0, 0)

    def compose(self, g: Element, h: Element) -> Element:
        if self.family is Family.LINE:
            return g + h
        return (g[0] + h[0], g[1] + h[1])

    def invert(self, g: Element) -> Element:
        if self.family is Family.LINE:
            return -g
        return (-g[0], -g[1])

    def length(self, g: Element) -> int:
        """Word length for the standard generators (max-norm on the plane)."""
        if self.family is Family.LINE:
            return abs(g)
        return max(abs(g[0]), abs(g[1]))

    def sort_key(self, g: Element):
        return g

    def coords(self, g: Element) -> tuple[int, ...]:
        return (g,) if self.family is Family.LINE else tuple(g)

    def from_coords(self, c: Sequence[int]) -> Element:
        return int(c[0]) if self.family is Family.LINE else (int(c[0]), int(c[1]))

    def ball(self, radius: int) -> list[Element]:
        """All elements of word length at most ``radius``, by length then order."""
        rng = range(-radius, radius + 1)
        if self.family is Family.LINE:
            pts = list(rng)
        else:
            pts = [(a, b) for a in rng for b in rng]
        return sorted(pts, key=lambda g: (self.length(g), self.sort_key(g)))

    def parse(self, value) -> Element:
        if self.family is Family.LINE:
            return int(value)
        a, b = value
        return (int(a), int(b))


LINE = GroupContext(Family.LINE)
GRID = GroupContext(Family.GRID)


def group_for(family: str | Family) -> GroupContext:
    return GroupContext(Family(family))


class FiniteSubset:
    """Sorted, duplicate-free finite set of group elements."""

    __slots__ = ("group", "elements", "_set")

    def __init__(self, group: GroupContext, elements: Iterable[Element] = ()):
        self.group = group
        self._set = frozenset(elements)
        self.elements = tuple(sorted(self._set, key=group.sort_key))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements)

    def __contains__(self, g) -> bool:
        return g in self._set

    def __eq__(self, other) -> bool:
        if isinstance(other, FiniteSubset):
            return self._set == other._set
        if isinstance(other, (set, frozenset)):
            return self._set == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._set)

    def __repr__(self) -> str:
        return f"FiniteSubset({list(self.elements)})"

    @property
    def as_set(self) -> frozenset:
        return self._set

    def __or__(self, other: FiniteSubset) -> FiniteSubset:
        return FiniteSubset(self.group, self._set | other.as_set)

    def __and__(self, other) -> FiniteSubset:
        other_set = other.as_set if isinstance(other, FiniteSubset) else frozenset(other)
        return FiniteSubset(self.group, self._set & other_set)

    def __sub__(self, other: FiniteSubset) -> FiniteSubset:
        return FiniteSubset(self.group, self._set - other.as_set)

    def __xor__(self, other: FiniteSubset) -> FiniteSubset:
        return FiniteSubset(self.group, self._set ^ other.as_set)

    def inverse(self) -> FiniteSubset:
        return FiniteSubset(self.group, (self.group.invert(g) for g in self))

    def product(self, other: FiniteSubset) -> FiniteSubset:
        """The product set ``self * other = {a b}``."""
        comp = self.group.compose
        return FiniteSubset(self.group, (comp(a, b) for a in self for b in other))

    def max_length(self) -> int:
        return max((self.group.length(g) for g in self), default=0)


def interval(a: int, b: int) -> FiniteSubset:
    """``{a, ..., b-1}`` in the integers."""
    return FiniteSubset(LINE, range(a, b))


def box(n: int, m: int | None = None) -> FiniteSubset:
    """``{0..n-1} x {0..m-1}`` in the integer plane."""
    m = n if m is None else m
    return FiniteSubset(GRID, ((a, b) for a in range(n) for b in range(m)))


def translate(F: FiniteSubset, g: Element, side: Side | str = Side.RIGHT) -> FiniteSubset:
    """``F g`` (right) or ``g F`` (left)."""
    comp = F.group.compose
    if Side(side) is Side.RIGHT:
        return FiniteSubset(F.group, (comp(f, g) for f in F))
    return FiniteSubset(F.group, (comp(g, f) for f in F))


def folner_defect(F: FiniteSubset, g: Element) -> Fraction:
    """``|F Δ gF| / |F|``."""
    if not len(F):
        raise ValueError("Følner defect needs a non-empty set")
    return Fraction(len(F ^ translate(F, g, Side.LEFT)), len(F))


def is_tempered(prefix: Sequence[FiniteSubset], M) -> tuple[bool, Fraction]:
    """Check ``|U_{k<=n} F_k^{-1} F_{n+1}| <= M |F_{n+1}|`` along a prefix.

    Returns whether every step passes and the worst ratio seen.
    """
    if len(prefix) < 2:
        raise ValueError("temperedness needs at least two sets")
    M = Fraction(M)
    group = prefix[0].group
    union_inverses: set = set()
    worst = Fraction(0)
    for n in range(len(prefix) - 1):
        union_inverses |= prefix[n].inverse().as_set
        nxt = prefix[n + 1]
        left = FiniteSubset(group, union_inverses).product(nxt)
        worst = max(worst, Fraction(len(left), len(nxt)))
    return worst <= M, worst


def ow_limit(f: Callable[[FiniteSubset], object], folner: Sequence[FiniteSubset]) -> list:
    """Tabulate ``f(F_n)/|F_n|`` for a non-negative set function ``f``.

    Exact (``Fraction``) when ``f`` returns integers or fractions, float
    otherwise.
    """
    out = []
    for F in folner:
        v = f(F)
        if v < 0:
            raise ValueError(f"set function returned a negative value {v!r}")
        if isinstance(v, (int, Fraction)):
            out.append(Fraction(v, len(F)))
        else:
            out.append(float(v) / len(F))
    return out


def log2_int(n: int) -> float:
    """``log2`` of a positive (possibly huge) integer."""
    if n <= 0:
        raise ValueError("log2 of a non-positive integer")
    shift = max(n.bit_length() - 64, 0)
    return math.log2(n >> shift) + shift
