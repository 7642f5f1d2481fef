"""Subshifts over the line (finite type) and the plane (full shifts only).

Points of the subshift are handled as periodic configurations, which are
checkable in finite time. The group acts by ``(g x)_h = x_{h g}``, so ``g x``
lies in the identity cylinder ``[a]`` exactly when ``x_g = a``.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, NamedTuple, Sequence

from .groups import LINE, Family, FiniteSubset, GroupContext, group_for


class SubshiftError(ValueError):
    pass


class RealizationError(SubshiftError):
    pass


class BudgetExhausted(SubshiftError):
    pass


@dataclass(frozen=True)
class SubshiftSpec:
    alphabet: str
    group: GroupContext = LINE
    forbidden: tuple[str, ...] = ()
    safe_symbol: str | None = None

    def __post_init__(self):
        if len(set(self.alphabet)) != len(self.alphabet) or len(self.alphabet) < 2:
            raise SubshiftError("alphabet needs at least two distinct symbols")
        for w in self.forbidden:
            if not w or any(s not in self.alphabet for s in w):
                raise SubshiftError(f"bad forbidden word {w!r}")
        if self.forbidden and self.group.family is not Family.LINE:
            raise SubshiftError("forbidden words are only supported on the line")
        if self.safe_symbol is not None and self.safe_symbol not in self.alphabet:
            raise SubshiftError("safe symbol outside the alphabet")

    @property
    def safe(self) -> str:
        return self.safe_symbol if self.safe_symbol is not None else self.alphabet[0]

    @property
    def window(self) -> int:
        return max((len(w) for w in self.forbidden), default=1)

    def symbol_order(self) -> list[str]:
        return [self.safe] + [a for a in self.alphabet if a != self.safe]

    @classmethod
    def from_dict(cls, d: Mapping) -> SubshiftSpec:
        return cls(
            alphabet=str(d["alphabet"]),
            group=group_for(d.get("group", "IntegerLine")),
            forbidden=tuple(d.get("forbidden", ())),
            safe_symbol=d.get("safe_symbol"),
        )

    def to_dict(self) -> dict:
        d = {"alphabet": self.alphabet, "group": self.group.family.value, "forbidden": list(self.forbidden)}
        if self.safe_symbol is not None:
            d["safe_symbol"] = self.safe_symbol
        return d


def full_shift(alphabet: str = "01", group: GroupContext = LINE) -> SubshiftSpec:
    return SubshiftSpec(alphabet, group)


def golden_mean() -> SubshiftSpec:
    return SubshiftSpec("01", LINE, ("11",))


@dataclass(frozen=True)
class Cylinder:
    """Points carrying ``symbol`` at the identity coordinate."""

    symbol: str


def cylinder_distance(U0: Cylinder, U1: Cylinder) -> Fraction:
    """Shift-metric distance between two identity cylinders."""
    return Fraction(0) if U0.symbol == U1.symbol else Fraction(1)


@dataclass(frozen=True)
class Configuration:
    """A periodic point: ``x_g = cells[(g - origin) mod period]``."""

    group: GroupContext
    origin: tuple[int, ...]
    period: tuple[int, ...]
    cells: Mapping[tuple[int, ...], str] = field(hash=False)

    def __call__(self, g) -> str:
        c = self.group.coords(g)
        return self.cells[tuple((a - o) % p for a, o, p in zip(c, self.origin, self.period))]

    def shift(self, g) -> Configuration:
        """``g x``, i.e. ``h -> x_{h g}``."""
        c = self.group.coords(g)
        return Configuration(self.group, tuple(o - a for o, a in zip(self.origin, c)), self.period, self.cells)

    def pattern(self, F: Iterable) -> dict:
        return {g: self(g) for g in F}

    def key(self) -> tuple:
        """Canonical description; equal keys mean equal points."""
        o = tuple(a % p for a, p in zip(self.origin, self.period))
        items = tuple(sorted(self.cells.items()))
        return (self.group.family.value, o, self.period, items)


def _cyclic_admissible(word: str, forbidden: Sequence[str]) -> bool:
    p = len(word)
    for w in forbidden:
        reps = -(-(len(w) + p) // p)
        if w in word * reps:
            return False
    return True


def is_admissible(spec: SubshiftSpec, x: Configuration) -> bool:
    """Whether the periodic point contains no forbidden word."""
    if not spec.forbidden:
        return all(s in spec.alphabet for s in x.cells.values())
    word = "".join(x.cells[(i,)] for i in range(x.period[0]))
    return _cyclic_admissible(word, spec.forbidden)


def count_patterns(spec: SubshiftSpec, F: FiniteSubset) -> int:
    """Number of locally admissible patterns on ``F``: assignments with no
    forbidden word sitting entirely inside ``F``."""
    if not spec.forbidden:
        return len(spec.alphabet) ** len(F)
    L = spec.window
    positions = sorted(F)
    Fset = F.as_set
    by_len: dict[int, list[str]] = {}
    for w in spec.forbidden:
        by_len.setdefault(len(w), []).append(w)
    # state: symbols at positions of F within the last L-1 coordinates
    states: dict[tuple, int] = {(): 1}
    for p in positions:
        nxt: dict[tuple, int] = {}
        for state, count in states.items():
            recent = dict(state)
            for a in spec.alphabet:
                ok = True
                for ell, words in by_len.items():
                    start = p - ell + 1
                    if all(q in Fset for q in range(start, p)):
                        seg = "".join(recent[q] for q in range(start, p)) + a
                        if seg in words:
                            ok = False
                            break
                if not ok:
                    continue
                kept = tuple((q, s) for q, s in state if q > p - L + 1) + ((p, a),)
                nxt[kept] = nxt.get(kept, 0) + count
        states = nxt
    return sum(states.values())


class Distance(NamedTuple):
    value: Fraction
    exact: bool


def exact_radius(x: Configuration, y: Configuration) -> int:
    """Radius past which two periodic points cannot first differ."""
    L = max(math.lcm(a, b) for a, b in zip(x.period, y.period))
    return L // 2 + 1


def shift_metric(x: Configuration, y: Configuration, radius: int) -> Distance:
    """``2^-min{|g| : x_g != y_g}``, scanning the ball of the given radius.

    Exact when a difference shows up, or when the ball covers a joint period;
    otherwise ``2^-radius`` is returned as an upper bound flagged inexact.
    """
    if radius < 0:
        raise ValueError("radius must be non-negative")
    group = x.group
    for g in group.ball(radius):
        if x(g) != y(g):
            return Distance(Fraction(1, 2 ** group.length(g)), True)
    if radius >= exact_radius(x, y):
        return Distance(Fraction(0), True)
    return Distance(Fraction(1, 2**radius), False)


def exact_shift_distance(x: Configuration, y: Configuration) -> Fraction:
    d = shift_metric(x, y, exact_radius(x, y))
    assert d.exact
    return d.value


# -- realizing prescribed symbols -------------------------------------------


def _fill_cyclic(spec: SubshiftSpec, fixed: Mapping[int, str], p: int) -> str | None:
    """Cyclic word of length ``p`` agreeing with ``fixed`` and avoiding the
    forbidden words, preferring the safe symbol; None if there is none."""
    order = spec.symbol_order()
    forbidden = spec.forbidden
    L = spec.window
    word: list[str] = []

    def ok_prefix() -> bool:
        tail = "".join(word[-L:])
        return not any(tail.endswith(w) for w in forbidden)

    def rec(i: int) -> bool:
        if i == p:
            return _cyclic_admissible("".join(word), forbidden)
        choices = [fixed[i]] if i in fixed else order
        for a in choices:
            word.append(a)
            if ok_prefix() and rec(i + 1):
                return True
            word.pop()
        return False

    return "".join(word) if rec(0) else None


def realize(spec: SubshiftSpec, assignment: Mapping, max_pad: int | None = None) -> Configuration:
    """A periodic point of the subshift with prescribed symbols at finitely
    many coordinates (safe symbol elsewhere where possible)."""
    group = spec.group
    if not assignment:
        raise ValueError("empty assignment")
    for g, a in assignment.items():
        if a not in spec.alphabet:
            raise SubshiftError(f"symbol {a!r} not in alphabet")
    if group.family is Family.GRID:
        coords = [group.coords(g) for g in assignment]
        lo = tuple(min(c[i] for c in coords) for i in range(2))
        hi = tuple(max(c[i] for c in coords) for i in range(2))
        period = tuple(h - l + 1 for l, h in zip(lo, hi))
        cells = {(a, b): spec.safe for a in range(period[0]) for b in range(period[1])}
        for g, s in assignment.items():
            c = group.coords(g)
            cells[(c[0] - lo[0], c[1] - lo[1])] = s
        return Configuration(group, lo, period, cells)

    lo, hi = min(assignment), max(assignment)
    if not spec.forbidden:
        period = hi - lo + 1
        cells = {(i,): spec.safe for i in range(period)}
        for g, s in assignment.items():
            cells[(g - lo,)] = s
        return Configuration(group, (lo,), (period,), cells)

    L = spec.window
    max_pad = 4 * L if max_pad is None else max_pad
    for pad in range(max(L - 1, 1), max_pad + 1):
        start = lo - pad
        p = hi - lo + 1 + 2 * pad
        fixed = {g - start: s for g, s in assignment.items()}
        word = _fill_cyclic(spec, fixed, p)
        if word is not None:
            cells = {(i,): a for i, a in enumerate(word)}
            return Configuration(group, (start,), (p,), cells)
    raise RealizationError(_blocking_reason(spec, assignment))


def _blocking_reason(spec: SubshiftSpec, assignment: Mapping) -> str:
    for w in spec.forbidden:
        for s in assignment:
            if all(assignment.get(s + i) == a for i, a in enumerate(w)):
                return f"blocked by forbidden word {w!r} at coordinates {s}..{s + len(w) - 1}"
    return f"no admissible periodic completion avoiding {list(spec.forbidden)}"


def realizable(spec: SubshiftSpec, assignment: Mapping) -> bool:
    if not spec.forbidden:
        return all(a in spec.alphabet for a in assignment.values())
    try:
        realize(spec, assignment)
    except RealizationError:
        return False
    return True


def _assignment(J: Sequence, zeta: Sequence[int], U0: Cylinder, U1: Cylinder) -> dict:
    U = (U0, U1)
    return {g: U[b].symbol for g, b in zip(J, zeta)}


def realize_witness(spec: SubshiftSpec, J: Sequence, zeta: Sequence[int], U0: Cylinder, U1: Cylinder) -> Configuration:
    """A point ``x`` with ``g x`` in ``U_{zeta(g)}`` for every ``g`` in ``J``."""
    J = list(J)
    if len(J) != len(zeta):
        raise ValueError("zeta must be total on J")
    x = realize(spec, _assignment(J, zeta, U0, U1))
    assert is_admissible(spec, x)
    return x


# -- independence sets --------------------------------------------------------


@dataclass(frozen=True)
class IndependenceRecord:
    n: int | None
    F: FiniteSubset
    J: tuple
    delta: Fraction
    certified: bool
    optimal: bool


@dataclass
class IndependenceWitness:
    spec: SubshiftSpec
    U0: Cylinder
    U1: Cylinder
    records: list[IndependenceRecord] = field(default_factory=list)

    def __post_init__(self):
        if self.U0.symbol == self.U1.symbol:
            raise SubshiftError("cylinders must fix distinct symbols")

    def running_min(self) -> list[Fraction]:
        out, cur = [], None
        for r in self.records:
            cur = r.delta if cur is None else min(cur, r.delta)
            out.append(cur)
        return out

    def reverify(self) -> bool:
        """Re-derive a realizing point for every assignment of every
        certified record."""
        for r in self.records:
            if not r.certified:
                continue
            for zeta in itertools.product((0, 1), repeat=len(r.J)):
                x = realize_witness(self.spec, r.J, zeta, self.U0, self.U1)
                U = (self.U0, self.U1)
                if any(x(g) != U[b].symbol for g, b in zip(r.J, zeta)):
                    return False
        return True


class _Counter:
    def __init__(self, budget: int):
        self.left = budget

    def spend(self, k: int = 1) -> None:
        self.left -= k
        if self.left < 0:
            raise BudgetExhausted("certification budget exhausted")


def _certify(spec, J, U0, U1, counter: _Counter) -> bool:
    for zeta in itertools.product((0, 1), repeat=len(J)):
        counter.spend()
        if not realizable(spec, _assignment(J, zeta, U0, U1)):
            return False
    return True


def _cliques(order: list, adj: dict, size: int):
    """Cliques of the given size in lexicographic order of ``order``."""
    index = {g: i for i, g in enumerate(order)}

    def rec(chosen: list, candidates: list):
        if len(chosen) == size:
            yield tuple(chosen)
            return
        need = size - len(chosen)
        for pos, g in enumerate(candidates):
            if len(candidates) - pos < need:
                return
            rest = [h for h in candidates[pos + 1 :] if h in adj[g]]
            yield from rec(chosen + [g], rest)

    yield from rec([], sorted(order, key=index.get))


def find_independence_set(
    spec: SubshiftSpec,
    U0: Cylinder,
    U1: Cylinder,
    F: FiniteSubset,
    budget: int = 2**16,
    n: int | None = None,
) -> IndependenceRecord:
    """Largest ``J`` in ``F`` on which every 0/1 pattern of the two cylinders
    is realized by a point of the subshift.

    Candidates are cliques of the pairwise-independence graph, tried from the
    largest size down and certified by checking all ``2^|J|`` assignments.
    If the certification budget runs out the search turns greedy and the
    result is not claimed optimal.
    """
    if U0.symbol == U1.symbol:
        raise SubshiftError("cylinders must fix distinct symbols")
    elements = list(F)
    singles = [g for g in elements if _certify(spec, [g], U0, U1, _Counter(2))]
    adj = {g: set() for g in singles}
    for g, h in itertools.combinations(singles, 2):
        if _certify(spec, [g, h], U0, U1, _Counter(4)):
            adj[g].add(h)
            adj[h].add(g)

    counter = _Counter(budget)
    try:
        for size in range(len(singles), 0, -1):
            if 2**size > budget:
                raise BudgetExhausted("candidate larger than the budget")
            for J in _cliques(singles, adj, size):
                if _certify(spec, J, U0, U1, counter):
                    return IndependenceRecord(n, F, J, Fraction(len(J), len(F)), True, True)
    except BudgetExhausted:
        pass
    else:
        raise SubshiftError("no element of F is independent")

    # greedy fallback: certify each extension, stop when the budget runs out
    counter = _Counter(budget)
    J: list = []
    try:
        for g in singles:
            if all(h in adj[g] for h in J) and _certify(spec, J + [g], U0, U1, counter):
                J.append(g)
    except BudgetExhausted:
        pass
    if not J:
        raise BudgetExhausted("budget exhausted without any certified set")
    return IndependenceRecord(n, F, tuple(J), Fraction(len(J), len(F)), True, False)


def independence_witness(
    spec: SubshiftSpec,
    sets: Sequence[FiniteSubset],
    U0: Cylinder | None = None,
    U1: Cylinder | None = None,
    budget: int = 2**16,
    indices: Sequence[int] | None = None,
) -> IndependenceWitness:
    U0 = U0 or Cylinder(spec.alphabet[0])
    U1 = U1 or Cylinder(spec.alphabet[1])
    w = IndependenceWitness(spec, U0, U1)
    indices = indices or list(range(1, len(sets) + 1))
    for n, F in zip(indices, sets):
        w.records.append(find_independence_set(spec, U0, U1, F, budget, n=n))
    return w
