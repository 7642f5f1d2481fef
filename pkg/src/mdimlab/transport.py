"""Exact 1-Wasserstein distances between finitely supported measures.

The primal transport program and the Kantorovich-Rubinstein dual are two
independent linear programs; on finite spaces their optima coincide, which
the tests check with zero tolerance.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Iterable, Mapping, NamedTuple, Sequence

from . import lp

PointId = Hashable


class TransportError(ValueError):
    pass


class FiniteMetric:
    """Symmetric rational distance table on a finite set of point ids."""

    def __init__(self, points: Sequence[PointId], table: Mapping | None = None, dist=None, check: bool = True):
        self.points = tuple(points)
        if len(set(self.points)) != len(self.points):
            raise TransportError("duplicate point ids")
        self._index = {p: i for i, p in enumerate(self.points)}
        n = len(self.points)
        self._d = [[Fraction(0)] * n for _ in range(n)]
        for i, j in itertools.combinations(range(n), 2):
            p, q = self.points[i], self.points[j]
            if dist is not None:
                v = dist(p, q)
            elif (p, q) in table:
                v = table[(p, q)]
            else:
                v = table[(q, p)]
            self._d[i][j] = self._d[j][i] = Fraction(v)
        if check:
            self.validate()

    def validate(self) -> None:
        n = len(self.points)
        d = self._d
        for i, j in itertools.combinations(range(n), 2):
            if d[i][j] <= 0:
                raise TransportError(f"distinct points {self.points[i]!r}, {self.points[j]!r} at distance {d[i][j]}")
        for i, j, k in itertools.permutations(range(n), 3):
            if d[i][k] > d[i][j] + d[j][k]:
                raise TransportError("triangle inequality fails")

    def __contains__(self, p) -> bool:
        return p in self._index

    def __call__(self, p: PointId, q: PointId) -> Fraction:
        try:
            return self._d[self._index[p]][self._index[q]]
        except KeyError as exc:
            raise TransportError(f"unknown point {exc.args[0]!r}") from None

    @property
    def diam(self) -> Fraction:
        return max((max(row) for row in self._d), default=Fraction(0))

    def set_distance(self, S: Iterable, T: Iterable) -> Fraction:
        S, T = list(S), list(T)
        if not S or not T:
            raise TransportError("distance between empty sets")
        return min(self(p, q) for p in S for q in T)

    def to_dict(self) -> dict:
        return {
            "points": list(self.points),
            "distances": [[str(v) for v in row] for row in self._d],
        }


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finitely supported probability measure; zero weights are dropped."""

    weights: Mapping[PointId, Fraction] = field(hash=False)

    def __post_init__(self):
        w = {p: Fraction(v) for p, v in self.weights.items() if Fraction(v) != 0}
        if any(v < 0 for v in w.values()):
            raise TransportError("negative weight")
        if sum(w.values(), Fraction(0)) != 1:
            raise TransportError("weights must sum to exactly 1")
        object.__setattr__(self, "weights", dict(sorted(w.items(), key=lambda kv: repr(kv[0]))))

    @classmethod
    def dirac(cls, p: PointId) -> DiscreteMeasure:
        return cls({p: Fraction(1)})

    @classmethod
    def uniform(cls, points: Iterable[PointId]) -> DiscreteMeasure:
        pts = list(points)
        return cls({p: Fraction(1, len(pts)) for p in pts})

    @property
    def support(self) -> frozenset:
        return frozenset(self.weights)

    def __getitem__(self, p) -> Fraction:
        return self.weights.get(p, Fraction(0))

    def mass(self, S: Iterable) -> Fraction:
        return sum((self[p] for p in set(S)), Fraction(0))

    def push(self, f: Mapping) -> DiscreteMeasure:
        out: dict = {}
        for p, v in self.weights.items():
            q = f[p]
            out[q] = out.get(q, Fraction(0)) + v
        return DiscreteMeasure(out)

    def __eq__(self, other) -> bool:
        return isinstance(other, DiscreteMeasure) and self.weights == other.weights

    def to_dict(self) -> dict:
        return {str(p): str(v) for p, v in self.weights.items()}


def mix(parts: Sequence[tuple[Fraction, DiscreteMeasure]]) -> DiscreteMeasure:
    """Convex combination ``sum lambda_i mu_i``."""
    out: dict = {}
    for lam, mu in parts:
        for p, v in mu.weights.items():
            out[p] = out.get(p, Fraction(0)) + Fraction(lam) * v
    return DiscreteMeasure(out)


class Plan(NamedTuple):
    source: PointId
    target: PointId
    mass: Fraction


class Transport(NamedTuple):
    value: Fraction
    plan: list[Plan]


def wasserstein1(mu: DiscreteMeasure, nu: DiscreteMeasure, metric) -> Transport:
    """Primal transport program ``min sum d(p,q) pi(p,q)`` with marginals
    ``mu`` and ``nu``, solved exactly."""
    S, T = list(mu.weights), list(nu.weights)
    pairs = [(p, q) for p in S for q in T]
    cost = [metric(p, q) for p, q in pairs]
    A_eq, b_eq = [], []
    for a, p in enumerate(S):
        A_eq.append({a * len(T) + b: 1 for b in range(len(T))})
        b_eq.append(mu.weights[p])
    # the last column constraint is implied by the others
    for b, q in enumerate(T[:-1]):
        A_eq.append({a * len(T) + b: 1 for a in range(len(S))})
        b_eq.append(nu.weights[q])
    res = lp.solve(cost, A_eq, b_eq)
    if not res.optimal:
        raise lp.LPError(f"transport program {res.status}")
    plan = [Plan(p, q, x) for (p, q), x in zip(pairs, res.x) if x]
    return Transport(res.value, plan)


def kr_dual(mu: DiscreteMeasure, nu: DiscreteMeasure, metric) -> Fraction:
    """``max sum f(p)(mu(p) - nu(p))`` over 1-Lipschitz ``f`` on the joint
    support, as an LP with ``f = u - v``, ``u, v >= 0``."""
    return kr_potential(mu, nu, metric)[0]


def kr_potential(mu: DiscreteMeasure, nu: DiscreteMeasure, metric) -> tuple[Fraction, dict]:
    """Dual value together with an optimal 1-Lipschitz potential."""
    pts = sorted(mu.support | nu.support, key=repr)
    n = len(pts)
    diff = [mu[p] - nu[p] for p in pts]
    c = diff + [-v for v in diff]
    A_ub, b_ub = [], []
    for i, j in itertools.permutations(range(n), 2):
        A_ub.append({i: 1, n + i: -1, j: -1, n + j: 1})
        b_ub.append(metric(pts[i], pts[j]))
    # pin f at the first point; the objective is shift invariant
    res = lp.solve(c, [{0: 1}, {n: 1}], [0, 0], A_ub, b_ub, maximize=True)
    if not res.optimal:
        raise lp.LPError(f"dual program {res.status}")
    return res.value, {p: res.x[i] - res.x[n + i] for i, p in enumerate(pts)}


@dataclass
class ActionTable:
    """For each ``g`` in ``F``: where each point goes and the metric on the images."""

    elements: tuple
    images: dict  # g -> {point id -> image id}
    metrics: dict  # g -> metric on image ids

    def __post_init__(self):
        self.elements = tuple(self.elements)
        for g in self.elements:
            if g not in self.images or g not in self.metrics:
                raise TransportError(f"no action data for {g!r}")

    def push(self, g, mu: DiscreteMeasure) -> DiscreteMeasure:
        img = self.images[g]
        missing = [p for p in mu.support if p not in img]
        if missing:
            raise TransportError(f"missing image of {missing[0]!r} under {g!r}")
        return mu.push(img)

    @property
    def diam(self) -> Fraction:
        return max(self.metrics[g].diam for g in self.elements)

    @classmethod
    def from_configurations(cls, points: Mapping, F: Iterable, group=None) -> ActionTable:
        """Action of ``F`` on named periodic points, with exact shift-metric
        tables on the shifted points."""
        from .symbolic import exact_shift_distance

        F = list(F)
        images, metrics = {}, {}
        for g in F:
            shifted = {p: x.shift(g) for p, x in points.items()}
            # points whose shifts coincide get one image id
            ids: dict = {}
            img = {}
            for p in points:
                key = shifted[p].key()
                canon = ids.setdefault(key, p)
                img[p] = canon
            reps = sorted(set(img.values()), key=repr)
            images[g] = img
            metrics[g] = FiniteMetric(
                reps, dist=lambda a, b, s=shifted: exact_shift_distance(s[a], s[b]), check=False
            )
        return cls(tuple(F), images, metrics)


def dynamical_wasserstein(mu: DiscreteMeasure, nu: DiscreteMeasure, action: ActionTable) -> tuple[Fraction, object]:
    """``max_{g in F} W(g mu, g nu)``; the first maximizing ``g`` in element order."""
    best, arg = None, None
    for g in action.elements:
        v = wasserstein1(action.push(g, mu), action.push(g, nu), action.metrics[g]).value
        if best is None or v > best:
            best, arg = v, g
    return best, arg


def support_union(measures: Iterable[DiscreteMeasure]) -> frozenset:
    out: set = set()
    for mu in measures:
        out |= mu.support
    return frozenset(out)


class SeparationCheck(NamedTuple):
    lhs: Fraction
    rhs: Fraction
    ok: bool


def separation_lower_bound_check(mu: DiscreteMeasure, S: Iterable, nu: DiscreteMeasure, S2: Iterable, metric) -> SeparationCheck:
    """``W(mu, nu) >= mu(S minus S2) d(S minus S2, S2)`` for ``mu`` on ``S``
    and ``nu`` on ``S2``."""
    S, S2 = set(S), set(S2)
    if not mu.support <= S or not nu.support <= S2:
        raise TransportError("measures are not supported on the given sets")
    lhs = wasserstein1(mu, nu, metric).value
    outside = S - S2
    if outside:
        rhs = mu.mass(outside) * metric.set_distance(outside, S2)
    else:
        rhs = Fraction(0)
    return SeparationCheck(lhs, rhs, lhs >= rhs)
