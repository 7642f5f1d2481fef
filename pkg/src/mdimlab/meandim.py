"""Measures on witness points and the lower bound for the mean dimension of
the induced system.

Witness points ``x_i`` are indexed by bit strings ``i`` over ``J_n`` (sorted
group order). The tiles ``F_j c`` of one portion cut ``J_n`` into blocks; a
block with ``s`` elements carries the simplex ``Δ_{2^s}``, whose vertex
``b`` is the block's bits read most significant first. A point ``t`` of the
product of these simplices is a tuple of rational vectors, one per block.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import lp
from .groups import FiniteSubset
from .symbolic import (
    Configuration,
    Cylinder,
    SubshiftSpec,
    cylinder_distance,
    exact_shift_distance,
    find_independence_set,
    realize_witness,
)
from .tiling import TilingScheme, tile_decompose
from .transport import (
    ActionTable,
    DiscreteMeasure,
    FiniteMetric,
    dynamical_wasserstein,
    mix,
)


class BoundError(ValueError):
    pass


# -- blocks -------------------------------------------------------------------


@dataclass(frozen=True)
class Block:
    j: int
    c: object
    tile: FiniteSubset
    members: tuple  # J_n ∩ F_j c, sorted

    @property
    def k(self) -> int:
        return 2 ** len(self.members)


def restrict_tiling(J: Iterable, decomposition: Sequence) -> list[Block]:
    """Cut ``J`` along the tiles ``(j, c, F_j c)``; empty blocks are kept."""
    J = set(J)
    blocks = [Block(j, c, T, tuple(g for g in T if g in J)) for j, c, T in decomposition]
    covered = [g for b in blocks for g in b.members]
    if len(covered) != len(set(covered)) or set(covered) != J:
        raise BoundError("tiles do not partition J")
    return blocks


def select_dense_tiles(blocks: Sequence[Block], delta) -> dict[int, FiniteSubset]:
    """``C_j^(n)``: centers whose block holds at least ``delta/2 |F_j|`` elements."""
    delta = Fraction(delta)
    if not 0 < delta <= 1:
        raise BoundError("delta must lie in (0, 1]")
    out: dict[int, list] = {}
    group = None
    for b in blocks:
        group = b.tile.group
        out.setdefault(b.j, [])
        if len(b.members) >= delta / 2 * len(b.tile):
            out[b.j].append(b.c)
    return {j: FiniteSubset(group, cs) for j, cs in out.items()}


# -- the embeddings -------------------------------------------------------------


def _check_simplex_point(t: Sequence, k: int) -> tuple[Fraction, ...]:
    t = tuple(Fraction(v) for v in t)
    if len(t) != k or any(v < 0 for v in t) or sum(t) != 1:
        raise BoundError(f"not a point of Δ_{k}: {t}")
    return t


def theta_embed(ts: Sequence[Sequence]) -> tuple[Fraction, ...]:
    """``t_i = prod_m t_{m, i_m}``, listed in lexicographic order of ``i``."""
    ts = [_check_simplex_point(t, len(t)) for t in ts]
    out = []
    for idx in itertools.product(*(range(len(t)) for t in ts)):
        v = Fraction(1)
        for t, a in zip(ts, idx):
            v *= t[a]
        out.append(v)
    return tuple(out)


@dataclass
class LnInstance:
    spec: SubshiftSpec
    U0: Cylinder
    U1: Cylinder
    n: int
    portion: int
    F_n: FiniteSubset
    J: tuple
    blocks: list[Block]
    points: dict  # bit string -> Configuration
    metric: FiniteMetric
    action: ActionTable
    portion_sets: list[FiniteSubset]
    delta: Fraction
    gamma: Fraction
    epsilon: Fraction
    diam: Fraction

    @property
    def ks(self) -> tuple[int, ...]:
        return tuple(b.k for b in self.blocks)

    @property
    def ids(self) -> list[str]:
        return list(self.points)

    def slot(self, w: str, m: int) -> int:
        """Vertex of ``Δ_{k_m}`` that witness ``w`` projects to."""
        pos = self._pos
        bits = "".join(w[pos[g]] for g in self.blocks[m].members)
        return int(bits, 2) if bits else 0

    @property
    def _pos(self) -> dict:
        return {g: a for a, g in enumerate(self.J)}

    def face_support(self, m: int, I: Iterable[int]) -> list[str]:
        """``S_{Ξ(A_m)}`` for the face ``A`` of ``Δ_{k_m}`` spanned by ``I``."""
        I = set(I)
        return [w for w in self.points if self.slot(w, m) in I]


def witness_id(bits: Sequence[int]) -> str:
    return "".join(str(b) for b in bits)


def xi_embed(inst: LnInstance, ts: Sequence[Sequence]) -> DiscreteMeasure:
    """``Ξ(t) = sum_i t_i δ_{x_i}``."""
    if len(ts) != len(inst.blocks):
        raise BoundError("one simplex point per block")
    ts = [_check_simplex_point(t, b.k) for t, b in zip(ts, inst.blocks)]
    w = {}
    for wid in inst.points:
        v = Fraction(1)
        for m, t in enumerate(ts):
            v *= t[inst.slot(wid, m)]
            if not v:
                break
        if v:
            w[wid] = v
    return DiscreteMeasure(w)


def gamma_i(portion_sets: Sequence[FiniteSubset], d_U=Fraction(1)) -> Fraction:
    """``d(U_0,U_1) 2^-R`` with ``R`` the largest word length in the portion:
    shift-metric distances grow by at most ``2^|g|`` under ``g``."""
    if not portion_sets:
        raise BoundError("empty portion")
    R = max(F.max_length() for F in portion_sets)
    return Fraction(d_U) / 2**R


def epsilon_i(gamma, diam, F_sizes: Iterable[int]) -> Fraction:
    gamma, diam = Fraction(gamma), Fraction(diam)
    if diam <= 0:
        raise BoundError("diameter must be positive")
    return gamma**2 / diam / max(2 ** (s + 1) for s in F_sizes)


def build_instance(
    spec: SubshiftSpec,
    scheme: TilingScheme,
    portion: int,
    n: int,
    U0: Cylinder | None = None,
    U1: Cylinder | None = None,
    J: Sequence | None = None,
    max_j: int = 4,
    budget: int = 2**16,
) -> LnInstance:
    """Witness points, exact metric and action for one ``(portion, n)`` pair."""
    U0 = U0 or Cylinder(spec.alphabet[0])
    U1 = U1 or Cylinder(spec.alphabet[1])
    fd = scheme.folner
    F_n = fd.F(n)
    if J is None:
        rec = find_independence_set(spec, U0, U1, F_n, budget, n=n)
        if not rec.certified:
            raise BoundError("independence set is not certified")
        J = rec.J
    J = tuple(sorted(J))
    if len(J) > max_j:
        raise BoundError(f"|J_n| = {len(J)} exceeds the instance cap {max_j}")
    pieces = tile_decompose(F_n, scheme, portion, n)
    blocks = restrict_tiling(J, pieces)
    points = {}
    for bits in itertools.product((0, 1), repeat=len(J)):
        points[witness_id(bits)] = realize_witness(spec, J, bits, U0, U1)
    metric = FiniteMetric(list(points), dist=lambda a, b: exact_shift_distance(points[a], points[b]))
    action = ActionTable.from_configurations(points, F_n)
    portion_sets = [fd.F(j) for j in fd.portion(portion)]
    # the shift metric is bounded by 1 and U_0, U_1 force distance 1
    diam = Fraction(1)
    gamma = gamma_i(portion_sets, cylinder_distance(U0, U1))
    eps = epsilon_i(gamma, diam, [len(F) for F in portion_sets])
    delta = Fraction(len(J), len(F_n))
    return LnInstance(spec, U0, U1, n, portion, F_n, J, blocks, points, metric, action,
                      portion_sets, delta, gamma, eps, diam)


# -- decomposition -----------------------------------------------------------------


@dataclass
class Decomposition:
    lam: Fraction
    inside: DiscreteMeasure | None  # in Ξ(A_m); None when unused
    outside: DiscreteMeasure | None  # in Ξ(Ā_m); None when unused
    t_inside: tuple | None
    t_outside: tuple | None


def _restrict(t: Sequence[Fraction], I: set) -> tuple[Fraction, ...] | None:
    s = sum((t[a] for a in I), Fraction(0))
    if s == 0:
        return None
    return tuple(t[a] / s if a in I else Fraction(0) for a in range(len(t)))


def _face(I: Iterable[int], k: int) -> frozenset:
    I = frozenset(I)
    if not I or not I < frozenset(range(k)):
        raise BoundError("a proper non-empty face is required")
    return I


def decompose_measure(inst: LnInstance, ts: Sequence[Sequence], m: int, I: Iterable[int]) -> Decomposition:
    """``Ξ(t) = λ Ξ(t') + (1-λ) Ξ(t'')`` with ``t'`` in ``A_m`` and ``t''`` in
    the opposite face; ``λ`` is the ``m``-th slot's mass on ``A``."""
    k = inst.blocks[m].k
    I = _face(I, k)
    ts = [tuple(Fraction(v) for v in t) for t in ts]
    tm = ts[m]
    lam = sum((tm[a] for a in I), Fraction(0))
    rin = _restrict(tm, set(I))
    rout = _restrict(tm, set(range(k)) - I)
    t_in = tuple(ts[:m] + [rin] + ts[m + 1 :]) if rin is not None else None
    t_out = tuple(ts[:m] + [rout] + ts[m + 1 :]) if rout is not None else None
    return Decomposition(
        lam,
        xi_embed(inst, t_in) if t_in else None,
        xi_embed(inst, t_out) if t_out else None,
        t_in,
        t_out,
    )


def reconstruct(d: Decomposition) -> DiscreteMeasure:
    parts = []
    if d.inside is not None:
        parts.append((d.lam, d.inside))
    if d.outside is not None:
        parts.append((1 - d.lam, d.outside))
    return mix(parts)


# -- distances to faces ------------------------------------------------------------


def lp_distance_to_support(inst: LnInstance, mu: DiscreteMeasure, S: Sequence[str]) -> Fraction:
    """``min_nu max_{g in F_n} W(g mu, g nu)`` over all ``nu`` on ``S``.

    Every measure of ``Ξ(A_m)`` lives on ``S_{Ξ(A_m)}``, so this bounds the
    distance to ``A_m`` from below. One LP: the weights of ``nu``, one
    transport plan per ``g`` and an epigraph variable ``z``.
    """
    S = list(S)
    if not S:
        raise BoundError("empty support set")
    act = inst.action
    cols: dict = {}

    def col(key):
        if key not in cols:
            cols[key] = len(cols)
        return cols[key]

    z = col("z")
    nu = [col(("nu", q)) for q in S]
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    A_eq.append({c: 1 for c in nu})
    b_eq.append(1)
    for g in act.elements:
        img = act.images[g]
        gmu = act.push(g, mu)
        sources = list(gmu.weights)
        targets = sorted({img[q] for q in S})
        d = act.metrics[g]
        for a in sources:
            A_eq.append({col(("pi", g, a, b)): 1 for b in targets})
            b_eq.append(gmu.weights[a])
        for b in targets:
            row = {col(("pi", g, a, b)): 1 for a in sources}
            for q, c in zip(S, nu):
                if img[q] == b:
                    row[c] = row.get(c, 0) - 1
            A_eq.append(row)
            b_eq.append(0)
        row = {col(("pi", g, a, b)): d(a, b) for a in sources for b in targets if d(a, b)}
        row[z] = -1
        A_ub.append(row)
        b_ub.append(0)
    c = [0] * len(cols)
    c[z] = 1
    res = lp.solve(c, A_eq, b_eq, A_ub, b_ub)
    if not res.optimal:
        raise lp.LPError(f"face-distance program {res.status}")
    return res.value


def _face_witness(inst: LnInstance, ts, m: int, I: frozenset):
    """A measure in ``Ξ(A_m)``: the decomposition piece, or the face
    barycenter in slot ``m`` when that piece is unused."""
    d = decompose_measure(inst, ts, m, I)
    if d.inside is not None:
        return d, d.inside
    k = inst.blocks[m].k
    fill = tuple(Fraction(1, len(I)) if a in I else Fraction(0) for a in range(k))
    ts2 = [tuple(t) for t in ts]
    ts2[m] = fill
    return d, xi_embed(inst, ts2)


@dataclass
class Lemma42Result:
    beta: Fraction
    ub: Fraction
    lb: Fraction
    ub_bound: Fraction
    lb_bound: Fraction

    @property
    def ok(self) -> bool:
        return self.ub <= self.ub_bound and self.lb >= self.lb_bound


def lemma42_check(inst: LnInstance, ts, m: int, I: Iterable[int]) -> Lemma42Result:
    """Bracket ``W_{F_n}(mu, A_m)`` with ``beta = mu(S_{Ā_m})``:
    ``W(mu, mu_A) <= beta diam`` and the LP bound ``>= beta gamma``."""
    k = inst.blocks[m].k
    I = _face(I, k)
    mu = xi_embed(inst, ts)
    d, nu = _face_witness(inst, ts, m, I)
    beta = 1 - d.lam
    ub, _ = dynamical_wasserstein(mu, nu, inst.action)
    lb = lp_distance_to_support(inst, mu, inst.face_support(m, I))
    return Lemma42Result(beta, ub, lb, beta * inst.diam, beta * inst.gamma)


@dataclass
class Lemma43Result:
    premise: bool
    skipped: bool
    ub: Fraction | None
    bound: Fraction
    face_lbs: list

    @property
    def ok(self) -> bool:
        return self.skipped or not self.premise or self.ub <= self.bound


def lemma43_check(inst: LnInstance, ts, m: int, removed: Iterable[int], eps) -> Lemma43Result:
    """For facets ``{t_{m,u} = 0}`` (``u`` in ``removed``) with LP distances
    below ``eps``, the distance to their intersection (bounded above by a
    decomposition witness) stays below ``diam k_m eps / gamma``."""
    eps = Fraction(eps)
    k = inst.blocks[m].k
    removed = sorted(set(removed))
    bound = inst.diam * k * eps / inst.gamma
    meet = frozenset(range(k)) - frozenset(removed)
    if not removed or not meet:
        return Lemma43Result(False, True, None, bound, [])
    mu = xi_embed(inst, ts)
    lbs = [lp_distance_to_support(inst, mu, inst.face_support(m, set(range(k)) - {u})) for u in removed]
    premise = all(v < eps for v in lbs)
    if not premise:
        return Lemma43Result(False, False, None, bound, lbs)
    if meet == frozenset(range(k)):
        ub = Fraction(0)
    else:
        _, nu = _face_witness(inst, ts, m, meet)
        ub, _ = dynamical_wasserstein(mu, nu, inst.action)
    return Lemma43Result(True, False, ub, bound, lbs)


def lemma45_check(F_n_size: int, J_size: int, delta, blocks: Sequence[Block]) -> bool:
    """``|F_n| <= (2/delta) sum_j |F_j| |C_j^(n)|``."""
    delta = Fraction(delta)
    if J_size < delta * F_n_size:
        raise BoundError(f"|J_n| = {J_size} is below delta |F_n| = {delta * F_n_size}")
    dense = select_dense_tiles(blocks, delta)
    sizes = {b.j: len(b.tile) for b in blocks}
    rhs = 2 / delta * sum(sizes[j] * len(cs) for j, cs in dense.items())
    return F_n_size <= rhs


# -- the bound formulas -------------------------------------------------------------


def _floor_half(delta: Fraction, size: int) -> int:
    return math.floor(Fraction(delta) / 2 * size)


def dim_lower_bound(delta, F_sizes: Sequence[int], counts: Sequence[int]) -> int:
    """``sum_j 2^floor(delta |F_j| / 2) |C_j^(n)|``."""
    return sum(2 ** _floor_half(delta, s) * c for s, c in zip(F_sizes, counts))


def order_sum(blocks: Sequence[Block]) -> int:
    """``sum_m k_m``, the intermediate quantity of the dimension estimate."""
    return sum(b.k for b in blocks)


def mdim_lower_bound(delta, F_sizes: Sequence[int]) -> Fraction:
    """``(delta/2) min_j 2^floor(delta |F_j| / 2) / |F_j|``."""
    delta = Fraction(delta)
    return delta / 2 * min(Fraction(2 ** _floor_half(delta, s), s) for s in F_sizes)


# -- sampled checks -------------------------------------------------------------------


def random_slot(rng, k: int, support: int | None = None, denom: int = 8, zeros: Iterable[int] = ()) -> tuple[Fraction, ...]:
    """Random rational point of ``Δ_k`` on at most ``support`` vertices."""
    allowed = [a for a in range(k) if a not in set(zeros)]
    size = len(allowed) if support is None else min(support, len(allowed))
    chosen = rng.sample(allowed, rng.randint(1, size))
    w = {a: rng.randint(1, denom) for a in chosen}
    s = sum(w.values())
    return tuple(Fraction(w.get(a, 0), s) for a in range(k))


def random_point(inst: LnInstance, rng, support: int = 2) -> tuple:
    return tuple(random_slot(rng, b.k, support) for b in inst.blocks)


@dataclass
class GammaCheck:
    pairs: int
    worst: Fraction
    ok: bool


def _random_pattern(spec: SubshiftSpec, positions: Sequence, fixed: Mapping, rng) -> dict | None:
    """Random locally admissible pattern on ``positions`` extending ``fixed``."""
    if not spec.forbidden:
        return {g: fixed.get(g, rng.choice(spec.alphabet)) for g in positions}
    pos = sorted(positions)
    out: dict = {}

    def rec(a: int) -> bool:
        if a == len(pos):
            return True
        g = pos[a]
        options = [fixed[g]] if g in fixed else rng.sample(spec.alphabet, len(spec.alphabet))
        for s in options:
            out[g] = s
            word = "".join(out.get(h, "") for h in range(g - spec.window + 1, g + 1))
            if not any(word.endswith(w) for w in spec.forbidden) and rec(a + 1):
                return True
            del out[g]
        return False

    return out if rec(0) else None


def verify_gamma(spec: SubshiftSpec, portion_sets: Sequence[FiniteSubset], gamma, samples: int, rng, d_U=Fraction(1)) -> GammaCheck:
    """Sample ``x, y`` with ``d(x,y) < gamma`` and check
    ``max_g d(gx, gy) < d(U_0, U_1)`` over the portion's sets."""
    from .symbolic import RealizationError, realize

    gamma = Fraction(gamma)
    group = spec.group
    R = 0
    while Fraction(1, 2**R) >= gamma:
        R += 1
    # agreeing on the ball of radius R-1 forces d(x, y) <= 2^-R < gamma
    inner = group.ball(R - 1) if R > 0 else []
    box = group.ball(max(F.max_length() for F in portion_sets) + R + 1)
    elements = sorted(set().union(*(F.as_set for F in portion_sets)), key=group.sort_key)
    worst = Fraction(0)
    count = 0
    for _ in range(samples):
        px = _random_pattern(spec, box, {}, rng)
        py = _random_pattern(spec, box, {g: px[g] for g in inner}, rng) if px else None
        if py is None:
            continue
        try:
            x, y = realize(spec, px), realize(spec, py)
        except RealizationError:
            continue
        if exact_shift_distance(x, y) >= gamma:
            continue
        count += 1
        for g in elements:
            worst = max(worst, exact_shift_distance(x.shift(g), y.shift(g)))
    return GammaCheck(count, worst, count > 0 and worst < Fraction(d_U))


@dataclass
class ProbeResult:
    balls: list  # member sample indices per ball
    diameters: list
    violation: tuple | None  # (sample, slot, balls, removed vertices)

    @property
    def ok(self) -> bool:
        return self.violation is None

    @property
    def max_diameter(self) -> Fraction:
        return max(self.diameters, default=Fraction(0))


def pairwise_wf(inst: LnInstance, measures: Sequence[DiscreteMeasure]) -> list[list[Fraction]]:
    n = len(measures)
    D = [[Fraction(0)] * n for _ in range(n)]
    for a, b in itertools.combinations(range(n), 2):
        D[a][b] = D[b][a] = dynamical_wasserstein(measures[a], measures[b], inst.action)[0]
    return D


def greedy_balls(D: Sequence[Sequence[Fraction]], radius) -> list[list[int]]:
    """Centers taken in order among uncovered samples; each ball holds every
    sample within ``radius`` of its center."""
    radius = Fraction(radius)
    n = len(D)
    covered = [False] * n
    balls = []
    for c in range(n):
        if covered[c]:
            continue
        members = [s for s in range(n) if D[c][s] <= radius]
        for s in members:
            covered[s] = True
        balls.append(members)
    return balls


def lemma44_probe(inst: LnInstance, samples: Sequence, balls: Sequence[Sequence[int]], D=None) -> ProbeResult:
    """Separating conditions of a sampled cover of ``L_n``.

    Face incidences come from the preimages ``t``; a ball meets the facet
    ``{t_{m,u} = 0}`` when one of its samples lies there. A violation is a
    sample in the balls of a family whose facets (one per ball) meet in a
    face opposite to the sample's slot support.
    """
    from .covers import _match

    if D is None:
        D = pairwise_wf(inst, [xi_embed(inst, t) for t in samples])
    diam = [max((D[a][b] for a in ball for b in ball), default=Fraction(0)) for ball in balls]
    for m, blk in enumerate(inst.blocks):
        k = blk.k
        if k < 2:
            continue
        touch = [frozenset(u for u in range(k) for s in ball if samples[s][m][u] == 0) for ball in balls]
        for s, t in enumerate(samples):
            T = frozenset(a for a in range(k) if t[m][a] != 0)
            if len(T) == k:
                continue
            containing = [q for q, ball in enumerate(balls) if s in ball]
            chosen = _match(sorted(T), [(q, touch[q]) for q in containing])
            if chosen is not None:
                return ProbeResult([list(b) for b in balls], diam, (s, m, tuple(chosen), tuple(sorted(T))))
    return ProbeResult([list(b) for b in balls], diam, None)


# -- the report ------------------------------------------------------------------------


@dataclass
class BoundRow:
    portion: int
    n: int
    F_n: int
    J_n: int
    delta_n: Fraction
    certified: bool
    F_sizes: list
    centers: list
    dense: list
    gamma: Fraction
    epsilon: Fraction
    order_sum: int
    dim_bound: int
    lemma45: bool

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.dim_bound, self.F_n)


@dataclass
class PortionRow:
    portion: int
    js: list
    F_sizes: list
    delta: Fraction
    gamma: Fraction
    epsilon: Fraction
    mdim_bound: Fraction


@dataclass
class BoundReport:
    rows: list[BoundRow] = field(default_factory=list)
    portions: list[PortionRow] = field(default_factory=list)


def bound_report(
    spec: SubshiftSpec,
    scheme: TilingScheme,
    delta=None,
    U0: Cylinder | None = None,
    U1: Cylinder | None = None,
    budget: int = 2**16,
) -> BoundReport:
    """Run the estimate over every stored ``(portion, n)`` pair.

    Dense tiles use each ``n``'s own certified density; the per-portion
    mean-dimension bound uses ``delta`` if given, else the smallest density
    seen.
    """
    U0 = U0 or Cylinder(spec.alphabet[0])
    U1 = U1 or Cylinder(spec.alphabet[1])
    d_U = cylinder_distance(U0, U1)
    fd = scheme.folner
    report = BoundReport()
    records = {}
    for i, n in sorted(scheme.checkable_pairs()):
        if n not in records:
            records[n] = find_independence_set(spec, U0, U1, fd.F(n), budget, n=n)
        rec = records[n]
        blocks = restrict_tiling(rec.J, tile_decompose(fd.F(n), scheme, i, n))
        dense = select_dense_tiles(blocks, rec.delta)
        js = list(fd.portion(i))
        sizes = [len(fd.F(j)) for j in js]
        centers = [len(scheme.C(j, n)) for j in js]
        dense_counts = [len(dense.get(j, ())) for j in js]
        sets = [fd.F(j) for j in js]
        gamma = gamma_i(sets, d_U)
        report.rows.append(BoundRow(
            i, n, len(fd.F(n)), len(rec.J), rec.delta, rec.certified, sizes, centers, dense_counts,
            gamma, epsilon_i(gamma, 1, sizes), order_sum(blocks),
            dim_lower_bound(rec.delta, sizes, dense_counts),
            lemma45_check(len(fd.F(n)), len(rec.J), rec.delta, blocks),
        ))
    if delta is None:
        deltas = [r.delta for r in records.values()]
        if not deltas:
            raise BoundError("scheme stores no tiled pairs")
        delta = min(deltas)
    delta = Fraction(delta)
    for i in range(fd.num_portions):
        js = list(fd.portion(i))
        sets = [fd.F(j) for j in js]
        sizes = [len(F) for F in sets]
        gamma = gamma_i(sets, d_U)
        report.portions.append(PortionRow(
            i, js, sizes, delta, gamma, epsilon_i(gamma, 1, sizes), mdim_lower_bound(delta, sizes),
        ))
    return report
