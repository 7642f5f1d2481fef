"""Combinatorial covers of simplex products.

At resolution ``r`` a cell of ``Δ_k`` is an integer vector ``a`` with
``0 <= a_j <= r-1`` and ``r-k+1 <= sum(a) <= r-1``; it stands for the box
``[a/r, (a+1)/r]`` cut down to the simplex. Cells of a product are tuples of
factor cells. Grid vertices are integer vectors ``b >= 0`` with
``sum(b) = r``.

A cover element is a union of closed cells, read as a thin open thickening
of that union. Then two elements meet, or an element meets a face, exactly
when they share a grid vertex, so every predicate below reduces to vertex
sets.
"""
from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .simplices import (
    FaceRef,
    ProductPoint,
    ProductSpec,
    SimplexError,
    center,
    facet,
    on_boundary,
    random_boundary_point,
    vertex,
)


class CoverError(ValueError):
    pass


def simplex_cells(k: int, r: int) -> list[tuple[int, ...]]:
    return [a for a in itertools.product(range(r), repeat=k) if r - k + 1 <= sum(a) <= r - 1]


def cell_vertices(a: Sequence[int], r: int) -> list[tuple[int, ...]]:
    return [b for b in itertools.product(*((x, x + 1) for x in a)) if sum(b) == r]


def segment_cell(a0: int, r: int) -> tuple[int, int]:
    """Cell ``a0`` of ``Δ_2`` (``x_0`` in ``[a0/r, (a0+1)/r]``)."""
    return (a0, r - 1 - a0)


class Grid:
    """Cells and vertices of a product at one resolution, with vertex sets
    stored as bitmasks."""

    def __init__(self, spec: ProductSpec, r: int):
        if r < 1:
            raise CoverError("resolution must be positive")
        self.spec = spec
        self.r = r
        self.cells = list(itertools.product(*(simplex_cells(k, r) for k in spec.ks)))
        self.cell_index = {c: n for n, c in enumerate(self.cells)}
        self.vertices: list[tuple] = []
        vindex: dict = {}
        self.cell_mask: dict = {}
        for c in self.cells:
            mask = 0
            for v in itertools.product(*(cell_vertices(a, r) for a in c)):
                if v not in vindex:
                    vindex[v] = len(self.vertices)
                    self.vertices.append(v)
                mask |= 1 << vindex[v]
            self.cell_mask[c] = mask
        self.vertex_index = vindex
        # supports[v][i]: coordinates of factor i where vertex v is non-zero
        self.supports = [tuple(frozenset(j for j, b in enumerate(bi) if b) for bi in v) for v in self.vertices]
        # facet_mask[i][u]: vertices on {x_{i,u} = 0}
        self.facet_mask = [
            [sum(1 << n for n, v in enumerate(self.vertices) if v[i][u] == 0) for u in range(k)]
            for i, k in enumerate(spec.ks)
        ]

    def point(self, v: tuple) -> ProductPoint:
        return ProductPoint(tuple(tuple(Fraction(b, self.r) for b in bi) for bi in v))

    def mask_of(self, cells: Iterable) -> int:
        m = 0
        for c in cells:
            m |= self.cell_mask[c]
        return m


@functools.lru_cache(maxsize=64)
def grid(spec: ProductSpec, r: int) -> Grid:
    return Grid(spec, r)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class GridCover:
    spec: ProductSpec
    resolution: int
    elements: tuple[frozenset, ...]
    names: tuple[str, ...] | None = None
    incidence: tuple = field(default=(), compare=False)

    def __post_init__(self):
        els = tuple(frozenset(tuple(tuple(a) for a in c) for c in e) for e in self.elements)
        object.__setattr__(self, "elements", els)
        g = self.grid
        for e in els:
            if not e:
                raise CoverError("empty cover element")
            for c in e:
                if c not in g.cell_mask:
                    raise CoverError(f"{c} is not a cell at resolution {self.resolution}")
        if self.names is not None and len(self.names) != len(els):
            raise CoverError("one name per element")
        flags = self._compute_incidence()
        if self.incidence and tuple(self.incidence) != flags:
            raise CoverError("stored face incidences disagree with the cells")
        object.__setattr__(self, "incidence", flags)

    @property
    def grid(self) -> Grid:
        return grid(self.spec, self.resolution)

    @functools.cached_property
    def masks(self) -> tuple[int, ...]:
        g = self.grid
        return tuple(g.mask_of(e) for e in self.elements)

    def _compute_incidence(self):
        # incidence[e][i]: the u with element e touching {x_{i,u} = 0}
        g = self.grid
        masks = [g.mask_of(e) for e in self.elements]
        return tuple(
            tuple(frozenset(u for u in range(k) if m & g.facet_mask[i][u]) for i, k in enumerate(self.spec.ks))
            for m in masks
        )

    def name(self, e: int) -> str:
        return self.names[e] if self.names else str(e)

    def uncovered(self) -> list:
        covered = set().union(*self.elements)
        return [c for c in self.grid.cells if c not in covered]

    def validate(self) -> None:
        missing = self.uncovered()
        if missing:
            raise CoverError(f"cells not covered: {missing[:5]}")

    def members(self) -> list[list[int]]:
        """Elements containing each grid vertex."""
        out: list[list[int]] = [[] for _ in self.grid.vertices]
        for e, m in enumerate(self.masks):
            for v in _bits(m):
                out[v].append(e)
        return out

    def touches(self, e: int, f: FaceRef) -> bool:
        g = self.grid
        I = f.I
        return any(
            sum(g.vertices[v][f.i][j] for j in I) == self.resolution for v in _bits(self.masks[e])
        )

    def to_dict(self) -> dict:
        d = {
            "spec": list(self.spec.ks),
            "resolution": self.resolution,
            "elements": [sorted([list(a) for a in c] for c in e) for e in self.elements],
            "incidence": [[sorted(I) for I in flags] for flags in self.incidence],
        }
        if self.names:
            d["names"] = list(self.names)
        return d

    @classmethod
    def from_dict(cls, d: Mapping) -> GridCover:
        spec = ProductSpec(tuple(d["spec"]))
        els = [frozenset(tuple(tuple(a) for a in c) for c in e) for e in d["elements"]]
        names = tuple(d["names"]) if d.get("names") else None
        incidence = tuple(tuple(frozenset(I) for I in flags) for flags in d.get("incidence", ()))
        return cls(spec, int(d["resolution"]), tuple(els), names, incidence)


def cover_from_labels(spec: ProductSpec, r: int, labels: Sequence, cells: Sequence | None = None) -> GridCover:
    """Cover whose elements are the label classes of the cells."""
    cells = cells if cells is not None else grid(spec, r).cells
    blocks: dict = {}
    for c, lab in zip(cells, labels):
        blocks.setdefault(lab, set()).add(c)
    names = tuple(str(k) for k in blocks)
    return GridCover(spec, r, tuple(frozenset(b) for b in blocks.values()), names)


def brickwork(rows: Sequence[str]) -> GridCover:
    """Cover of ``Δ_2 x Δ_2``: ``rows[a][b]`` labels the cell pair ``(a, b)``."""
    r = len(rows)
    if any(len(row) != r for row in rows):
        raise CoverError("brickwork needs a square label grid")
    spec = ProductSpec((2, 2))
    cells, labels = [], []
    for a, row in enumerate(rows):
        for b, lab in enumerate(row):
            cells.append((segment_cell(a, r), segment_cell(b, r)))
            labels.append(lab)
    return cover_from_labels(spec, r, labels, cells)


def segment_cover(r: int, intervals: Sequence[tuple[int, int]]) -> GridCover:
    """Cover of ``Δ_2`` by cell ranges ``[lo, hi)`` along ``x_0``."""
    spec = ProductSpec((2,))
    els = [frozenset((segment_cell(a, r),) for a in range(lo, hi)) for lo, hi in intervals]
    return GridCover(spec, r, tuple(els))


# -- order ---------------------------------------------------------------------


def _order_of_masks(masks: Sequence[int], nverts: int) -> int:
    counts = [0] * nverts
    for m in masks:
        for v in _bits(m):
            counts[v] += 1
    return max(counts) - 1


def cover_order(c: GridCover) -> int:
    """Largest number of elements sharing a point, minus one."""
    c.validate()
    return _order_of_masks(c.masks, len(c.grid.vertices))


# -- separating covers -----------------------------------------------------------


@dataclass(frozen=True)
class CounterFamily:
    """Elements paired with facets of factor ``i`` whose common point lies in
    the opposite face of the facets' intersection."""

    i: int
    elements: tuple[int, ...]
    faces: tuple[FaceRef, ...]
    point: ProductPoint

    def describe(self, cover: GridCover) -> str:
        pairs = ", ".join(f"{cover.name(e)}~{sorted(f.I)}" for e, f in zip(self.elements, self.faces))
        return f"factor {self.i}: {pairs} at {self.point.to_list()}"

    def recheck(self, cover: GridCover) -> bool:
        k = cover.spec.ks[self.i]
        if len(set(self.elements)) != len(self.elements):
            return False
        if not all(cover.touches(e, f) for e, f in zip(self.elements, self.faces)):
            return False
        meet = frozenset.intersection(*(f.I for f in self.faces))
        if not meet:
            return False
        opposite = frozenset(range(k)) - meet
        if not opposite:
            return False
        g = cover.grid
        v = g.vertex_index.get(tuple(tuple(int(x * cover.resolution) for x in xi) for xi in self.point.coords))
        if v is None:
            return False
        in_all = all(cover.masks[e] >> v & 1 for e in self.elements)
        in_opposite = sum(self.point[self.i][j] for j in opposite) == 1
        return in_all and in_opposite


def _match(targets: Sequence[int], options: Sequence[tuple[int, frozenset]]):
    """Assign each target to a distinct option containing it, or None."""
    used: set = set()
    out: list = []

    def rec(t: int) -> bool:
        if t == len(targets):
            return True
        u = targets[t]
        for e, faces in options:
            if e not in used and u in faces:
                used.add(e)
                out.append(e)
                if rec(t + 1):
                    return True
                used.discard(e)
                out.pop()
        return False

    return list(out) if rec(0) else None


def _violation(spec, g: Grid, masks, incidence) -> CounterFamily | None:
    members: list[list[int]] = [[] for _ in g.vertices]
    for e, m in enumerate(masks):
        for v in _bits(m):
            members[v].append(e)
    for v, elems in enumerate(members):
        for i, k in enumerate(spec.ks):
            T = g.supports[v][i]
            if len(T) == k:
                continue
            # a family whose facets {x_{i,u}=0} (u in T) all meet this vertex's
            # element and still have the vertex in the opposite face
            targets = sorted(T)
            chosen = _match(targets, [(e, incidence[e][i]) for e in elems])
            if chosen is not None:
                faces = tuple(facet(i, k, u) for u in targets)
                return CounterFamily(i, tuple(chosen), faces, g.point(g.vertices[v]))
    return None


def is_separating(c: GridCover) -> CounterFamily | None:
    """None when the cover is separating, else a checkable counter-family."""
    return _violation(c.spec, c.grid, c.masks, c.incidence)


# -- phi^alpha and the g-map ------------------------------------------------------


def phi_alpha(c: GridCover) -> list[ProductPoint]:
    """Per element and factor: the center if the element misses every facet,
    else the vertex opposite its lexicographically smallest incident facet."""
    out = []
    for e in range(len(c.elements)):
        coords = []
        for i, k in enumerate(c.spec.ks):
            inc = c.incidence[e][i]
            if not inc:
                coords.append(center(k))
                continue
            faces = sorted(tuple(sorted(facet(i, k, u).I)) for u in inc)
            (u,) = frozenset(range(k)) - frozenset(faces[0])
            coords.append(vertex(k, u))
        out.append(ProductPoint(tuple(coords)))
    return out


def _dist_to_interval(x: Fraction, lo: Fraction, hi: Fraction) -> Fraction:
    if x < lo:
        return lo - x
    if x > hi:
        return x - hi
    return Fraction(0)


def element_distance(c: GridCover, e: int, x: ProductPoint) -> Fraction:
    """Sup-norm distance in barycentric coordinates from ``x`` to the cell
    boxes of element ``e``."""
    r = c.resolution
    best = None
    for cell in c.elements[e]:
        d = Fraction(0)
        for xi, a in zip(x.coords, cell):
            for xv, aj in zip(xi, a):
                d = max(d, _dist_to_interval(xv, Fraction(aj, r), Fraction(aj + 1, r)))
        if best is None or d < best:
            best = d
    return best


def thickening(c: GridCover) -> Fraction:
    return Fraction(1, 4 * c.resolution)


def partition_weights(c: GridCover, x: ProductPoint) -> list[Fraction]:
    """``w_U(x) = max(0, eps - dist(x, U))``: positive exactly on the open
    thickening of ``U``."""
    eps = thickening(c)
    return [max(Fraction(0), eps - element_distance(c, e, x)) for e in range(len(c.elements))]


def g_map(c: GridCover, x: ProductPoint, phi: Sequence[ProductPoint] | None = None) -> ProductPoint:
    """``g(x) = sum_U phi(U) f_U(x)`` with the normalized weights."""
    if not x.fits(c.spec):
        raise SimplexError("point does not match the product")
    phi = phi if phi is not None else phi_alpha(c)
    w = partition_weights(c, x)
    total = sum(w)
    if total == 0:
        raise CoverError("point outside every element")
    coords = []
    for i, k in enumerate(c.spec.ks):
        coords.append(tuple(sum((wu * p[i][j] for wu, p in zip(w, phi) if wu), Fraction(0)) / total for j in range(k)))
    return ProductPoint(tuple(coords))


@dataclass
class ClaimReport:
    checked: int = 0
    violations: list = field(default_factory=list)  # (x, g(x), reason)

    @property
    def ok(self) -> bool:
        return not self.violations


def boundary_claim_check(c: GridCover, samples: Iterable[ProductPoint]) -> ClaimReport:
    """For a separating cover: every boundary sample maps to the boundary and
    is moved by the g-map."""
    if is_separating(c) is not None:
        raise CoverError("cover is not separating")
    phi = phi_alpha(c)
    report = ClaimReport()
    for x in samples:
        if not on_boundary(x):
            raise SimplexError(f"sample {x.to_list()} is not on the boundary")
        y = g_map(c, x, phi)
        report.checked += 1
        if not on_boundary(y):
            report.violations.append((x, y, "image off the boundary"))
        elif y == x:
            report.violations.append((x, y, "fixed point"))
    return report


def boundary_samples(spec: ProductSpec, count: int, rng, denom: int = 12) -> list[ProductPoint]:
    """Product vertices first, then random rational boundary points."""
    from .simplices import product_vertex

    out = [product_vertex(spec, js) for js in itertools.product(*(range(k) for k in spec.ks))]
    out = out[:count]
    while len(out) < count:
        out.append(random_boundary_point(rng, spec, denom))
    return out


# -- exhaustive searches -----------------------------------------------------------


def set_partitions(n: int, max_blocks: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n`` with at most ``max_blocks`` values."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(pos: int, top: int):
        if pos == n:
            yield labels
            return
        for v in range(min(top + 2, max_blocks)):
            labels[pos] = v
            yield from rec(pos + 1, max(top, v))

    yield from rec(1, 0)


@dataclass
class SearchResult:
    spec: ProductSpec
    min_order: int | None
    witness: GridCover | None
    witnesses: list  # best separating cover found at each resolution
    enumerated: int
    separating_found: int
    resolutions: tuple

    @property
    def classical_bound(self) -> int:
        return self.spec.dim

    @property
    def sum_k_bound(self) -> int:
        return self.spec.sum_k_bound

    @property
    def sum_k_bound_holds(self) -> bool | None:
        return None if self.min_order is None else self.min_order >= self.sum_k_bound


def min_separating_order(spec: ProductSpec, max_elements: int = 6, max_resolution: int = 3) -> SearchResult:
    """Smallest order of a separating grid cover, over all covers with at
    most ``max_elements`` elements at resolutions ``1..max_resolution``.

    Only partitions of the cells are enumerated: shrinking elements never
    raises the order and never breaks the separating property, so every
    cover contains a partition that is at least as good.
    """
    best_order = None
    witness = None
    witnesses = []
    enumerated = separating = 0
    for r in range(1, max_resolution + 1):
        g = grid(spec, r)
        cells = g.cells
        cmasks = [g.cell_mask[c] for c in cells]
        nverts = len(g.vertices)
        level_best = None
        level_labels = None
        for labels in set_partitions(len(cells), max_elements):
            enumerated += 1
            nb = max(labels) + 1
            masks = [0] * nb
            for lab, m in zip(labels, cmasks):
                masks[lab] |= m
            order = _order_of_masks(masks, nverts)
            if level_best is not None and order >= level_best:
                continue
            incidence = [
                tuple(frozenset(u for u in range(k) if m & g.facet_mask[i][u]) for i, k in enumerate(spec.ks))
                for m in masks
            ]
            if _violation(spec, g, masks, incidence) is None:
                separating += 1
                level_best = order
                level_labels = list(labels)
        if level_labels is not None:
            cover = cover_from_labels(spec, r, level_labels)
            witnesses.append(cover)
            if best_order is None or level_best < best_order:
                best_order, witness = level_best, cover
    return SearchResult(spec, best_order, witness, witnesses, enumerated, separating, tuple(range(1, max_resolution + 1)))


@dataclass
class RefinementResult:
    value: int
    exact: bool
    cover: GridCover


def refine_resolution(c: GridCover, factor: int) -> tuple[Grid, dict]:
    """Cells at resolution ``factor*r`` mapped to the coarse cell holding them."""
    fine = grid(c.spec, c.resolution * factor)
    parent = {cell: tuple(tuple(a // factor for a in ai) for ai in cell) for cell in fine.cells}
    return fine, parent


def min_order_refinement(c: GridCover, budget: int = 2**16, factor: int = 1) -> RefinementResult:
    """Smallest order of a grid cover refining ``c`` (resolution ``factor*r``).

    Each cell is handed to one element of ``c`` that contains it; merging the
    pieces inside one parent never increases the order, so this covers every
    grid refinement. Beyond ``budget`` assignments the best cover seen is
    returned as an upper bound.
    """
    c.validate()
    fine, parent = refine_resolution(c, factor)
    owners = []
    for cell in fine.cells:
        owners.append([e for e, el in enumerate(c.elements) if parent[cell] in el])
    nverts = len(fine.vertices)
    cmasks = [fine.cell_mask[cell] for cell in fine.cells]
    total = 1
    for o in owners:
        total *= len(o)
    best = None
    best_labels = None
    seen = 0
    exact = True
    for labels in itertools.product(*owners):
        seen += 1
        if seen > budget:
            exact = False
            break
        masks: dict = {}
        for lab, m in zip(labels, cmasks):
            masks[lab] = masks.get(lab, 0) | m
        order = _order_of_masks(list(masks.values()), nverts)
        if best is None or order < best:
            best, best_labels = order, labels
            if best == 0:
                break
    cover = cover_from_labels(c.spec, fine.r, [c.name(e) for e in best_labels], fine.cells)
    return RefinementResult(best, exact, cover)
