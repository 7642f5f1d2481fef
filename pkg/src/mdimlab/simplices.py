"""Products of simplices, their faces and boundary.

Vertices of ``Δ_k`` are indexed ``0..k-1``. A face of factor ``i`` is given
by the index set ``I`` of vertices it spans: it is the set of points with
``sum_{j in I} x_{i,j} = 1``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class SimplexError(ValueError):
    pass


@dataclass(frozen=True)
class ProductSpec:
    ks: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "ks", tuple(int(k) for k in self.ks))
        if not self.ks or any(k < 2 for k in self.ks):
            raise SimplexError("every factor needs k >= 2")

    @property
    def dim(self) -> int:
        return sum(k - 1 for k in self.ks)

    @property
    def sum_k_bound(self) -> int:
        return sum(self.ks)

    def __str__(self) -> str:
        return "x".join(f"Δ_{k}" for k in self.ks)


@dataclass(frozen=True)
class FaceRef:
    i: int
    I: frozenset

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        if not self.I:
            raise SimplexError("a face needs a non-empty index set")

    def dim_in(self, k: int) -> int:
        return len(self.I) - 1

    def __repr__(self) -> str:
        return f"FaceRef({self.i}, {sorted(self.I)})"


def facet(i: int, k: int, removed: int) -> FaceRef:
    """The (k-1)-face ``{x_{i,removed} = 0}`` of factor ``i``."""
    return FaceRef(i, frozenset(range(k)) - {removed})


def opposite_face(f: FaceRef, k: int) -> FaceRef:
    rest = frozenset(range(k)) - f.I
    if not rest:
        raise SimplexError("the whole simplex has no opposite face")
    return FaceRef(f.i, rest)


def face_intersection(faces: Sequence[FaceRef]) -> FaceRef | None:
    """Intersection of faces of one factor; None when empty."""
    if not faces:
        raise SimplexError("no faces given")
    if len({f.i for f in faces}) != 1:
        raise SimplexError("faces belong to different factors")
    I = frozenset.intersection(*(f.I for f in faces))
    return FaceRef(faces[0].i, I) if I else None


@dataclass(frozen=True)
class ProductPoint:
    coords: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        coords = tuple(tuple(Fraction(v) for v in x) for x in self.coords)
        for x in coords:
            if any(v < 0 for v in x) or sum(x) != 1:
                raise SimplexError(f"not a point of the simplex: {x}")
        object.__setattr__(self, "coords", coords)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    def fits(self, spec: ProductSpec) -> bool:
        return tuple(len(x) for x in self.coords) == spec.ks

    def to_list(self) -> list[list[str]]:
        return [[str(v) for v in x] for x in self.coords]


def vertex(k: int, j: int) -> tuple[Fraction, ...]:
    return tuple(Fraction(int(a == j)) for a in range(k))


def center(k: int) -> tuple[Fraction, ...]:
    return (Fraction(1, k),) * k


def product_vertex(spec: ProductSpec, js: Sequence[int]) -> ProductPoint:
    return ProductPoint(tuple(vertex(k, j) for k, j in zip(spec.ks, js)))


def is_in_face(x: ProductPoint, f: FaceRef) -> bool:
    return sum(x[f.i][j] for j in f.I) == 1


def on_boundary(x: ProductPoint) -> bool:
    return any(v == 0 for xi in x.coords for v in xi)


def boundary_facets(x: ProductPoint) -> list[FaceRef]:
    """The (k_i-1)-faces containing ``x``."""
    return [facet(i, len(xi), j) for i, xi in enumerate(x.coords) for j, v in enumerate(xi) if v == 0]


def random_simplex_point(rng, k: int, denom: int = 12, zero: Iterable[int] = ()) -> tuple[Fraction, ...]:
    """Random rational point of ``Δ_k`` with the given coordinates zero."""
    zero = set(zero)
    if len(zero) >= k:
        raise SimplexError("cannot zero every coordinate")
    w = [0 if j in zero else rng.randint(1, denom) for j in range(k)]
    s = sum(w)
    return tuple(Fraction(v, s) for v in w)


def random_boundary_point(rng, spec: ProductSpec, denom: int = 12) -> ProductPoint:
    i = rng.randrange(len(spec.ks))
    coords = []
    for a, k in enumerate(spec.ks):
        if a == i:
            coords.append(random_simplex_point(rng, k, denom, zero=[rng.randrange(k)]))
        else:
            coords.append(random_simplex_point(rng, k, denom))
    return ProductPoint(tuple(coords))
