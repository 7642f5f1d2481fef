"""Følner sequences broken into portions, with exact tilings of later sets
by right translates of the tiles in an earlier portion.

Indices follow the usual 1-based convention: ``sets[n-1]`` is ``F_n`` and
portion ``i`` (0-based) holds ``F_k`` for ``bounds[i] < k <= bounds[i+1]``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .groups import GRID, LINE, FiniteSubset, GroupContext, Side, translate


class TilingError(ValueError):
    pass


@dataclass(frozen=True)
class FolnerData:
    sets: tuple[FiniteSubset, ...]
    bounds: tuple[int, ...]

    def __post_init__(self):
        if not self.sets:
            raise TilingError("empty Følner data")
        if not self.bounds or self.bounds[0] != 0:
            raise TilingError("portion boundaries must start at 0")
        if any(a >= b for a, b in zip(self.bounds, self.bounds[1:])):
            raise TilingError("portion boundaries must strictly increase")
        if self.bounds[-1] > len(self.sets):
            raise TilingError("portion boundary beyond the stored sets")
        e = self.group.identity
        for n, F in enumerate(self.sets, 1):
            if e not in F:
                raise TilingError(f"F_{n} does not contain the identity")

    @property
    def group(self) -> GroupContext:
        return self.sets[0].group

    def F(self, n: int) -> FiniteSubset:
        return self.sets[n - 1]

    @property
    def num_portions(self) -> int:
        return len(self.bounds) - 1

    def portion(self, i: int) -> range:
        return range(self.bounds[i] + 1, self.bounds[i + 1] + 1)


@dataclass(frozen=True)
class TilingScheme:
    folner: FolnerData
    centers: dict = field(default_factory=dict)  # (k, n) -> FiniteSubset

    @property
    def group(self) -> GroupContext:
        return self.folner.group

    def C(self, k: int, n: int) -> FiniteSubset:
        return self.centers.get((k, n), FiniteSubset(self.group))

    def represented(self, i: int, n: int) -> bool:
        return any((k, n) in self.centers for k in self.folner.portion(i))

    def checkable_pairs(self) -> Iterator[tuple[int, int]]:
        """Stored ``(portion, n)`` pairs subject to the tiling invariant, by n."""
        fd = self.folner
        for n in range(1, len(fd.sets) + 1):
            for i in range(fd.num_portions):
                if n > fd.bounds[i + 1] and self.represented(i, n):
                    yield i, n


@dataclass(frozen=True)
class Violation:
    n: int
    portion: int
    overlap: frozenset
    gap: frozenset
    extra: frozenset

    def __str__(self) -> str:
        parts = []
        for name in ("overlap", "gap", "extra"):
            vals = getattr(self, name)
            if vals:
                parts.append(f"{name} {sorted(vals)}")
        return f"tiling violation at n={self.n} (portion {self.portion}): " + ", ".join(parts)


def _translates(scheme: TilingScheme, i: int, n: int):
    for k in scheme.folner.portion(i):
        for c in scheme.C(k, n):
            yield k, c, translate(scheme.folner.F(k), c, Side.RIGHT)


def _check(scheme: TilingScheme, i: int, n: int) -> Violation | None:
    target = scheme.folner.F(n).as_set
    seen: set = set()
    overlap: set = set()
    for _, _, T in _translates(scheme, i, n):
        overlap |= seen & T.as_set
        seen |= T.as_set
    gap = target - seen
    extra = seen - target
    if overlap or gap or extra:
        return Violation(n, i, frozenset(overlap), frozenset(gap), frozenset(extra))
    return None


def verify_tiling(scheme: TilingScheme) -> Violation | None:
    """None when every stored ``(portion, n)`` pair tiles ``F_n`` exactly,
    else the first violation in order of n."""
    for i, n in scheme.checkable_pairs():
        v = _check(scheme, i, n)
        if v is not None:
            return v
    return None


def tile_decompose(F_n: FiniteSubset, scheme: TilingScheme, portion_index: int, n: int | None = None):
    """Split ``F_n`` into ``(k, c, F_k c)`` translates from one portion."""
    fd = scheme.folner
    if n is None:
        matches = [m for m, F in enumerate(fd.sets, 1) if F == F_n]
        if not matches:
            raise TilingError("set is not part of the scheme")
        n = matches[-1]
    if portion_index < 0 or portion_index >= fd.num_portions:
        raise TilingError(f"no portion {portion_index}")
    if n <= fd.bounds[portion_index + 1]:
        raise TilingError(f"F_{n} is not beyond portion {portion_index}")
    if not scheme.represented(portion_index, n):
        raise TilingError(f"scheme stores no centers for n={n}, portion {portion_index}")
    pieces = list(_translates(scheme, portion_index, n))
    v = _check(scheme, portion_index, n)
    if v is not None:
        raise TilingError(str(v))
    return pieces


def build_dyadic_tiling(depth: int) -> TilingScheme:
    """``F_k = {0..2^k-1}`` in singleton portions, ``C_{k,n} = 2^k {0..2^(n-k)-1}``."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    sets = tuple(FiniteSubset(LINE, range(2**k)) for k in range(1, depth + 1))
    centers = {
        (k, n): FiniteSubset(LINE, (2**k * c for c in range(2 ** (n - k))))
        for n in range(2, depth + 1)
        for k in range(1, n)
    }
    return TilingScheme(FolnerData(sets, tuple(range(depth + 1))), centers)


def build_box_tiling(depth: int) -> TilingScheme:
    """Planar analogue: ``F_k = {0..2^k-1}^2`` tiled by dyadic sub-boxes."""
    if depth < 2:
        raise ValueError("depth must be at least 2")
    sets = tuple(
        FiniteSubset(GRID, ((a, b) for a in range(2**k) for b in range(2**k)))
        for k in range(1, depth + 1)
    )
    centers = {}
    for n in range(2, depth + 1):
        for k in range(1, n):
            side = range(2 ** (n - k))
            centers[(k, n)] = FiniteSubset(GRID, ((2**k * a, 2**k * b) for a in side for b in side))
    return TilingScheme(FolnerData(sets, tuple(range(depth + 1))), centers)
