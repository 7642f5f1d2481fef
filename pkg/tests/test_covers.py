import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mdimlab.covers import (
    CoverError,
    GridCover,
    boundary_claim_check,
    boundary_samples,
    brickwork,
    cell_vertices,
    cover_from_labels,
    cover_order,
    g_map,
    grid,
    is_separating,
    min_order_refinement,
    min_separating_order,
    partition_weights,
    segment_cover,
    set_partitions,
)
from mdimlab.simplices import (
    FaceRef,
    ProductPoint,
    ProductSpec,
    SimplexError,
    face_intersection,
    facet,
    opposite_face,
    random_boundary_point,
)


def element_vertices(cover, e):
    r = cover.resolution
    out = set()
    for cell in cover.elements[e]:
        for combo in itertools.product(*(cell_vertices(a, r) for a in cell)):
            out.add(combo)
    return out


def brute_separating(cover) -> bool:
    """Every subfamily of distinct elements with one facet each: the common
    part of the elements must miss the face opposite the facets' meet."""
    spec = cover.spec
    verts = [element_vertices(cover, e) for e in range(len(cover.elements))]
    for i, k in enumerate(spec.ks):
        touches = [{u for u in range(k) if any(v[i][u] == 0 for v in vs)} for vs in verts]
        for m in range(1, k):
            for fam in itertools.permutations(range(len(verts)), m):
                for us in itertools.product(range(k), repeat=m):
                    if any(u not in touches[e] for e, u in zip(fam, us)):
                        continue
                    removed = set(us)
                    if len(removed) == k:
                        continue
                    common = set.intersection(*(verts[e] for e in fam))
                    # in the opposite face: all mass of factor i on removed indices
                    if any(all(v[i][j] == 0 for j in range(k) if j not in removed) for v in common):
                        return False
    return True


@given(st.integers(2, 5), st.data())
def test_face_algebra(k, data):
    I = data.draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=k - 1))
    f = FaceRef(0, I)
    assert opposite_face(opposite_face(f, k), k) == f
    removed = data.draw(st.sets(st.integers(0, k - 1), min_size=1, max_size=k))
    meet = face_intersection([facet(0, k, u) for u in removed])
    if len(removed) == k:
        assert meet is None
    else:
        assert len(meet.I) == k - len(removed)


def test_product_spec():
    assert ProductSpec((2, 3)).dim == 3
    with pytest.raises(SimplexError):
        ProductSpec((1,))
    with pytest.raises(SimplexError):
        ProductPoint(((Fraction(1, 2), Fraction(1, 3)),))


def test_known_covers():
    b = brickwork(["AABB", "CDDE", "FFGG", "HIIJ"])
    assert cover_order(b) == 2 and is_separating(b) is None
    s = segment_cover(5, [(0, 3), (2, 5)])
    assert cover_order(s) == 1 and is_separating(s) is None
    assert brute_separating(b) and brute_separating(s)


def test_single_element_fails_with_checkable_family():
    spec = ProductSpec((3,))
    c = cover_from_labels(spec, 2, [0] * len(grid(spec, 2).cells))
    bad = is_separating(c)
    assert bad is not None and bad.recheck(c)
    assert not brute_separating(c)


def hand_built_delta3(r=6):
    spec = ProductSpec((3,))
    g = grid(spec, r)
    labels = []
    for cell in g.cells:
        vs = cell_vertices(cell[0], r)
        x = [Fraction(sum(v[j] for v in vs), len(vs) * r) for j in range(3)]
        if max(x) >= Fraction(3, 5):
            labels.append(f"C{x.index(max(x))}")
        elif min(x) <= Fraction(1, 10):
            labels.append(f"E{x.index(min(x))}")
        else:
            labels.append("I")
    return cover_from_labels(spec, r, labels)


def test_hand_built_triangle_cover():
    c = hand_built_delta3()
    assert len(c.elements) == 7
    assert cover_order(c) == 2
    assert is_separating(c) is None
    assert brute_separating(c)
    assert boundary_claim_check(c, boundary_samples(c.spec, 300, random.Random(1))).ok


@settings(max_examples=150, deadline=None)
@given(st.sampled_from([(2,), (3,), (2, 2)]), st.integers(1, 3), st.integers(1, 5), st.integers(0, 2**32 - 1))
def test_separating_matches_brute_force(ks, r, nlab, seed):
    spec = ProductSpec(ks)
    rng = random.Random(seed)
    cells = grid(spec, r).cells
    c = cover_from_labels(spec, r, [rng.randrange(nlab) for _ in cells])
    bad = is_separating(c)
    assert (bad is None) == brute_separating(c)
    if bad is not None:
        assert bad.recheck(c)


def test_set_partitions_count():
    # Bell numbers with at most b blocks: S(5,1)+...+S(5,3) = 1+15+25
    assert sum(1 for _ in set_partitions(5, 3)) == 41
    assert sum(1 for _ in set_partitions(4, 4)) == 15


@pytest.mark.parametrize("ks", [(2,), (3,), (2, 2)])
def test_min_separating_order(ks):
    spec = ProductSpec(ks)
    res = min_separating_order(spec)
    assert res.min_order is not None and res.min_order >= spec.dim
    rng = random.Random(0)
    for w in res.witnesses:
        assert is_separating(w) is None and brute_separating(w)
        assert boundary_claim_check(w, boundary_samples(spec, 200, rng)).ok


def test_sum_k_bound_status():
    # recorded, never asserted: Δ_2 already has a separating cover of order 1
    res = min_separating_order(ProductSpec((2,)))
    assert res.min_order == 1 and res.sum_k_bound_holds is False


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_g_map_lands_in_the_product(seed):
    rng = random.Random(seed)
    c = rng.choice([brickwork(["AABB", "CDDE", "FFGG", "HIIJ"]), hand_built_delta3()])
    x = random_boundary_point(rng, c.spec, 24)
    y = g_map(c, x)
    assert all(sum(yi) == 1 and min(yi) >= 0 for yi in y.coords)
    w = partition_weights(c, x)
    assert min(w) >= 0 and sum(w) > 0


def test_claim_check_refuses_non_separating():
    spec = ProductSpec((2,))
    c = cover_from_labels(spec, 1, [0])
    with pytest.raises(CoverError):
        boundary_claim_check(c, boundary_samples(spec, 4, random.Random(0)))


def test_refinement():
    c = segment_cover(4, [(0, 3), (1, 4)])
    res = min_order_refinement(c)
    assert res.exact and res.value == 1
    assert cover_order(res.cover) == res.value
    assert cover_order(res.cover) <= cover_order(c)


def test_round_trip():
    c = hand_built_delta3()
    assert GridCover.from_dict(c.to_dict()) == c
    d = c.to_dict()
    d["incidence"] = [[[0]] for _ in d["elements"]]
    with pytest.raises(CoverError):
        GridCover.from_dict(d)
