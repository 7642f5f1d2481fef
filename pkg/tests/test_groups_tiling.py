from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mdimlab.groups import (
    GRID,
    LINE,
    FiniteSubset,
    Side,
    box,
    folner_defect,
    interval,
    is_tempered,
    ow_limit,
    translate,
)
from mdimlab.tiling import (
    FolnerData,
    TilingError,
    TilingScheme,
    build_box_tiling,
    build_dyadic_tiling,
    tile_decompose,
    verify_tiling,
)

ints = st.integers(-50, 50)
pairs = st.tuples(ints, ints)


@given(ints, ints)
def test_line_length_axioms(g, h):
    assert LINE.length(LINE.identity) == 0
    assert LINE.length(LINE.compose(g, h)) <= LINE.length(g) + LINE.length(h)
    assert LINE.length(LINE.invert(g)) == LINE.length(g)


@given(pairs, pairs)
def test_grid_length_axioms(g, h):
    assert GRID.length(GRID.identity) == 0
    assert GRID.length(GRID.compose(g, h)) <= GRID.length(g) + GRID.length(h)
    assert GRID.length(GRID.invert(g)) == GRID.length(g)
    assert GRID.compose(g, GRID.invert(g)) == GRID.identity


@given(st.sets(ints, min_size=1, max_size=20), ints, st.sampled_from(list(Side)))
def test_translate_preserves_size(els, g, side):
    F = FiniteSubset(LINE, els)
    assert len(translate(F, g, side)) == len(F)
    assert folner_defect(F, LINE.identity) == 0


def test_folner_defects_fall():
    scheme = build_dyadic_tiling(6)
    defects = [folner_defect(F, 1) for F in scheme.folner.sets]
    assert defects == sorted(defects, reverse=True)
    assert defects[-1] < Fraction(1, 10)
    boxes = build_box_tiling(4).folner.sets
    assert folner_defect(boxes[-1], (1, 0)) == folner_defect(boxes[-1], (0, 1)) == Fraction(2, 16)


@pytest.mark.parametrize("depth", range(2, 7))
def test_dyadic_tilings_verify(depth):
    scheme = build_dyadic_tiling(depth)
    assert verify_tiling(scheme) is None
    assert all(0 in F for F in scheme.folner.sets)
    ok, worst = is_tempered(scheme.folner.sets, 2)
    assert ok and worst <= 2


@pytest.mark.parametrize("depth", [2, 3, 4])
def test_box_tilings_verify(depth):
    assert verify_tiling(build_box_tiling(depth)) is None


def corrupted():
    scheme = build_dyadic_tiling(3)
    centers = dict(scheme.centers)
    centers[(2, 3)] = FiniteSubset(LINE, [0, 3])
    return TilingScheme(scheme.folner, centers)


def test_corrupted_centers_are_reported():
    v = verify_tiling(corrupted())
    assert v is not None and v.n == 3
    assert v.overlap == {3}
    assert "overlap [3]" in str(v)


def test_decompose_partitions_f_n():
    scheme = build_dyadic_tiling(5)
    pieces = tile_decompose(scheme.folner.F(5), scheme, 1, 5)
    union = set()
    for k, c, T in pieces:
        assert not (union & T.as_set)
        union |= T.as_set
        assert T == translate(scheme.folner.F(k), c)
    assert union == set(range(32))
    with pytest.raises(TilingError):
        tile_decompose(corrupted().folner.F(3), corrupted(), 1, 3)


def test_untempered_sequence_detected():
    # intervals drifting away from the origin violate temperedness with M=2
    sets = [interval(0, 1)] + [interval(10 * n, 10 * n + 2) for n in range(1, 5)]
    ok, worst = is_tempered(sets, 2)
    assert not ok and worst > 2


def test_folner_data_validates_portions():
    with pytest.raises(TilingError):
        FolnerData((interval(0, 2), interval(0, 4)), (0, 2, 1))


def test_ow_limit_is_exact_for_integers():
    sets = [box(n) for n in range(1, 4)]
    assert ow_limit(len, sets) == [1, 1, 1]
    assert all(isinstance(v, Fraction) for v in ow_limit(len, sets))
