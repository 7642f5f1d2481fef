import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mdimlab import meandim as md
from mdimlab.groups import LINE, FiniteSubset, interval
from mdimlab.symbolic import Cylinder, full_shift, golden_mean
from mdimlab.tiling import FolnerData, TilingScheme, build_dyadic_tiling, tile_decompose
from mdimlab.transport import dynamical_wasserstein, mix

U0, U1 = Cylinder("0"), Cylinder("1")


def two_block_scheme():
    sets = (FiniteSubset(LINE, [0]), FiniteSubset(LINE, [0, 1]))
    return TilingScheme(FolnerData(sets, (0, 1, 2)), {(1, 2): FiniteSubset(LINE, [0, 1])})


@pytest.fixture(scope="module")
def small():
    return md.build_instance(full_shift(), two_block_scheme(), 0, 2, U0, U1)


@pytest.fixture(scope="module")
def four():
    return md.build_instance(full_shift(), build_dyadic_tiling(2), 0, 2, U0, U1)


def test_instance_shapes(small, four):
    assert small.ks == (2, 2) and small.gamma == 1 and small.epsilon == Fraction(1, 4)
    assert four.ks == (4, 4) and four.gamma == Fraction(1, 2) and four.epsilon == Fraction(1, 32)
    for inst in (small, four):
        assert sum(math.log2(k) for k in inst.ks) == len(inst.J)
        assert math.prod(inst.ks) == 2 ** len(inst.J) == len(inst.points)
        # every witness sits in the prescribed cylinders
        for wid, x in inst.points.items():
            assert all(x(g) == ("0", "1")[int(b)] for g, b in zip(inst.J, wid))


def test_formula_values():
    assert md.gamma_i([FiniteSubset(LINE, [0, 1, 2])]) == Fraction(1, 4)
    assert md.epsilon_i(1, 1, [2]) == Fraction(1, 8)
    assert md.mdim_lower_bound(1, [16]) == 8
    assert md.dim_lower_bound(1, [2, 4], [3, 1]) == 2 * 3 + 4 * 1


def test_slot_reads_block_bits(four):
    # block 0 holds J elements 0,1 and block 1 holds 2,3
    assert four.slot("1011", 0) == 2 and four.slot("1011", 1) == 3


def test_restrict_tiling_rejects_bad_j():
    scheme = build_dyadic_tiling(3)
    pieces = tile_decompose(scheme.folner.F(3), scheme, 0, 3)
    with pytest.raises(md.BoundError):
        md.restrict_tiling([0, 99], pieces)
    blocks = md.restrict_tiling([0, 2, 3, 6], pieces)
    assert [b.members for b in blocks] == [(0,), (2, 3), (), (6,)]


def test_theta_embed():
    t = md.theta_embed([(Fraction(1, 2), Fraction(1, 2)), (Fraction(1, 3), Fraction(2, 3))])
    assert t == (Fraction(1, 6), Fraction(1, 3), Fraction(1, 6), Fraction(1, 3))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_xi_is_multi_affine(seed):
    rng = random.Random(seed)
    inst = md.build_instance(full_shift(), build_dyadic_tiling(2), 0, 2, U0, U1)
    ts = list(md.random_point(inst, rng, support=4))
    m = rng.randrange(len(inst.blocks))
    a, b = md.random_slot(rng, inst.blocks[m].k), md.random_slot(rng, inst.blocks[m].k)
    lam = Fraction(rng.randint(0, 8), 8)
    ta, tb, tc = list(ts), list(ts), list(ts)
    ta[m], tb[m] = a, b
    tc[m] = tuple(lam * x + (1 - lam) * y for x, y in zip(a, b))
    parts = [(w, md.xi_embed(inst, t)) for w, t in ((lam, ta), (1 - lam, tb)) if w]
    assert md.xi_embed(inst, tc) == mix(parts)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decomposition_reconstructs(seed):
    rng = random.Random(seed)
    inst = md.build_instance(full_shift(), build_dyadic_tiling(2), 0, 2, U0, U1)
    ts = md.random_point(inst, rng, support=3)
    m = rng.randrange(len(inst.blocks))
    I = rng.sample(range(4), rng.randint(1, 3))
    d = md.decompose_measure(inst, ts, m, I)
    mu = md.xi_embed(inst, ts)
    assert md.reconstruct(d) == mu
    assert d.lam == mu.mass(inst.face_support(m, I))


def test_lemma_checks(four, rng):
    for _ in range(6):
        ts = md.random_point(four, rng)
        m = rng.randrange(2)
        I = rng.sample(range(4), rng.randint(1, 3))
        r = md.lemma42_check(four, ts, m, I)
        assert r.ok and r.lb <= r.ub
    # close to the facet {t_{0,0} = 0}: the premise applies
    ts = ((Fraction(1, 100), Fraction(99, 100), 0, 0), (Fraction(1, 2), Fraction(1, 2), 0, 0))
    r3 = md.lemma43_check(four, ts, 0, {0}, four.epsilon)
    assert r3.premise and r3.ok


def test_lp_distance_is_a_lower_bound(small, rng):
    for _ in range(10):
        ts = md.random_point(small, rng)
        mu = md.xi_embed(small, ts)
        _, nu = md._face_witness(small, ts, 0, frozenset({1}))
        assert md.lp_distance_to_support(small, mu, small.face_support(0, {1})) <= \
            dynamical_wasserstein(mu, nu, small.action)[0]


def test_lemma45(four):
    assert md.lemma45_check(len(four.F_n), len(four.J), four.delta, four.blocks)
    with pytest.raises(md.BoundError):
        md.lemma45_check(10, 2, Fraction(1, 2), four.blocks)


def test_select_dense_uses_half_delta():
    scheme = build_dyadic_tiling(3)
    blocks = md.restrict_tiling([0, 2, 3, 6], tile_decompose(scheme.folner.F(3), scheme, 0, 3))
    dense = md.select_dense_tiles(blocks, Fraction(1, 2))
    assert list(dense[1]) == [0, 2, 6]


@given(st.fractions(min_value=Fraction(1, 100), max_value=1), st.fractions(min_value=Fraction(1, 100), max_value=1),
       st.lists(st.integers(1, 40), min_size=1, max_size=4))
def test_mdim_bound_monotone_in_delta(a, b, sizes):
    lo, hi = sorted((a, b))
    assert 0 <= md.mdim_lower_bound(lo, sizes) <= md.mdim_lower_bound(hi, sizes)


@given(st.lists(st.tuples(st.integers(1, 30), st.integers(0, 10)), min_size=1, max_size=4), st.integers(0, 3))
def test_dim_bound_monotone_in_counts(rows, which):
    sizes = [s for s, _ in rows]
    counts = [c for _, c in rows]
    more = list(counts)
    more[which % len(more)] += 1
    assert md.dim_lower_bound(1, sizes, counts) <= md.dim_lower_bound(1, sizes, more)


def test_probe_detects_big_balls(four, rng):
    pts = [md.random_point(four, rng) for _ in range(6)]
    D = md.pairwise_wf(four, [md.xi_embed(four, t) for t in pts])
    small_balls = md.greedy_balls(D, four.epsilon / 2)
    probe = md.lemma44_probe(four, pts, small_balls, D)
    assert probe.ok and probe.max_diameter <= four.epsilon
    one = md.lemma44_probe(four, pts, [list(range(len(pts)))], D)
    assert not one.ok
    assert one.max_diameter == max(max(row) for row in D)


def test_gamma_holds_on_samples(rng):
    sets = [interval(0, 3)]
    g = md.verify_gamma(golden_mean(), sets, md.gamma_i(sets), 100, rng)
    assert g.ok and g.pairs > 0


def test_bound_report_full_shift():
    rep = md.bound_report(full_shift(), build_dyadic_tiling(4))
    assert all(r.lemma45 and r.certified and r.delta_n == 1 for r in rep.rows)
    assert [p.mdim_bound for p in rep.portions] == [Fraction(1, 2), Fraction(1, 2), 1, 8]
    golden = md.bound_report(golden_mean(), build_dyadic_tiling(4))
    assert all(r.lemma45 for r in golden.rows)
    assert min(r.delta_n for r in golden.rows) == Fraction(1, 2)
