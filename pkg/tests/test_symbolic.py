import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from mdimlab.groups import GRID, LINE, FiniteSubset, box, interval
from mdimlab.symbolic import (
    Configuration,
    Cylinder,
    RealizationError,
    SubshiftError,
    SubshiftSpec,
    count_patterns,
    cylinder_distance,
    exact_radius,
    exact_shift_distance,
    find_independence_set,
    full_shift,
    golden_mean,
    independence_witness,
    is_admissible,
    realize,
    realize_witness,
    shift_metric,
)

U0, U1 = Cylinder("0"), Cylinder("1")


def golden_words(n):
    return ["".join(w) for w in itertools.product("01", repeat=n) if "11" not in "".join(w)]


def fib(n):
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def brute_max_independent(n):
    """Largest J in {0..n-1} on which all 0/1 patterns occur in golden-mean words."""
    words = golden_words(n)
    for size in range(n, 0, -1):
        for J in itertools.combinations(range(n), size):
            seen = {tuple(w[j] for j in J) for w in words}
            if len(seen) == 2**size:
                return size
    return 0


@pytest.mark.parametrize("n", range(1, 13))
def test_golden_counts_match_enumeration(n):
    assert count_patterns(golden_mean(), interval(0, n)) == len(golden_words(n)) == fib(n + 2)


def test_full_shift_counts():
    assert count_patterns(full_shift(), interval(0, 9)) == 2**9
    assert count_patterns(full_shift("abc", GRID), box(2)) == 3**4


@pytest.mark.parametrize("n", range(1, 9))
def test_golden_independence_is_maximal(n):
    rec = find_independence_set(golden_mean(), U0, U1, interval(0, n), n=n)
    assert rec.certified and rec.optimal
    assert len(rec.J) == brute_max_independent(n)
    assert all(b - a >= 2 for a, b in zip(rec.J, rec.J[1:]))


def test_full_shift_independence_is_everything():
    F = interval(0, 12)
    rec = find_independence_set(full_shift(), U0, U1, F)
    assert rec.J == tuple(range(12)) and rec.delta == 1 and rec.certified
    rec2 = find_independence_set(full_shift(group=GRID), U0, U1, box(3))
    assert len(rec2.J) == 9


def test_budget_limits_certification():
    # 2^12 assignments do not fit a budget of 100: greedy and not optimal
    rec = find_independence_set(full_shift(), U0, U1, interval(0, 12), budget=100)
    assert not rec.optimal
    assert 2 ** len(rec.J) <= 100 + 2


def test_witness_reverifies():
    sets = [interval(0, n) for n in range(1, 9)]
    w = independence_witness(golden_mean(), sets, U0, U1)
    assert w.reverify()
    mins = w.running_min()
    assert mins == sorted(mins, reverse=True)
    assert mins[-1] == Fraction(1, 2)


def test_realize_blocked_reports_the_word():
    with pytest.raises(RealizationError, match="'11'"):
        realize(golden_mean(), {0: "1", 1: "1"})


@given(st.dictionaries(st.integers(-6, 6), st.sampled_from("01"), min_size=1, max_size=6))
def test_realized_points_are_admissible(assignment):
    spec = golden_mean()
    blocked = any(assignment.get(g + 1) == "1" and s == "1" for g, s in assignment.items())
    if blocked:
        with pytest.raises(RealizationError):
            realize(spec, assignment)
        return
    x = realize(spec, assignment)
    assert is_admissible(spec, x)
    assert all(x(g) == s for g, s in assignment.items())


def random_periodic(rng, spec):
    J = sorted(rng.sample(range(-5, 6), rng.randint(1, 4)))
    zeta = [rng.randint(0, 1) for _ in J]
    try:
        return realize_witness(spec, J, zeta, U0, U1)
    except RealizationError:
        return realize(spec, {0: "0"})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_shift_metric_is_an_ultrametric(seed):
    rng = random.Random(seed)
    spec = rng.choice([golden_mean(), full_shift()])
    x, y, z = (random_periodic(rng, spec) for _ in range(3))
    dxy, dyz, dxz = (exact_shift_distance(a, b) for a, b in ((x, y), (y, z), (x, z)))
    assert dxy == exact_shift_distance(y, x)
    assert dxz <= max(dxy, dyz)
    assert (dxy == 0) == (x.key() == y.key() or all(x(g) == y(g) for g in range(-40, 41)))


def test_truncated_radius_is_flagged():
    x = Configuration(LINE, (0,), (8,), {(a,): "0" for a in range(8)})
    cells = {(a,): "0" for a in range(8)}
    cells[(5,)] = "1"
    y = Configuration(LINE, (0,), (8,), cells)
    assert shift_metric(x, y, 2).exact is False
    d = shift_metric(x, y, exact_radius(x, y))
    assert d.exact and d.value == Fraction(1, 2**3)


def test_cylinder_distance():
    assert cylinder_distance(U0, U1) == 1
    x, y = realize(golden_mean(), {0: "0"}), realize(golden_mean(), {0: "1"})
    assert exact_shift_distance(x, y) == 1


def test_shift_convention():
    x = realize(full_shift(), {0: "1", 1: "0", 2: "0"})
    # (g x)_h = x_{h+g}
    assert x.shift(2)(0) == x(2) and x.shift(-1)(1) == x(0)


def test_spec_validation():
    with pytest.raises(SubshiftError):
        SubshiftSpec("0")
    with pytest.raises(SubshiftError):
        SubshiftSpec("01", LINE, ("12",))
    with pytest.raises(SubshiftError):
        find_independence_set(full_shift(), U0, U0, interval(0, 2))
    spec = golden_mean()
    assert SubshiftSpec.from_dict(spec.to_dict()) == spec
