import itertools
import random
from fractions import Fraction

import pytest

from mdimlab.transport import DiscreteMeasure, FiniteMetric

_LINES = pytest.StashKey[dict]()


def pytest_configure(config):
    config.stash[_LINES] = {}


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line per acceptance criterion; the lines are
    printed together at the end of the run."""
    lines = request.config.stash[_LINES]

    def record(n: int, title: str, ok: bool, detail: str) -> None:
        lines[n] = f"{'PASS' if ok else 'FAIL'}  criterion {n}: {title}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_LINES, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(lines):
        terminalreporter.write_line(lines[n])


def shortest_path_metric(rng: random.Random, n: int, denom: int = 6) -> FiniteMetric:
    """Random rational metric: shortest paths over a complete graph with
    positive random edge weights."""
    pts = [f"p{a}" for a in range(n)]
    d = [[Fraction(0) if a == b else None for b in range(n)] for a in range(n)]
    for a, b in itertools.combinations(range(n), 2):
        d[a][b] = d[b][a] = Fraction(rng.randint(1, 4 * denom), denom)
    for m in range(n):
        for a in range(n):
            for b in range(n):
                if d[a][m] + d[m][b] < d[a][b]:
                    d[a][b] = d[a][m] + d[m][b]
    table = {(pts[a], pts[b]): d[a][b] for a in range(n) for b in range(n)}
    return FiniteMetric(pts, table)


def random_measure(rng: random.Random, points, max_support: int | None = None, denom: int = 10) -> DiscreteMeasure:
    points = list(points)
    size = rng.randint(1, max_support or len(points))
    chosen = rng.sample(points, min(size, len(points)))
    w = [rng.randint(1, denom) for _ in chosen]
    s = sum(w)
    return DiscreteMeasure({p: Fraction(v, s) for p, v in zip(chosen, w)})


@pytest.fixture
def rng():
    return random.Random(0)
