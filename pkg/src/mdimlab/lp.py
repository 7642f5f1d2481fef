"""Exact linear programming over the rationals.

Two-phase primal simplex on a sparse integer tableau (one dict per row, one
common denominator per row). Entering variables are priced by Dantzig's rule;
after a run of degenerate pivots the solver switches to Bland's rule, which
cannot cycle. Optimal values are exact rationals, so primal/dual comparisons
need no tolerance.

Problems are stated as::

    minimize    c . x
    subject to  A_eq x == b_eq
                A_ub x <= b_ub
                x >= 0

Constraint rows may be dense sequences or sparse ``{column: coefficient}``
dicts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

Row = Union[Sequence, Mapping[int, object]]

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


class LPError(RuntimeError):
    pass


@dataclass
class LPResult:
    status: str
    x: list[Fraction] = field(default_factory=list)
    value: Fraction | None = None
    pivots: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == OPTIMAL


def _sparse(row: Row) -> dict[int, Fraction]:
    if isinstance(row, Mapping):
        items = row.items()
    else:
        items = enumerate(row)
    return {int(j): Fraction(v) for j, v in items if v != 0}


class _Tableau:
    """Integer tableau: row ``i`` stands for ``rows[i] / den[i]``.

    Keeping one positive denominator per row turns every update into native
    integer arithmetic; rows are reduced by their gcd after each change. The
    objective is stored the same way, with ``-value`` in its right-hand side.
    """

    def __init__(self, rows, rhs, basis):
        self.rows: list[dict[int, int]] = []
        self.rhs: list[int] = []
        self.den: list[int] = []
        for row, b in zip(rows, rhs):
            n, r, d = _integral(row, b)
            self.rows.append(n)
            self.rhs.append(r)
            self.den.append(d)
        self.basis: list[int] = basis
        self.cost: dict[int, int] = {}
        self.cost_rhs = 0
        self.cost_den = 1
        self.pivots = 0

    @property
    def value(self) -> Fraction:
        return Fraction(-self.cost_rhs, self.cost_den)

    def rhs_value(self, r: int) -> Fraction:
        return Fraction(self.rhs[r], self.den[r])

    def set_objective(self, c: Mapping[int, Fraction]) -> None:
        # express the objective in terms of the current nonbasic variables
        cost = {j: Fraction(v) for j, v in c.items()}
        neg_value = Fraction(0)
        for r, b in enumerate(self.basis):
            cb = cost.get(b)
            if not cb:
                continue
            f = cb / self.den[r]
            neg_value -= f * self.rhs[r]
            for j, a in self.rows[r].items():
                v = cost.get(j, 0) - f * a
                if v:
                    cost[j] = v
                else:
                    cost.pop(j, None)
        for b in self.basis:
            cost.pop(b, None)
        self.cost, self.cost_rhs, self.cost_den = _integral(cost, neg_value)

    def _eliminate(self, n, rhs, d, s, prow, prhs, p):
        # returns (n, rhs, d) minus (n[s]/d) times the pivot row (prow/p)
        q = n[s]
        out = {j: a * p for j, a in n.items()}
        for j, a in prow.items():
            v = out.get(j, 0) - q * a
            if v:
                out[j] = v
            else:
                del out[j]
        rhs = rhs * p - q * prhs
        d = d * p
        g = math.gcd(d, rhs, *out.values())
        if g > 1:
            out = {j: a // g for j, a in out.items()}
            rhs //= g
            d //= g
        return out, rhs, d

    def pivot(self, r: int, s: int) -> None:
        prow = self.rows[r]
        p = prow[s]
        if p < 0:
            prow = {j: -a for j, a in prow.items()}
            self.rhs[r] = -self.rhs[r]
            p = -p
        g = math.gcd(p, self.rhs[r], *prow.values())
        if g > 1:
            prow = {j: a // g for j, a in prow.items()}
            self.rhs[r] //= g
            p //= g
        self.rows[r] = prow
        self.den[r] = p
        prhs = self.rhs[r]
        for i, n in enumerate(self.rows):
            if i != r and s in n:
                self.rows[i], self.rhs[i], self.den[i] = self._eliminate(
                    n, self.rhs[i], self.den[i], s, prow, prhs, p
                )
        if s in self.cost:
            self.cost, self.cost_rhs, self.cost_den = self._eliminate(
                self.cost, self.cost_rhs, self.cost_den, s, prow, prhs, p
            )
        self.basis[r] = s
        self.pivots += 1

    def run(self, max_pivots=None, stall_limit=50) -> str:
        # Dantzig pricing; after stall_limit consecutive degenerate pivots
        # fall back to Bland's rule, which cannot cycle.
        stalled = 0
        while True:
            if max_pivots is not None and self.pivots >= max_pivots:
                raise LPError("pivot limit reached")
            negative = [(d, j) for j, d in self.cost.items() if d < 0]
            if not negative:
                return OPTIMAL
            if stalled >= stall_limit:
                entering = min(j for _, j in negative)
            else:
                entering = min(negative)[1]
            leave = None
            best_num = best_den = 0
            for r, row in enumerate(self.rows):
                a = row.get(entering)
                if a is None or a <= 0:
                    continue
                # ratio rhs/a; both share the row denominator
                num = self.rhs[r]
                if leave is None:
                    better = True
                else:
                    lhs, rhs = num * best_den, best_num * a
                    better = lhs < rhs or (
                        lhs == rhs and self.basis[r] < self.basis[leave]
                    )
                if better:
                    leave, best_num, best_den = r, num, a
            if leave is None:
                return UNBOUNDED
            stalled = stalled + 1 if best_num == 0 else 0
            self.pivot(leave, entering)


def _integral(row: Mapping[int, Fraction], rhs) -> tuple[dict[int, int], int, int]:
    values = [Fraction(v) for v in row.values()] + [Fraction(rhs)]
    d = 1
    for v in values:
        d = d * v.denominator // math.gcd(d, v.denominator)
    n = {j: int(Fraction(v) * d) for j, v in row.items() if v}
    return n, int(Fraction(rhs) * d), d


def solve(
    c: Sequence,
    A_eq: Sequence[Row] = (),
    b_eq: Sequence = (),
    A_ub: Sequence[Row] = (),
    b_ub: Sequence = (),
    maximize: bool = False,
    max_pivots: int | None = None,
) -> LPResult:
    """Solve a linear program exactly; variables are non-negative."""
    if len(A_eq) != len(b_eq) or len(A_ub) != len(b_ub):
        raise ValueError("constraint rows and right-hand sides differ in length")
    n = len(c)
    cost = {j: Fraction(v) for j, v in enumerate(c) if v != 0}
    if maximize:
        cost = {j: -v for j, v in cost.items()}

    rows: list[dict[int, Fraction]] = []
    rhs: list[Fraction] = []
    basis: list[int] = []
    needs_artificial: list[int] = []
    nxt = n
    for a, b in zip(A_ub, b_ub):
        row, b = _sparse(a), Fraction(b)
        if any(j >= n or j < 0 for j in row):
            raise ValueError("constraint column out of range")
        slack = nxt
        nxt += 1
        if b >= 0:
            row[slack] = Fraction(1)
            basis.append(slack)
        else:
            row = {j: -v for j, v in row.items()}
            row[slack] = Fraction(-1)
            b = -b
            basis.append(-1)
            needs_artificial.append(len(rows))
        rows.append(row)
        rhs.append(b)
    for a, b in zip(A_eq, b_eq):
        row, b = _sparse(a), Fraction(b)
        if any(j >= n or j < 0 for j in row):
            raise ValueError("constraint column out of range")
        if b < 0:
            row = {j: -v for j, v in row.items()}
            b = -b
        basis.append(-1)
        needs_artificial.append(len(rows))
        rows.append(row)
        rhs.append(b)

    first_art = nxt
    for r in needs_artificial:
        rows[r][nxt] = Fraction(1)
        basis[r] = nxt
        nxt += 1
    total = nxt
    tab = _Tableau(rows, rhs, basis)

    if needs_artificial:
        tab.set_objective({j: Fraction(1) for j in range(first_art, total)})
        tab.run(max_pivots=max_pivots)
        if tab.value > 0:
            return LPResult(INFEASIBLE, pivots=tab.pivots)
        # drive zero-level artificials out of the basis; drop redundant rows
        r = 0
        while r < len(tab.rows):
            if tab.basis[r] >= first_art:
                candidates = sorted(j for j in tab.rows[r] if j < first_art)
                if candidates:
                    tab.pivot(r, candidates[0])
                else:
                    del tab.rows[r], tab.rhs[r], tab.den[r], tab.basis[r]
                    continue
            r += 1
        for row in tab.rows:
            for j in [j for j in row if j >= first_art]:
                del row[j]

    tab.set_objective(cost)
    status = tab.run(max_pivots=max_pivots)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, pivots=tab.pivots)
    x = [Fraction(0)] * n
    for r, b in enumerate(tab.basis):
        if b < n:
            x[b] = tab.rhs_value(r)
    value = tab.value
    if maximize:
        value = -value
    return LPResult(OPTIMAL, x, value, tab.pivots)
