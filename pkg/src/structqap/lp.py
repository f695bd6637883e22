"""Exact linear feasibility over the rationals.

A dense phase-1 simplex with Bland's anti-cycling rule.  Only feasibility is
needed by the callers, so there is no phase 2.  Problem sizes are small
(a few hundred columns at most), so a plain tableau of Fractions is fine.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = Sequence[Fraction | int]


def find_feasible(
    n_vars: int,
    eq: Sequence[tuple[Row, Fraction | int]] = (),
    le: Sequence[tuple[Row, Fraction | int]] = (),
    free: Sequence[int] = (),
) -> list[Fraction] | None:
    """Return ``x`` with ``row . x == rhs`` for ``eq``, ``row . x <= rhs`` for ``le``.

    Variables are nonnegative unless listed in ``free``.  Returns ``None`` when
    the system has no solution.
    """
    free = sorted(set(free))
    # column layout: original vars, negative parts of free vars, slacks
    neg_col = {j: n_vars + k for k, j in enumerate(free)}
    n_struct = n_vars + len(free)
    n_slack = len(le)
    width = n_struct + n_slack

    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []

    def expand(coeffs: Row) -> list[Fraction]:
        if len(coeffs) != n_vars:
            raise ValueError(f"constraint has {len(coeffs)} coefficients, expected {n_vars}")
        r = [Fraction(0)] * width
        for j, c in enumerate(coeffs):
            if c:
                r[j] = Fraction(c)
                if j in neg_col:
                    r[neg_col[j]] = -Fraction(c)
        return r

    for coeffs, b in eq:
        rows.append(expand(coeffs))
        rhs.append(Fraction(b))
    for k, (coeffs, b) in enumerate(le):
        r = expand(coeffs)
        r[n_struct + k] = Fraction(1)
        rows.append(r)
        rhs.append(Fraction(b))

    sol = _phase_one(rows, rhs, width)
    if sol is None:
        return None
    x = sol[:n_vars]
    for j, c in neg_col.items():
        x[j] -= sol[c]
    return x


def _phase_one(rows: list[list[Fraction]], rhs: list[Fraction], width: int) -> list[Fraction] | None:
    m = len(rows)
    if m == 0:
        return [Fraction(0)] * width
    for i in range(m):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
    total = width + m
    # tableau rows: coefficients over all columns (artificials appended), then rhs
    tab = [rows[i] + [Fraction(int(k == i)) for k in range(m)] + [rhs[i]] for i in range(m)]
    basis = [width + i for i in range(m)]
    # reduced costs of "minimize sum of artificials"
    cost = [Fraction(0)] * (total + 1)
    for i in range(m):
        for j in range(width):
            cost[j] -= tab[i][j]
        cost[total] -= tab[i][total]

    while True:
        enter = next((j for j in range(total) if cost[j] < 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][total] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            # cannot happen: phase-1 objective is bounded below by zero
            raise ArithmeticError("unbounded phase-1 problem")
        _pivot(tab, cost, leave, enter)
        basis[leave] = enter

    if cost[total] != 0:
        return None
    x = [Fraction(0)] * total
    for i, b in enumerate(basis):
        x[b] = tab[i][-1]
    return x[:width]


def _pivot(tab, cost, r, c):
    pr = tab[r]
    inv = 1 / pr[c]
    pr[:] = [v * inv for v in pr]
    nz = [j for j, v in enumerate(pr) if v]
    for i, row in enumerate(tab):
        if i != r:
            f = row[c]
            if f:
                for j in nz:
                    row[j] -= f * pr[j]
    f = cost[c]
    if f:
        for j in nz:
            cost[j] -= f * pr[j]
