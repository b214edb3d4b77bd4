"""Dense exact-rational simplex with Bland's rule.

Solves   min c.x  subject to  A x = b,  x >= 0   in two phases over
`fractions.Fraction`.  Bland's pivoting rule (smallest entering index,
smallest basic variable on ratio ties) guarantees termination even on the
degenerate systems the cone machinery produces; speed matters less than the
termination guarantee at the sizes we run (a few hundred columns at most).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .qlinalg import as_rat


class LPStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: LPStatus
    objective: Fraction | None
    x: tuple[Fraction, ...] | None


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int):
    piv_row = tableau[row]
    pv = piv_row[col]
    if pv != 1:
        inv = 1 / pv
        tableau[row] = piv_row = [v * inv for v in piv_row]
    for i, r in enumerate(tableau):
        if i == row:
            continue
        f = r[col]
        if f == 0:
            continue
        tableau[i] = [a - f * b for a, b in zip(r, piv_row)]
    basis[row] = col


def _run_phase(tableau, basis, allowed_cols, m):
    """Bland iterations on a tableau whose last row is the reduced-cost row
    and whose last column is the rhs.  Returns True, or False on unbounded."""
    obj = tableau[m]
    width = len(obj) - 1
    while True:
        enter = -1
        row_obj = tableau[m]
        for j in allowed_cols:
            if row_obj[j] < 0:
                enter = j
                break
        if enter < 0:
            return True
        leave = -1
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave < 0:
            return False
        _pivot(tableau, basis, leave, enter)


def solve_lp(a_rows: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """Minimize c.x subject to A x = b, x >= 0 (all data exact rationals)."""
    m = len(a_rows)
    c = [as_rat(v) for v in c]
    n = len(c)
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for ar, bv in zip(a_rows, b):
        r = [as_rat(v) for v in ar]
        bb = as_rat(bv)
        if len(r) != n:
            raise ValueError("constraint width does not match objective length")
        if bb < 0:
            r = [-v for v in r]
            bb = -bb
        rows.append(r)
        rhs.append(bb)
    if m == 0:
        if any(v < 0 for v in c):
            return LPResult(LPStatus.UNBOUNDED, None, None)
        return LPResult(LPStatus.OPTIMAL, Fraction(0), tuple([Fraction(0)] * n))

    # phase 1: artificial basis
    width = n + m
    tableau = [
        rows[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [rhs[i]]
        for i in range(m)
    ]
    basis = [n + i for i in range(m)]
    # reduced costs for min sum(artificials): r_j = -sum_i A_ij on real columns
    obj = [Fraction(0)] * (width + 1)
    for i in range(m):
        for j in range(n):
            obj[j] -= tableau[i][j]
        obj[width] -= tableau[i][width]
    tableau.append(obj)

    if not _run_phase(tableau, basis, range(n), m):
        raise AssertionError("phase 1 cannot be unbounded")
    if -tableau[m][width] > 0:
        return LPResult(LPStatus.INFEASIBLE, None, None)

    # drive surviving artificials out of the basis, drop redundant rows
    drop: list[int] = []
    for i in range(m):
        if basis[i] >= n:
            col = next((j for j in range(n) if tableau[i][j] != 0), None)
            if col is None:
                drop.append(i)
            else:
                _pivot(tableau, basis, i, col)
    if drop:
        tableau = [r for i, r in enumerate(tableau[:m]) if i not in drop] + [tableau[m]]
        basis = [bv for i, bv in enumerate(basis) if i not in drop]
        m = len(basis)

    # phase 2: real objective, artificial columns removed
    tableau = [r[:n] + [r[width]] for r in tableau[:m]]
    obj = list(c) + [Fraction(0)]
    for i in range(m):
        cb = c[basis[i]]
        if cb != 0:
            obj = [a - cb * bcol for a, bcol in zip(obj, tableau[i])]
    tableau.append(obj)

    if not _run_phase(tableau, basis, range(n), m):
        return LPResult(LPStatus.UNBOUNDED, None, None)

    x = [Fraction(0)] * n
    for i in range(m):
        x[basis[i]] = tableau[i][n]
    objective = sum((cv * xv for cv, xv in zip(c, x)), Fraction(0))
    return LPResult(LPStatus.OPTIMAL, objective, tuple(x))
