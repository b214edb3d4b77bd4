from fractions import Fraction

from fujita.simplex import LPStatus, solve_lp


def test_basic_optimum():
    # min -x - y  st  x + y + s = 4, x + 3y + t = 6
    res = solve_lp([[1, 1, 1, 0], [1, 3, 0, 1]], [4, 6], [-1, -1, 0, 0])
    assert res.status is LPStatus.OPTIMAL
    assert res.objective == -4


def test_infeasible():
    # x = -1 with x >= 0 (after sign flip becomes -x = 1)
    res = solve_lp([[1]], [-1], [0])
    assert res.status is LPStatus.INFEASIBLE


def test_unbounded():
    # min -x st x - y = 0
    res = solve_lp([[1, -1]], [0], [-1, 0])
    assert res.status is LPStatus.UNBOUNDED


def test_degenerate_bland_terminates():
    # classic cycling-prone instance (Beale); Bland must terminate
    a = [
        [Fraction(1, 4), -8, -1, 9, 1, 0, 0],
        [Fraction(1, 2), -12, Fraction(-1, 2), 3, 0, 1, 0],
        [0, 0, 1, 0, 0, 0, 1],
    ]
    b = [0, 0, 1]
    c = [Fraction(-3, 4), 20, Fraction(-1, 2), 6, 0, 0, 0]
    res = solve_lp(a, b, c)
    assert res.status is LPStatus.OPTIMAL
    assert res.objective == Fraction(-5, 4)


def test_exact_rational_answer():
    # min x st 3x = 2
    res = solve_lp([[3]], [2], [1])
    assert res.status is LPStatus.OPTIMAL
    assert res.x[0] == Fraction(2, 3)


def test_redundant_rows_dropped():
    res = solve_lp([[1, 1], [2, 2]], [3, 6], [1, 0])
    assert res.status is LPStatus.OPTIMAL
    assert res.objective == 0


def test_zero_rows():
    res = solve_lp([], [], [1, 1])
    assert res.status is LPStatus.OPTIMAL
    assert res.x == (0, 0)


def test_feasibility_problem():
    res = solve_lp([[1, 1], [1, -1]], [2, 0], [0, 0])
    assert res.status is LPStatus.OPTIMAL
    assert res.x == (1, 1)
