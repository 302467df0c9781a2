from fractions import Fraction

import numpy as np
from hypothesis import given, strategies as st
from scipy.optimize import linprog

from chamber_forge import lp

small = st.integers(-4, 4)


def systems(nvars):
    row = st.lists(small, min_size=nvars, max_size=nvars)
    return st.tuples(
        st.lists(row, max_size=2), st.lists(small, min_size=2, max_size=2),
        st.lists(row, min_size=1, max_size=5), st.lists(small, min_size=5, max_size=5),
    )


def _scipy_feasible(nvars, a_eq, b_eq, a_ge, b_ge, free=True):
    bounds = [(None, None) if free else (0, None)] * nvars
    res = linprog(
        np.zeros(nvars),
        A_ub=-np.array(a_ge, dtype=float) if a_ge else None,
        b_ub=-np.array(b_ge, dtype=float) if a_ge else None,
        A_eq=np.array(a_eq, dtype=float) if a_eq else None,
        b_eq=np.array(b_eq, dtype=float) if a_eq else None,
        bounds=bounds, method="highs")
    assert res.status in (0, 2)
    return res.status == 0


def _check(nvars, a_eq, b_eq, a_ge, b_ge, free):
    res = lp.solve_feasibility(nvars, a_eq, b_eq, a_ge, b_ge, free=free)
    if res.feasible:
        assert lp.check_point(res.x, a_eq, b_eq, a_ge, b_ge, free=free)
    else:
        assert lp.verify_farkas(nvars, a_eq, b_eq, a_ge, b_ge, res.y_eq, res.y_ge, free=free)
    return res.feasible


@given(systems(3), st.booleans())
def test_feasibility_is_certified_and_matches_scipy(sysm, free):
    a_eq, b_eq, a_ge, b_ge = sysm
    b_eq = b_eq[:len(a_eq)]
    b_ge = b_ge[:len(a_ge)]
    assert _check(3, a_eq, b_eq, a_ge, b_ge, free) == _scipy_feasible(3, a_eq, b_eq, a_ge, b_ge, free)


def test_simple_infeasible_system_has_farkas_certificate():
    # x >= 1 and -x >= 0
    res = lp.solve_feasibility(1, (), (), [[1], [-1]], [1, 0])
    assert not res.feasible
    assert lp.verify_farkas(1, (), (), [[1], [-1]], [1, 0], res.y_eq, res.y_ge)


def test_inconsistent_equalities():
    res = lp.solve_feasibility(2, [[1, 1], [2, 2]], [1, 3], [[1, 0]], [0])
    assert not res.feasible
    assert lp.verify_farkas(2, [[1, 1], [2, 2]], [1, 3], [[1, 0]], [0], res.y_eq, res.y_ge)


def test_rational_solution_is_exact():
    res = lp.solve_feasibility(1, [[3]], [1])
    assert res.feasible and res.x == (Fraction(1, 3),)


def test_forged_certificates_are_rejected():
    a_ge, b_ge = [[1], [-1]], [1, 0]
    assert not lp.verify_farkas(1, (), (), a_ge, b_ge, (), (Fraction(1), Fraction(2)))
    assert not lp.verify_farkas(1, (), (), a_ge, b_ge, (), (Fraction(-1), Fraction(-1)))
    assert not lp.check_point((Fraction(-2),), (), (), a_ge, b_ge)


def test_in_rational_cone():
    assert lp.in_rational_cone([(1, 0), (1, 2)], (1, 1)) is not None
    assert lp.in_rational_cone([(1, 0), (1, 2)], (0, 1)) is None
    assert lp.in_rational_cone([], (0, 0)) == ()
