"""Exact rational linear feasibility by the simplex method.

Only feasibility is needed anywhere in the package, so this is a phase-one
simplex over :class:`fractions.Fraction`.  Infeasible
systems come back with a Farkas certificate that :func:`verify_farkas`
checks without touching the tableau.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .lattice import rref, solve_rational


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    x: tuple | None = None
    # multipliers for the equality rows and the >= rows (infeasible case)
    y_eq: tuple | None = None
    y_ge: tuple | None = None
    pivots: int = 0


def solve_feasibility(
    nvars: int,
    a_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    a_ge: Sequence[Sequence] = (),
    b_ge: Sequence = (),
    free: bool = True,
    max_pivots: int = 200_000,
) -> Feasibility:
    """Decide ``{x : a_eq x = b_eq, a_ge x >= b_ge}`` (``x >= 0`` unless free).

    Returns a point when feasible and a Farkas certificate otherwise.
    With free variables the equalities are eliminated first, so the
    simplex only sees the inequalities in the coordinates of the affine
    solution space.
    """
    if free and a_eq:
        return _solve_by_elimination(nvars, a_eq, b_eq, a_ge, b_ge, max_pivots)
    return _phase_one(nvars, a_eq, b_eq, a_ge, b_ge, free, max_pivots)


def _solve_by_elimination(nvars, a_eq, b_eq, a_ge, b_ge, max_pivots):
    eq = [list(map(Fraction, r)) for r in a_eq]
    beq = [Fraction(b) for b in b_eq]
    red, pivots = rref([r + [b] for r, b in zip(eq, beq)], nvars + 1)
    if nvars in pivots:
        # inconsistent equalities: the last echelon row reads 0 = 1
        y = _row_combination([r + [b] for r, b in zip(eq, beq)], [Fraction(0)] * nvars + [Fraction(1)])
        return Feasibility(False, None, tuple(y), tuple(Fraction(0) for _ in a_ge), 0)
    x0 = [Fraction(0)] * nvars
    for row, p in zip(red, pivots):
        x0[p] = row[nvars]
    free_cols = [c for c in range(nvars) if c not in pivots]
    basis = []
    for fcol in free_cols:
        v = [Fraction(0)] * nvars
        v[fcol] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[fcol]
        basis.append(v)
    ge = [list(map(Fraction, r)) for r in a_ge]
    red_rows = [[sum(a * v for a, v in zip(r, col)) for col in basis] for r in ge]
    red_rhs = [Fraction(b) - sum(a * x for a, x in zip(r, x0)) for r, b in zip(ge, b_ge)]
    if not free_cols:
        red_rows = [[] for _ in ge]
    res = _phase_one(len(free_cols), (), (), red_rows, red_rhs, True, max_pivots)
    if res.feasible:
        z = res.x
        x = tuple(x0[k] + sum(zj * b[k] for zj, b in zip(z, basis)) for k in range(nvars))
        return Feasibility(True, x, pivots=res.pivots)
    # y^T A_ge lies in the row space of A_eq; cancel it there
    y = res.y_ge
    combo = [sum(yi * r[k] for yi, r in zip(y, ge)) for k in range(nvars)]
    w = _row_combination(eq, combo)
    return Feasibility(False, None, tuple(-wi for wi in w), tuple(y), res.pivots)


def _row_combination(rows, target):
    """Coefficients ``w`` with ``sum w_i rows_i = target`` (target in the row space)."""
    cols = [[r[k] for r in rows] for k in range(len(target))]
    w = solve_rational(cols, target)
    if w is None:
        raise ArithmeticError("vector is not in the row space")
    return w


_STALL_LIMIT = 50


def _integer_row(row, b):
    den = math.lcm(*(Fraction(x).denominator for x in list(row) + [b]))
    return [int(Fraction(x) * den) for x in row], int(Fraction(b) * den), den


def _normalize(row):
    g = math.gcd(*row)
    return [x // g for x in row] if g > 1 else row


def _phase_one(nvars, a_eq, b_eq, a_ge, b_ge, free, max_pivots) -> Feasibility:
    # Rows of the tableau are kept as integer vectors, each a positive
    # multiple of the true row, so pivoting never builds fractions.
    n_eq, n_ge = len(a_eq), len(a_ge)
    m = n_eq + n_ge
    if m == 0:
        return Feasibility(True, tuple(Fraction(0) for _ in range(nvars)))
    rows, rhs, scales = [], [], []
    for r, b in list(zip(a_eq, b_eq)) + list(zip(a_ge, b_ge)):
        ir, ib, den = _integer_row(r, b)
        rows.append(ir)
        rhs.append(ib)
        scales.append(den)

    # standard form columns: x (or x+, x-), slacks for >= rows
    nx = 2 * nvars if free else nvars
    ncols = nx + n_ge
    width = ncols + m
    signs = []
    tab = []
    for i, r in enumerate(rows):
        row = list(r) + ([-c for c in r] if free else [])
        slack = [0] * n_ge
        if i >= n_eq:
            slack[i - n_eq] = -1
        row += slack
        s = -1 if rhs[i] < 0 else 1
        signs.append(s)
        row = [s * c for c in row] + [int(i == j) for j in range(m)] + [s * rhs[i]]
        tab.append(row)

    basis = [ncols + i for i in range(m)]
    red = [Fraction(int(j >= ncols) - sum(tab[i][j] for i in range(m))) for j in range(width)]
    obj = Fraction(-sum(t[-1] for t in tab))  # negative of the phase-one objective

    # Dantzig's rule, switching to Bland's rule after a run of degenerate
    # pivots so that the method cannot cycle
    pivots = 0
    stalled = 0
    while True:
        if stalled < _STALL_LIMIT:
            enter = min(range(width), key=red.__getitem__)
            if red[enter] >= 0:
                enter = None
        else:
            enter = next((j for j in range(width) if red[j] < 0), None)
        if enter is None:
            break
        leave = None
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = Fraction(tab[i][-1], a)
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            # phase one objective is bounded below by 0; cannot happen
            raise ArithmeticError("unbounded phase-one simplex")
        prow = tab[leave]
        piv = prow[enter]
        for i in range(m):
            f = tab[i][enter]
            if i != leave and f != 0:
                tab[i] = _normalize([piv * x - f * y for x, y in zip(tab[i], prow)])
        f = red[enter]
        if f:
            red = [x - f * y / piv if y else x for x, y in zip(red, prow[:-1])]
            obj -= f * Fraction(prow[-1], piv)
        stalled = 0 if prow[-1] else stalled + 1
        basis[leave] = enter
        pivots += 1
        if pivots > max_pivots:
            raise ArithmeticError("simplex pivot limit reached")

    phase_one = -obj
    if phase_one > 0:
        y = [1 - red[ncols + i] for i in range(m)]
        y = [yi * s * d for yi, s, d in zip(y, signs, scales)]
        return Feasibility(False, None, tuple(y[:n_eq]), tuple(y[n_eq:]), pivots)

    values = [Fraction(0)] * width
    for i, b in enumerate(basis):
        values[b] = Fraction(tab[i][-1], tab[i][b])
    if free:
        x = tuple(values[j] - values[nvars + j] for j in range(nvars))
    else:
        x = tuple(values[:nvars])
    return Feasibility(True, x, pivots=pivots)


def check_point(x, a_eq=(), b_eq=(), a_ge=(), b_ge=(), free=True) -> bool:
    """Exact check that ``x`` satisfies the system."""
    if not free and any(v < 0 for v in x):
        return False
    for row, b in zip(a_eq, b_eq):
        if sum(Fraction(a) * v for a, v in zip(row, x)) != b:
            return False
    for row, b in zip(a_ge, b_ge):
        if sum(Fraction(a) * v for a, v in zip(row, x)) < b:
            return False
    return True


def verify_farkas(nvars, a_eq, b_eq, a_ge, b_ge, y_eq, y_ge, free=True) -> bool:
    """Check a certificate that the system has no solution.

    Needs ``y_ge >= 0``, ``y^T A = 0`` (``<= 0`` for nonnegative ``x``)
    and ``y^T b > 0``.
    """
    if any(v < 0 for v in y_ge):
        return False
    combo = [Fraction(0)] * nvars
    for y, row in list(zip(y_eq, a_eq)) + list(zip(y_ge, a_ge)):
        for j, a in enumerate(row):
            combo[j] += y * a
    if free and any(c != 0 for c in combo):
        return False
    if not free and any(c > 0 for c in combo):
        return False
    total = sum(y * b for y, b in zip(y_eq, b_eq)) + sum(y * b for y, b in zip(y_ge, b_ge))
    return total > 0


def in_rational_cone(generators: Sequence[Sequence], v: Sequence) -> tuple | None:
    """Nonnegative rational coefficients writing ``v`` over ``generators``.

    Returns ``None`` when ``v`` is outside the cone they generate.
    """
    gens = list(generators)
    if not gens:
        return () if not any(v) else None
    a_eq = [[g[i] for g in gens] for i in range(len(v))]
    res = solve_feasibility(len(gens), a_eq, list(v), free=False)
    return res.x if res.feasible else None
