"""Exact integer and rational linear algebra.

Vectors are plain tuples of Python ints (or :class:`fractions.Fraction`),
matrices are tuples of row tuples.  Python integers are arbitrary precision,
so nothing here can overflow.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .errors import ZeroVector

INFINITE = math.inf

Vector = tuple
Matrix = tuple


def as_vector(v) -> tuple[int, ...]:
    return tuple(int(x) for x in v)


def as_matrix(m) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(x) for x in row) for row in m)


def gcd_list(values: Iterable[int]) -> int:
    return reduce(math.gcd, (abs(int(x)) for x in values), 0)


def primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Return the primitive lattice vector on the ray through ``v``.

    Raises
    ------
    ZeroVector
        If ``v`` is the zero vector.
    """
    g = gcd_list(v)
    if g == 0:
        raise ZeroVector("the zero vector spans no ray")
    return tuple(int(x) // g for x in v)


def is_primitive(v: Sequence[int]) -> bool:
    return gcd_list(v) == 1


def primitive_rational(v: Sequence) -> tuple[int, ...]:
    """Primitive integer vector on the ray through a rational vector."""
    fr = [Fraction(x) for x in v]
    den = reduce(lambda a, b: a * b // math.gcd(a, b), (x.denominator for x in fr), 1)
    return primitive([int(x * den) for x in fr])


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def scale(c, v):
    return tuple(c * a for a in v)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m)) if m else ()


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def matvec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(map(int, row)) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    return len(m) == len(m[0]) and abs(det(m)) == 1 if m else True


def rref(rows: Sequence[Sequence], ncols: int | None = None):
    """Reduced row echelon form over the rationals.

    Returns the nonzero rows of the echelon form and the pivot columns.
    """
    a = [[Fraction(x) for x in row] for row in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    if not rows:
        return 0
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    """Integer basis (each vector primitive) of the rational kernel of ``rows``."""
    if not rows:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(primitive_rational(v))
    return basis


def solve_rational(a: Sequence[Sequence], b: Sequence):
    """One rational solution ``x`` of ``a x = b``, or ``None`` if inconsistent."""
    ncols = len(a[0]) if a else 0
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    red, pivots = rref(aug, ncols + 1)
    if ncols in pivots:
        return None
    x = [Fraction(0)] * ncols
    for row, p in zip(red, pivots):
        x[p] = row[ncols]
    return tuple(x)


def smith_normal_form(m: Sequence[Sequence[int]]):
    """Smith normal form ``U m V = D`` of an integer matrix.

    ``U`` and ``V`` are unimodular and ``D`` is diagonal with nonnegative
    entries ``d_1 | d_2 | ...``.  Pivoting is on the entry of least absolute
    value.

    Parameters
    ----------
    m : sequence of rows
        An ``r x c`` integer matrix.

    Returns
    -------
    U, D, V : tuple of row tuples
    """
    a = [list(map(int, row)) for row in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [list(row) for row in identity(nr)]
    v = [list(row) for row in identity(nc)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(nr, nc)):
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
            rest = [(abs(a[i][t]), i, None) for i in range(t + 1, nr) if a[i][t]]
            rest += [(abs(a[t][j]), None, j) for j in range(t + 1, nc) if a[t][j]]
            if rest:
                _, i, j = min(rest, key=lambda e: e[0])
                if i is not None:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            bad = next(
                ((i, j) for i in range(t + 1, nr) for j in range(t + 1, nc)
                 if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(u), as_matrix(a), as_matrix(v)


def invariant_factors(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, d, _ = smith_normal_form(m)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


def saturated_index(generators: Sequence[Sequence[int]]) -> int:
    """Index of the subgroup generated by ``generators`` in its saturation.

    The saturation is the set of lattice points in the rational span, so the
    index is the product of the invariant factors.  An empty or zero
    generating set has index 1.
    """
    gens = [g for g in generators if any(g)]
    if not gens:
        return 1
    return math.prod(invariant_factors(gens))


def sublattice_index(generators: Sequence[Sequence[int]], rank_: int | None = None):
    """Index of the subgroup generated by ``generators`` in ``Z^rank``.

    Returns ``INFINITE`` when the generators do not span ``Q^rank``.
    """
    gens = [tuple(g) for g in generators]
    if rank_ is None:
        if not gens:
            raise ValueError("rank is required for an empty generator list")
        rank_ = len(gens[0])
    if any(len(g) != rank_ for g in gens):
        raise ValueError("generators must all have the ambient rank")
    factors = invariant_factors(gens) if gens else []
    if len(factors) < rank_:
        return INFINITE
    return math.prod(factors)


def lattice_basis(generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """A Z-basis of the subgroup generated by the given vectors."""
    gens = [tuple(g) for g in generators if any(g)]
    if not gens:
        return []
    u, d, v = smith_normal_form(gens)
    # row space of G equals row space of D V^{-1}
    vinv = integer_inverse(v)
    basis = []
    for i in range(min(len(d), len(d[0]))):
        if d[i][i]:
            basis.append(tuple(d[i][i] * x for x in vinv[i]))
    return basis


def integer_inverse(m: Sequence[Sequence[int]]) -> Matrix:
    """Inverse of a unimodular integer matrix."""
    n = len(m)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(m)]
    red, pivots = rref(aug, 2 * n)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    inv = tuple(tuple(row[n:]) for row in red)
    if any(x.denominator != 1 for row in inv for x in row):
        raise ValueError("matrix is not unimodular")
    return as_matrix(inv)


def in_lattice(generators: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    """Whether ``v`` is an integer combination of ``generators``."""
    gens = [tuple(g) for g in generators if any(g)]
    if not gens:
        return not any(v)
    u, d, w = smith_normal_form(gens)
    y = [dot(v, col) for col in transpose(w)]
    for j, yj in enumerate(y):
        dj = d[j][j] if j < len(d) else 0
        if dj == 0:
            if yj != 0:
                return False
        elif yj % dj:
            return False
    return True


def lattice_coefficients(generators: Sequence[Sequence[int]], v: Sequence[int]):
    """Integer ``x`` with ``sum x_i g_i = v``, or ``None`` if there is none."""
    gens = [tuple(g) for g in generators]
    if not gens:
        return () if not any(v) else None
    u, d, w = smith_normal_form(gens)
    y = [dot(v, col) for col in transpose(w)]
    z = [0] * len(gens)
    for j, yj in enumerate(y):
        dj = d[j][j] if j < len(d) else 0
        if dj == 0:
            if yj != 0:
                return None
        elif yj % dj:
            return None
        else:
            z[j] = yj // dj
    # v W = z D  and  D = U G W  give  v = (z U) G
    return tuple(dot(z, col) for col in transpose(u))
