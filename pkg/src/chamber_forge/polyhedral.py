"""Rational polyhedral cones and fans.

A :class:`Cone` is stored by its primitive extremal ray generators; facet
normals are computed lazily by exact elimination and cached.  A :class:`Fan`
holds an ordered ray list and its cones as sets of ray indices, including
every face.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from . import lattice as lat
from . import lp
from .errors import (
    ClosureBudgetExceeded,
    NonConvexSupport,
    NotFullDimensional,
    NotStable,
    NotPointed,
    OverlapError,
    RayNotInSupport,
)


class Verdict:
    """Boolean answer carrying a witness.

    Truthiness is the answer itself, so ``if is_smooth(fan):`` reads
    naturally while ``verdict.witness`` explains it.
    """

    __slots__ = ("ok", "witness")

    def __init__(self, ok: bool, witness=None):
        self.ok = bool(ok)
        self.witness = witness

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"Verdict({self.ok}, witness={self.witness!r})"


# --------------------------------------------------------------------------
# inequality descriptions


def cone_inequalities(generators: Sequence[Sequence[int]], rank: int):
    """H-description of the cone generated by ``generators``.

    Works for cones that are not pointed and not full-dimensional.

    Returns
    -------
    equations : list of int vectors
        Basis of the orthogonal complement of the linear span.
    facets : list of int vectors
        Primitive inner facet normals, chosen inside the linear span.
    """
    gens = sorted({lat.primitive(g) for g in generators if any(g)})
    if not gens:
        return [tuple(int(i == j) for j in range(rank)) for i in range(rank)], []
    eqs = lat.nullspace(gens, rank)
    d = rank - len(eqs)
    facets = set()
    for subset in itertools.combinations(gens, d - 1):
        ns = lat.nullspace(list(subset) + eqs, rank)
        if len(ns) != 1:
            continue
        u = ns[0]
        vals = [lat.dot(u, g) for g in gens]
        if all(x >= 0 for x in vals) and any(x > 0 for x in vals):
            facets.add(u)
        elif all(x <= 0 for x in vals) and any(x < 0 for x in vals):
            facets.add(tuple(-x for x in u))
    return eqs, sorted(facets)


def in_hrep(v, eqs, facets) -> bool:
    return all(lat.dot(e, v) == 0 for e in eqs) and all(lat.dot(u, v) >= 0 for u in facets)


# --------------------------------------------------------------------------
# cones


@dataclass(frozen=True)
class Cone:
    """Strongly convex rational cone given by primitive extremal rays.

    Build instances with :meth:`from_generators` unless the rays are already
    known to be primitive and irredundant.
    """

    rank: int
    rays: tuple = ()

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence[int]], rank: int | None = None) -> "Cone":
        gens = [tuple(int(x) for x in g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank is required for an empty generator list")
            rank = len(gens[0])
        return _cone_from_generators(rank, tuple(sorted(set(gens))))

    @cached_property
    def _hrep(self):
        return cone_inequalities(self.rays, self.rank)

    @property
    def equations(self):
        return self._hrep[0]

    @property
    def facet_normals(self):
        return self._hrep[1]

    @cached_property
    def dim(self) -> int:
        return self.rank - len(self.equations)

    def contains(self, v) -> bool:
        return in_hrep(v, *self._hrep)

    def contains_relint(self, v) -> bool:
        eqs, facets = self._hrep
        return all(lat.dot(e, v) == 0 for e in eqs) and all(lat.dot(u, v) > 0 for u in facets)

    def is_simplicial(self) -> bool:
        return len(self.rays) == self.dim

    @cached_property
    def index(self) -> int:
        """Index of the lattice generated by the rays in its saturation."""
        return lat.saturated_index(self.rays)

    def is_smooth(self) -> bool:
        return self.is_simplicial() and self.index == 1

    def facets(self) -> list["Cone"]:
        return [
            make_cone(self.rank, tuple(r for r in self.rays if lat.dot(u, r) == 0))
            for u in self.facet_normals
        ]

    @cached_property
    def faces(self) -> frozenset:
        """All faces, including the zero cone and the cone itself."""
        out = {self}
        for f in self.facets():
            out |= f.faces
        return frozenset(out)

    def face_ray_sets(self) -> set[frozenset]:
        return {frozenset(f.rays) for f in self.faces}

    def apply(self, matrix) -> "Cone":
        return Cone.from_generators([lat.matvec(matrix, r) for r in self.rays], self.rank)

    def __repr__(self):
        return f"Cone({list(map(list, self.rays))})"


@lru_cache(maxsize=None)
def make_cone(rank: int, rays: tuple) -> Cone:
    return Cone(rank, tuple(sorted(rays)))


@lru_cache(maxsize=None)
def _cone_from_generators(rank: int, gens: tuple) -> Cone:
    prim = sorted({lat.primitive(g) for g in gens if any(g)})
    if any(len(g) != rank for g in prim):
        raise ValueError("generator length does not match the rank")
    if not prim:
        return make_cone(rank, ())
    eqs, facets = cone_inequalities(prim, rank)
    if lat.rank(list(facets) + list(eqs), rank) < rank:
        raise NotPointed(f"cone generated by {prim} contains a line")
    extremal = []
    for g in prim:
        active = [u for u in facets if lat.dot(u, g) == 0]
        if lat.rank(active + list(eqs), rank) == rank - 1:
            extremal.append(g)
    return make_cone(rank, tuple(extremal))


def cone_from_hrep(rank: int, equations, inequalities) -> Cone:
    """Extremal rays of a pointed cone given by equations and inequalities."""
    basis = lat.nullspace(list(equations), rank) if equations else [
        tuple(int(i == j) for j in range(rank)) for i in range(rank)]
    k = len(basis)
    if k == 0:
        return make_cone(rank, ())
    rows = [tuple(lat.dot(u, b) for b in basis) for u in inequalities]
    rows = sorted({r for r in rows if any(r)})
    if lat.rank(rows, k) < k:
        raise NotPointed("polyhedral cone contains a line")
    rays = set()
    for subset in itertools.combinations(rows, k - 1):
        ns = lat.nullspace(list(subset), k)
        if len(ns) != 1:
            continue
        for z in (ns[0], tuple(-x for x in ns[0])):
            if all(lat.dot(r, z) >= 0 for r in rows):
                v = tuple(sum(z[i] * basis[i][j] for i in range(k)) for j in range(rank))
                rays.add(lat.primitive(v))
    return make_cone(rank, tuple(rays))


def intersect(c1: Cone, c2: Cone) -> Cone:
    return cone_from_hrep(
        c1.rank,
        list(c1.equations) + list(c2.equations),
        list(c1.facet_normals) + list(c2.facet_normals),
    )


# --------------------------------------------------------------------------
# matrix groups


class MatrixGroup:
    """Group of integer matrices acting on column vectors.

    Only the generators are needed for stability checks, so infinite groups
    (such as the one generated by a unipotent matrix) are fine as long as
    :meth:`elements` is not called.
    """

    def __init__(self, generators: Iterable[Sequence[Sequence[int]]], rank: int | None = None):
        gens = [lat.as_matrix(g) for g in generators]
        if rank is None:
            if not gens:
                raise ValueError("rank is required for a group without generators")
            rank = len(gens[0])
        for g in gens:
            if len(g) != rank or any(len(row) != rank for row in g):
                raise ValueError("generator shape does not match the rank")
            if abs(lat.det(g)) != 1:
                raise ValueError(f"generator {g} is not unimodular")
        self.rank = rank
        self.generators = tuple(gens)

    @classmethod
    def trivial(cls, rank: int) -> "MatrixGroup":
        return cls([], rank)

    def join(self, other: "MatrixGroup") -> "MatrixGroup":
        return MatrixGroup(self.generators + other.generators, self.rank)

    def elements(self, budget: int = 100_000) -> tuple:
        """Enumerate the group by closure; raises past ``budget`` elements."""
        cached = getattr(self, "_elements", None)
        if cached is not None:
            return cached
        ident = lat.identity(self.rank)
        seen = {ident}
        order = [ident]
        queue = deque([ident])
        while queue:
            g = queue.popleft()
            for s in self.generators:
                h = lat.matmul(s, g)
                if h not in seen:
                    seen.add(h)
                    order.append(h)
                    queue.append(h)
                    if len(seen) > budget:
                        raise ClosureBudgetExceeded(
                            f"group closure exceeded {budget} elements")
        self._elements = tuple(sorted(order))
        return self._elements

    @property
    def order(self) -> int:
        return len(self.elements())

    def orbit(self, v) -> list[tuple[int, ...]]:
        return sorted({lat.matvec(g, v) for g in self.elements()})

    def __repr__(self):
        return f"MatrixGroup(rank={self.rank}, generators={len(self.generators)})"


# --------------------------------------------------------------------------
# fans


class Fan:
    """Finite collection of cones given by ray indices.

    The constructor stores exactly what it is given, so invalid data can be
    represented and reported by :func:`fan_validate`.  Use
    :meth:`from_cones` to build a canonical fan (primitive rays in
    lexicographic order, closed under faces).
    """

    def __init__(self, rank: int, rays: Sequence[Sequence[int]], cones: Iterable[Iterable[int]]):
        self.rank = int(rank)
        self.rays = tuple(tuple(int(x) for x in r) for r in rays)
        self.cones = frozenset(frozenset(c) for c in cones)
        self._cone_cache: dict = {}

    @classmethod
    def from_cones(cls, rank: int, cones: Iterable[Iterable[Sequence[int]]]) -> "Fan":
        """Canonical fan generated by the given cones and all their faces."""
        all_faces = set()
        for gens in cones:
            c = Cone.from_generators(list(gens), rank)
            all_faces |= c.faces
        all_faces.add(make_cone(rank, ()))
        rays = sorted({r for c in all_faces for r in c.rays})
        index = {r: i for i, r in enumerate(rays)}
        return cls(rank, rays, [frozenset(index[r] for r in c.rays) for c in all_faces])

    @classmethod
    def from_maximal(cls, rank: int, rays, cones: Iterable[Iterable[int]]) -> "Fan":
        rays = [tuple(r) for r in rays]
        return cls.from_cones(rank, [[rays[i] for i in c] for c in cones])

    def cone(self, idx: Iterable[int]) -> Cone:
        key = frozenset(idx)
        c = self._cone_cache.get(key)
        if c is None:
            c = make_cone(self.rank, tuple(self.rays[i] for i in key))
            self._cone_cache[key] = c
        return c

    @cached_property
    def ray_index(self) -> dict:
        return {r: i for i, r in enumerate(self.rays)}

    @cached_property
    def maximal_cones(self) -> list[frozenset]:
        cones = sorted(self.cones, key=lambda c: (-len(c), sorted(c)))
        out = []
        for c in cones:
            if not any(c < m for m in out):
                out.append(c)
        return sorted(out, key=sorted)

    @cached_property
    def dim(self) -> int:
        return max((self.cone(c).dim for c in self.cones), default=0)

    def cone_ray_sets(self) -> set[frozenset]:
        return {frozenset(self.rays[i] for i in c) for c in self.cones}

    def support_contains(self, v) -> bool:
        return any(self.cone(c).contains(v) for c in self.maximal_cones)

    def cones_of_dim(self, d: int) -> list[frozenset]:
        return sorted((c for c in self.cones if self.cone(c).dim == d), key=sorted)

    def apply(self, matrix) -> "Fan":
        return Fan.from_cones(
            self.rank, [[lat.matvec(matrix, self.rays[i]) for i in c] for c in self.maximal_cones])

    def canonical(self) -> "Fan":
        return Fan.from_cones(self.rank, [[self.rays[i] for i in c] for c in self.maximal_cones])

    def __eq__(self, other):
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rank == other.rank and self.cone_ray_sets() == other.cone_ray_sets()

    def __hash__(self):
        return hash((self.rank, frozenset(self.cone_ray_sets())))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, maximal={len(self.maximal_cones)})"


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def __bool__(self):
        return self.ok


def fan_validate(f: Fan) -> ValidationReport:
    """Check the fan axioms; an empty report means the fan is valid."""
    rep = ValidationReport()
    err = rep.errors.append
    if len(set(f.rays)) != len(f.rays):
        err("duplicate rays")
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            err(f"ray {i} has length {len(r)}, expected {f.rank}")
        elif not any(r):
            err(f"ray {i} is zero")
        elif not lat.is_primitive(r):
            err(f"ray {i} = {r} is not primitive")
    if not f.cones:
        err("fan has no cones (the zero cone is required)")
    if rep.errors:
        return rep
    for c in f.cones:
        if any(i < 0 or i >= len(f.rays) for i in c):
            err(f"cone {sorted(c)} has an out-of-range ray index")
    if rep.errors:
        return rep

    cone_vecs = f.cone_ray_sets()
    for c in sorted(f.cones, key=sorted):
        gens = [f.rays[i] for i in c]
        try:
            canon = Cone.from_generators(gens, f.rank)
        except NotPointed:
            err(f"cone {sorted(c)} is not strongly convex")
            continue
        if set(canon.rays) != set(gens):
            err(f"cone {sorted(c)} has redundant rays")
            continue
        for face in canon.face_ray_sets():
            if face not in cone_vecs:
                err(f"face {sorted(face)} of cone {sorted(c)} is missing")
                break
    for i in range(len(f.rays)):
        if frozenset([i]) not in f.cones:
            err(f"ray {i} is not a cone of the fan")
    if rep.errors:
        return rep

    maxcones = f.maximal_cones
    for s, t in itertools.combinations(maxcones, 2):
        cs, ct = f.cone(s), f.cone(t)
        common = frozenset(f.rays[i] for i in s & t)
        inter = intersect(cs, ct)
        if set(inter.rays) != common:
            err(f"cones {sorted(s)} and {sorted(t)} do not meet in a common face")
        elif common not in cs.face_ray_sets() or common not in ct.face_ray_sets():
            err(f"intersection of {sorted(s)} and {sorted(t)} is not a face of both")
    return rep


# --------------------------------------------------------------------------
# predicates


def is_smooth(f: Fan) -> Verdict:
    """Every cone's rays extend to a basis of the lattice.

    The witness on failure is ``(ray index set, index)``; the index is the
    order of the quotient of the saturated span by the rays' lattice, or
    ``None`` for a cone that is not simplicial.
    """
    for c in f.maximal_cones:
        cone = f.cone(c)
        if not cone.is_simplicial():
            return Verdict(False, (sorted(c), None))
        if cone.index != 1:
            return Verdict(False, (sorted(c), cone.index))
    for c in f.cones:
        assert f.cone(c).is_simplicial(), "smooth fan with a non-simplicial face"
    return Verdict(True)


def is_simplicial(f: Fan) -> bool:
    return all(f.cone(c).is_simplicial() for c in f.maximal_cones)


def _covers(cones: Sequence[Cone], d: int, target_facets) -> Verdict:
    """Whether ``d``-dimensional cones of a valid fan cover a convex target.

    Each ``(d-1)``-face must lie in exactly two of the cones, or in exactly
    one when it sits on a facet hyperplane of the target.
    """
    if d == 0:
        return Verdict(True)
    if not cones:
        return Verdict(False, "no cones")
    walls = Counter()
    for c in cones:
        for w in c.facets():
            walls[w.rays] += 1
    for wall, count in sorted(walls.items()):
        if count == 2:
            continue
        on_boundary = any(all(lat.dot(u, r) == 0 for r in wall) for u in target_facets)
        if count == 1 and on_boundary:
            continue
        return Verdict(False, {"wall": [list(r) for r in wall], "count": count})
    return Verdict(True)


def probe_vectors(f: Fan) -> list[tuple[int, ...]]:
    """Sign vectors plus pairwise ray sums: cheap points to test for coverage."""
    out = {v for v in itertools.product((-1, 0, 1), repeat=f.rank) if any(v)}
    for a, b in itertools.combinations(f.rays, 2):
        s = lat.add(a, b)
        if any(s):
            out.add(s)
    return sorted(out)


def _dual_graph_connected(f: Fan, full: list[frozenset]) -> bool:
    if not full:
        return False
    adj = {c: [] for c in full}
    d = f.rank
    for s, t in itertools.combinations(full, 2):
        if f.cone(s & t).dim == d - 1:
            adj[s].append(t)
            adj[t].append(s)
    seen = {full[0]}
    stack = [full[0]]
    while stack:
        for n in adj[stack.pop()]:
            if n not in seen:
                seen.add(n)
                stack.append(n)
    return len(seen) == len(full)


def is_complete(f: Fan) -> Verdict:
    """Support of ``f`` is all of ``R^rank``.

    Decided by facet pairing plus dual-graph connectivity; a probing set is
    tested as an independent falsifier and the two methods must agree.
    """
    if f.dim != f.rank:
        raise NotFullDimensional("no cone has full dimension")
    maxcones = f.maximal_cones
    full = [c for c in maxcones if f.cone(c).dim == f.rank]
    witness = None
    pairing = len(full) == len(maxcones)
    if not pairing:
        witness = {"lower_dimensional_maximal_cone": sorted(next(c for c in maxcones if c not in full))}
    else:
        cov = _covers([f.cone(c) for c in full], f.rank, [])
        pairing = cov.ok and _dual_graph_connected(f, full)
        witness = cov.witness
    uncovered = next((v for v in probe_vectors(f) if not f.support_contains(v)), None)
    probe = uncovered is None
    if pairing and not probe:
        raise AssertionError(f"completeness methods disagree at probe {uncovered}")
    if not probe:
        witness = {"uncovered": list(uncovered)}
    return Verdict(pairing and probe, witness)


def support_is_convex(f: Fan) -> Verdict:
    eqs, facets = cone_inequalities(f.rays, f.rank)
    d = f.rank - len(eqs)
    maxcones = f.maximal_cones
    low = [c for c in maxcones if f.cone(c).dim != d]
    if low:
        return Verdict(False, {"lower_dimensional_maximal_cone": sorted(low[0])})
    return _covers([f.cone(c) for c in maxcones], d, facets)


def _walls(f: Fan):
    """Pairs of maximal cones meeting in a common codimension-one face."""
    maxcones = f.maximal_cones
    out = []
    for a, b in itertools.combinations(range(len(maxcones)), 2):
        s, t = maxcones[a], maxcones[b]
        d = f.cone(s).dim
        if f.cone(t).dim == d and f.cone(s & t).dim == d - 1:
            out.append((a, b, s & t))
    return out


@dataclass
class ProjectivityLP:
    nvars: int
    a_eq: list
    b_eq: list
    a_ge: list
    b_ge: list


def projectivity_lp(f: Fan) -> ProjectivityLP:
    """Linear system for one linear functional per maximal cone.

    Functionals agree on rays shared by two maximal cones and jump by at
    least one across every wall (strict convexity after scaling).
    """
    n = f.rank
    maxcones = f.maximal_cones
    nv = n * len(maxcones)
    a_eq, b_eq, a_ge, b_ge = [], [], [], []

    def diff_row(a, b, r):
        row = [0] * nv
        for k in range(n):
            row[a * n + k] += r[k]
            row[b * n + k] -= r[k]
        return row

    for k in range(n):
        row = [0] * nv
        row[k] = 1
        a_eq.append(row)
        b_eq.append(0)
    for a, b in itertools.combinations(range(len(maxcones)), 2):
        for i in sorted(maxcones[a] & maxcones[b]):
            a_eq.append(diff_row(a, b, f.rays[i]))
            b_eq.append(0)
    for a, b, wall in _walls(f):
        for i in sorted(maxcones[b] - wall):
            a_ge.append(diff_row(a, b, f.rays[i]))
            b_ge.append(1)
        for i in sorted(maxcones[a] - wall):
            a_ge.append(diff_row(b, a, f.rays[i]))
            b_ge.append(1)
    return ProjectivityLP(nv, a_eq, b_eq, a_ge, b_ge)


def ray_orbits(f: Fan, group: MatrixGroup) -> list[int]:
    """Orbit label of each ray of a ``group``-stable fan (smallest index in the orbit)."""
    parent = list(range(len(f.rays)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for gen in group.generators:
        for i, r in enumerate(f.rays):
            j = f.ray_index[lat.primitive(lat.matvec(gen, r))]
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    return [find(i) for i in range(len(f.rays))]


def ray_value_lp(f: Fan, group: MatrixGroup | None = None) -> ProjectivityLP | None:
    """Smaller projectivity system for fans of full-dimensional simplicial cones.

    The unknowns are the values ``phi_i`` of the support function on the
    rays; each maximal cone then has exactly one functional.  Across a wall
    with ``r_i = sum lambda_j r_j`` (``j`` in the cone ``a``) convexity reads
    ``sum lambda_j phi_j - phi_i >= 1``, scaled to integers.  Returns
    ``None`` when some maximal cone is not simplicial of full dimension.

    With a ``group`` (under which ``f`` must be stable) ``phi`` is taken
    constant on ray orbits: averaging any strictly convex support function
    over the group gives an invariant one, so nothing is lost.
    Each orbit uses the column of its smallest ray index (the other
    columns stay zero) and duplicate rows are dropped.
    """
    n = f.rank
    maxcones = f.maximal_cones
    if not maxcones or any(len(c) != n or f.cone(c).dim != n for c in maxcones):
        return None
    k = len(f.rays)
    label = list(range(k)) if group is None else ray_orbits(f, group)
    a_ge, b_ge, seen = [], [], set()
    for a, b in itertools.combinations(range(len(maxcones)), 2):
        s, t = maxcones[a], maxcones[b]
        if len(s & t) != n - 1:
            continue
        for src, dst in ((s, t), (t, s)):
            (i,) = tuple(dst - src)
            idx = sorted(src)
            lam = lat.solve_rational(lat.transpose([f.rays[j] for j in idx]), f.rays[i])
            den = math.lcm(*(Fraction(x).denominator for x in lam))
            row = [0] * k
            for j, x in zip(idx, lam):
                row[label[j]] += int(x * den)
            row[label[i]] -= den
            if tuple(row) not in seen:
                seen.add(tuple(row))
                a_ge.append(row)
                b_ge.append(1)
    return ProjectivityLP(k, [], [], a_ge, b_ge)


def verify_support_function(f: Fan, witness: dict) -> bool:
    """Exact, solver-independent check of a projectivity witness.

    ``witness`` maps each maximal cone (frozenset of ray indices) to a
    rational functional ``m``.  The piecewise-linear function
    ``phi(v) = <m_c, v>`` for ``v`` in ``c`` must be well defined and
    strictly convex in the sense ``<m_c, r> > phi(r)`` for every ray ``r``
    outside ``c``, and satisfy the same strict inequality across each wall.
    """
    maxcones = f.maximal_cones
    if set(witness) != set(maxcones):
        return False
    phi = {}
    for c in maxcones:
        for i in c:
            val = lat.dot(witness[c], f.rays[i])
            if phi.setdefault(i, val) != val:
                return False
    for c in maxcones:
        for i in range(len(f.rays)):
            if i not in c and any(i in m for m in maxcones):
                if not lat.dot(witness[c], f.rays[i]) > phi[i]:
                    return False
    for a, b, wall in _walls(f):
        s, t = maxcones[a], maxcones[b]
        for i in t - wall:
            if not lat.dot(lat.sub(witness[s], witness[t]), f.rays[i]) > 0:
                return False
    return True


def is_projective(f: Fan, group: MatrixGroup | None = None) -> Verdict:
    """Existence of a strictly convex piecewise-linear support function.

    Decided by an exact rational LP.  On success the witness maps each
    maximal cone to its functional and has been re-checked with
    :func:`verify_support_function`; on failure it is a Farkas certificate
    checked with :func:`lp.verify_farkas` against the system named in
    ``witness["system"]`` (:func:`ray_value_lp` when it applies, else
    :func:`projectivity_lp`).  A ``group`` leaving ``f`` stable only
    shrinks the ray-value system; the answer does not depend on it.

    Raises
    ------
    NonConvexSupport
        If the support of ``f`` is not convex.
    """
    conv = support_is_convex(f)
    if not conv:
        raise NonConvexSupport(f"support is not convex: {conv.witness}")
    n = f.rank
    if group is not None and not is_stable(f, group):
        raise NotStable("fan is not stable under the symmetry group")
    sysm = ray_value_lp(f, group)
    by_rays = sysm is not None
    if not by_rays:
        sysm = projectivity_lp(f)
    res = lp.solve_feasibility(sysm.nvars, sysm.a_eq, sysm.b_eq, sysm.a_ge, sysm.b_ge)
    if res.feasible and by_rays:
        label = list(range(len(f.rays))) if group is None else ray_orbits(f, group)
        witness = {
            c: lat.solve_rational([f.rays[i] for i in sorted(c)],
                                  [res.x[label[i]] for i in sorted(c)])
            for c in f.maximal_cones
        }
    elif res.feasible:
        witness = {c: tuple(res.x[k * n:(k + 1) * n]) for k, c in enumerate(f.maximal_cones)}
    if res.feasible:
        if not verify_support_function(f, witness):
            raise AssertionError("LP returned a support function that fails verification")
        return Verdict(True, witness)
    if not lp.verify_farkas(sysm.nvars, sysm.a_eq, sysm.b_eq, sysm.a_ge, sysm.b_ge,
                            res.y_eq, res.y_ge):
        raise AssertionError("LP infeasibility certificate fails verification")
    return Verdict(False, {"system": "ray_values" if by_rays else "cone_functionals",
                           "farkas_eq": res.y_eq, "farkas_ge": res.y_ge})


def refines(f: Fan, g: Fan) -> bool:
    """Equal supports and every cone of ``f`` inside a cone of ``g``."""
    if f.rank != g.rank:
        return False
    gmax = [g.cone(c) for c in g.maximal_cones]
    fmax = [f.cone(c) for c in f.maximal_cones]
    for c in fmax:
        if not any(all(t.contains(r) for r in c.rays) for t in gmax):
            return False
    for t in gmax:
        inside = [c for c in fmax if c.dim == t.dim and all(t.contains(r) for r in c.rays)]
        if t.dim == 0:
            continue
        if not _covers(inside, t.dim, t.facet_normals):
            return False
    return True


def is_stable(f: Fan, group: MatrixGroup) -> Verdict:
    """Every generator maps every cone of ``f`` onto a cone of ``f``."""
    cones = f.cone_ray_sets()
    for gen in group.generators:
        for c in sorted(f.cones, key=sorted):
            image = frozenset(lat.primitive(lat.matvec(gen, f.rays[i])) for i in c) if c else frozenset()
            if image not in cones:
                return Verdict(False, {"generator": [list(r) for r in gen], "cone": sorted(c)})
    return Verdict(True)


def saturate(f: Fan, group: MatrixGroup) -> Fan:
    """Smallest fan containing every translate of ``f`` under ``group``.

    Raises
    ------
    OverlapError
        If the translates do not intersect in common faces.
    """
    cones = []
    for g in group.elements():
        for c in f.maximal_cones:
            cones.append([lat.matvec(g, f.rays[i]) for i in c])
    try:
        out = Fan.from_cones(f.rank, cones)
    except NotPointed as exc:
        raise OverlapError(str(exc)) from exc
    rep = fan_validate(out)
    if not rep.ok:
        raise OverlapError("; ".join(rep.errors))
    return out


def star_subdivide(f: Fan, v: Sequence[int]) -> Fan:
    """Star subdivision of ``f`` at the primitive vector ``v``.

    Cones containing ``v`` are replaced by the joins of ``v`` with their
    faces not containing ``v``.  Subdividing at an existing ray returns
    ``f`` unchanged.
    """
    v = tuple(int(x) for x in v)
    if not lat.is_primitive(v):
        raise ValueError(f"{v} is not primitive")
    if v in f.ray_index:
        return f
    maxcones = f.maximal_cones
    hit = [c for c in maxcones if f.cone(c).contains(v)]
    if not hit:
        raise RayNotInSupport(f"{v} is not in the support")
    new = [[f.rays[i] for i in c] for c in f.cones if not f.cone(c).contains(v)]
    for c in hit:
        for face in f.cone(c).faces:
            if not face.contains(v):
                new.append(list(face.rays) + [v])
    return Fan.from_cones(f.rank, new)


# --------------------------------------------------------------------------
# standard fans used throughout the tests and the CLI


def projective_space_fan(n: int) -> Fan:
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays = basis + [tuple(-1 for _ in range(n))]
    return Fan.from_cones(n, [rays[:i] + rays[i + 1:] for i in range(n + 1)])


def product_fan(f: Fan, g: Fan) -> Fan:
    n = f.rank + g.rank
    cones = []
    for a in f.maximal_cones:
        for b in g.maximal_cones:
            gens = [f.rays[i] + (0,) * g.rank for i in a]
            gens += [(0,) * f.rank + g.rays[j] for j in b]
            cones.append(gens)
    return Fan.from_cones(n, cones)


def single_cone_fan(generators, rank=None) -> Fan:
    c = Cone.from_generators(generators, rank)
    return Fan.from_cones(c.rank, [c.rays])


def cube_fan() -> Fan:
    """Face fan of the cube with vertices ``(+-1, +-1, +-1)``: six square cones."""
    cones = []
    for axis in range(3):
        for sign in (1, -1):
            verts = [v for v in itertools.product((1, -1), repeat=3) if v[axis] == sign]
            cones.append(verts)
    return Fan.from_cones(3, cones)

