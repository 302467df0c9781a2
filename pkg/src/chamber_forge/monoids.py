"""Finitely generated submonoids of a lattice and their saturations.

An affine monoid ``Q`` sits in ``M = Z^n``.  Its saturation is the set of
``a`` in ``M`` with ``n a`` in ``Q`` for some ``n >= 1``, which equals
``cone(Q) ∩ M``; for a pointed cone it is generated by its Hilbert basis.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import lattice as lat
from . import lp
from .polyhedral import Cone, Verdict, cone_inequalities, in_hrep


@dataclass(frozen=True)
class AffineMonoid:
    """Submonoid of ``Z^ambient`` generated by finitely many vectors.

    Duplicate and zero generators are dropped; the rest are kept sorted.
    """

    ambient: int
    generators: tuple = ()

    def __post_init__(self):
        gens = sorted({lat.as_vector(g) for g in self.generators if any(g)})
        if any(len(g) != self.ambient for g in gens):
            raise ValueError("generator length does not match the ambient rank")
        object.__setattr__(self, "generators", tuple(gens))

    @classmethod
    def of(cls, generators, ambient: int | None = None) -> "AffineMonoid":
        gens = [lat.as_vector(g) if hasattr(g, "__len__") else (int(g),) for g in generators]
        if ambient is None:
            if not gens:
                raise ValueError("ambient rank is required for an empty generator list")
            ambient = len(gens[0])
        return cls(ambient, tuple(gens))

    @property
    def cone_hrep(self):
        return _hrep(self.ambient, self.generators)

    def is_pointed(self) -> bool:
        eqs, facets = self.cone_hrep
        return lat.rank(list(eqs) + list(facets), self.ambient) == self.ambient if self.generators else True


@lru_cache(maxsize=None)
def _hrep(rank, gens):
    return cone_inequalities(gens, rank)


@dataclass(frozen=True)
class GroupDescription:
    basis: tuple
    index: object        # int, or lattice.INFINITE when the rank is deficient


def group_generated(q: AffineMonoid) -> GroupDescription:
    """Basis of the subgroup generated by ``q`` and its index in ``M``."""
    basis = tuple(lat.lattice_basis(q.generators))
    if not q.generators:
        return GroupDescription((), lat.INFINITE if q.ambient else 1)
    return GroupDescription(basis, lat.sublattice_index(q.generators, q.ambient))


# --------------------------------------------------------------------------
# membership


@dataclass(frozen=True)
class _Split:
    functional: tuple    # positive on every generator outside the lineality space
    positive: tuple      # generators with positive value
    units: tuple         # generators in the lineality space
    relation: tuple      # integer p >= 1 with sum p_i units_i = 0


@lru_cache(maxsize=None)
def _split(q: AffineMonoid) -> _Split:
    _, facets = q.cone_hrep
    u = tuple(sum(col) for col in zip(*facets)) if facets else (0,) * q.ambient
    positive = tuple(g for g in q.generators if lat.dot(u, g) > 0)
    units = tuple(g for g in q.generators if lat.dot(u, g) == 0)
    relation = ()
    if units:
        # strictly positive relation among the units (their cone is a subspace)
        k = len(units)
        a_eq = [[g[i] for g in units] for i in range(q.ambient)]
        a_ge = [[int(i == j) for j in range(k)] for i in range(k)]
        res = lp.solve_feasibility(k, a_eq, [0] * q.ambient, a_ge, [1] * k)
        if not res.feasible:
            raise AssertionError("units of the monoid admit no positive relation")
        den = math.lcm(*(Fraction(x).denominator for x in res.x))
        relation = tuple(int(x * den) for x in res.x)
    return _Split(u, positive, units, relation)


def monoid_membership(q: AffineMonoid, a) -> Verdict:
    """Decide whether ``a`` is a nonnegative integer combination of the generators.

    The search is exhaustive: with ``u`` the sum of the inner facet normals
    of ``cone(q)``, each coefficient of a generator ``g`` outside the
    lineality space is at most ``<u, a> / <u, g>``.  What remains must lie
    in the group generated by the lineality generators, which is a group
    inside the monoid.

    Returns
    -------
    Verdict
        ``witness`` holds ``coefficients`` (aligned with ``q.generators``,
        or ``None`` when ``a`` is not a member) and the coefficient ``bound``.

    Examples
    --------
    >>> bool(monoid_membership(AffineMonoid.of([2, 3]), (7,)))
    True
    """
    a = lat.as_vector(a)
    if len(a) != q.ambient:
        raise ValueError("vector length does not match the ambient rank")
    sp = _split(q)
    level = lat.dot(sp.functional, a)
    bound = max((level // lat.dot(sp.functional, g) for g in sp.positive), default=0)
    if level < 0 or not in_hrep(a, *q.cone_hrep):
        return Verdict(False, {"coefficients": None, "bound": max(bound, 0)})

    weights = [lat.dot(sp.functional, g) for g in sp.positive]

    @lru_cache(maxsize=None)
    def search(rem: tuple, i: int):
        if i == len(sp.positive):
            if not sp.units:
                return () if not any(rem) else None
            return () if lat.in_lattice(sp.units, rem) else None
        g, w = sp.positive[i], weights[i]
        top = lat.dot(sp.functional, rem) // w
        for c in range(top, -1, -1):
            nxt = lat.sub(rem, lat.scale(c, g))
            if not in_hrep(nxt, *q.cone_hrep):
                continue
            tail = search(nxt, i + 1)
            if tail is not None:
                return (c,) + tail
        return None

    found = search(a, 0)
    if found is None:
        return Verdict(False, {"coefficients": None, "bound": bound})
    coeffs = dict(zip(sp.positive, found))
    if sp.units:
        rem = a
        for g, c in coeffs.items():
            rem = lat.sub(rem, lat.scale(c, g))
        unit_coeffs = lat.lattice_coefficients(sp.units, rem)
        shift = max([0] + [-(c // p) for c, p in zip(unit_coeffs, sp.relation)])
        for g, c, p in zip(sp.units, unit_coeffs, sp.relation):
            coeffs[g] = c + shift * p
    out = tuple(coeffs[g] for g in q.generators)
    assert all(c >= 0 for c in out)
    assert _combine(q.generators, out, q.ambient) == a
    return Verdict(True, {"coefficients": out, "bound": bound})


def _combine(gens, coeffs, rank):
    total = (0,) * rank
    for g, c in zip(gens, coeffs):
        total = lat.add(total, lat.scale(c, g))
    return total


# --------------------------------------------------------------------------
# Hilbert bases and saturation


def zonotope_points(generators, rank: int) -> list[tuple[int, ...]]:
    """Nonzero lattice points of ``{sum l_i g_i : 0 <= l_i <= 1}``."""
    gens = [lat.as_vector(g) for g in generators]
    if not gens:
        return []
    lo = [sum(min(0, g[k]) for g in gens) for k in range(rank)]
    hi = [sum(max(0, g[k]) for g in gens) for k in range(rank)]
    eqs, facets = cone_inequalities(gens, rank)
    k = len(gens)
    a_eq = [[g[i] for g in gens] for i in range(rank)]
    a_ge = [[-int(i == j) for j in range(k)] for i in range(k)]
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(p) or not in_hrep(p, eqs, facets):
            continue
        if lp.solve_feasibility(k, a_eq, p, a_ge, [-1] * k, free=False).feasible:
            out.append(p)
    return out


def _degree_reduce(candidates, functional, contains) -> list[tuple[int, ...]]:
    basis = []
    for x in sorted(candidates, key=lambda v: (lat.dot(functional, v), v)):
        if not any(x != h and contains(lat.sub(x, h)) for h in basis):
            basis.append(x)
    return sorted(basis)


def hilbert_basis(c: Cone) -> tuple[tuple[int, ...], ...]:
    """Minimal generating set of the monoid ``c ∩ Z^n``.

    Candidates are the lattice points of the zonotope spanned by the ray
    generators; they are reduced to irreducibles in order of a positive
    grading.

    Raises
    ------
    NotPointed
        From :func:`hilbert_basis_of` when the generators span a line.
    """
    if not c.rays:
        return ()
    u = tuple(sum(col) for col in zip(*c.facet_normals))
    assert all(lat.dot(u, r) > 0 for r in c.rays)
    cands = set(zonotope_points(c.rays, c.rank)) | set(c.rays)
    return tuple(_degree_reduce(cands, u, c.contains))


def hilbert_basis_of(generators, rank: int) -> tuple[tuple[int, ...], ...]:
    """Hilbert basis of the cone spanned by ``generators`` (must be pointed)."""
    return hilbert_basis(Cone.from_generators(generators, rank))


@dataclass(frozen=True)
class Certificate:
    multiple: int            # smallest n >= 1 with n a in Q
    coefficients: tuple      # n a as a combination of the generators of Q


@dataclass
class SaturationResult:
    saturated_generators: tuple
    added: tuple
    certificate: dict = field(default_factory=dict)
    pointed: bool = True
    group: GroupDescription | None = None

    @property
    def is_saturated(self) -> bool:
        return not self.added

    def as_dict(self) -> dict:
        return {
            "saturated_generators": [list(g) for g in self.saturated_generators],
            "added": [list(g) for g in self.added],
            "pointed": self.pointed,
            "certificates": [
                {"element": list(a), "n": c.multiple, "coefficients": list(c.coefficients)}
                for a, c in sorted(self.certificate.items())
            ],
        }


def saturation_certificate(q: AffineMonoid, a) -> Certificate:
    """Smallest ``n >= 1`` with ``n a`` in ``q``, with the membership witness.

    ``a`` must lie in ``cone(q)``.  A rational representation of ``a`` over
    the generators bounds the search by its common denominator.
    """
    a = lat.as_vector(a)
    lam = lp.in_rational_cone(q.generators, a)
    if lam is None:
        raise ValueError(f"{a} is not in the cone of the monoid")
    top = math.lcm(*(Fraction(x).denominator for x in lam)) if lam else 1
    for n in range(1, top + 1):
        v = monoid_membership(q, lat.scale(n, a))
        if v:
            return Certificate(n, v.witness["coefficients"])
    raise AssertionError("rational representation did not yield a multiple in the monoid")


def saturate_monoid(q: AffineMonoid) -> SaturationResult:
    """Saturation ``{a in M : n a in Q for some n >= 1}`` of ``q``.

    For a pointed cone the result is the Hilbert basis of ``cone(q) ∩ M``
    and every basis element carries a certificate.  Otherwise the returned
    generators (zonotope points of the generators, not reduced) still
    generate the saturation, and ``pointed`` is ``False``.

    Examples
    --------
    >>> saturate_monoid(AffineMonoid.of([2, 3])).added
    ((1,),)
    """
    grp = group_generated(q)
    if not q.generators:
        return SaturationResult((), (), {}, True, grp)
    if q.is_pointed():
        gens = hilbert_basis_of(q.generators, q.ambient)
        pointed = True
    else:
        prim = sorted({lat.primitive(g) for g in q.generators})
        gens = tuple(sorted(set(zonotope_points(prim, q.ambient)) | set(prim)))
        pointed = False
    certs = {g: saturation_certificate(q, g) for g in gens}
    added = tuple(g for g in gens if certs[g].multiple > 1)
    return SaturationResult(tuple(gens), added, certs, pointed, grp)


@dataclass(frozen=True)
class FiberChecks:
    generates_M: bool
    saturated: bool

    def as_dict(self) -> dict:
        return {"generates_M": self.generates_M, "saturated": self.saturated}


def fiber_checks(q: AffineMonoid) -> FiberChecks:
    """Whether ``q`` generates ``M`` as a group and whether it is saturated.

    Both true means the monoid algebra is normal and its torus is the full
    torus of ``M``.
    """
    return FiberChecks(group_generated(q).index == 1, saturate_monoid(q).is_saturated)
