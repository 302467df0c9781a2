"""Cox coordinates of a fan and torus GIT on the affine space ``A^I``.

The rays ``beta_i`` of a fan give an action of ``G_m^I`` on ``T x A^I``.
A coordinate pattern ``sigma`` (the coordinates allowed to vanish) is
*nondegenerate* when the rays indexed by ``sigma`` lie in one cone of the
fan.  For a character ``rho`` the pattern is *semistable* when some
monomial of weight ``m rho``, ``m >= 1``, is invariant up to the unit part
``L = {(<u, beta_i>)_i}`` and does not vanish on the pattern.

Semistability depends on ``rho`` only modulo ``L``, so all cone tests are
carried out in the class space ``Q^I / L_Q`` through a Gale dual.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice as lat
from . import lp
from .errors import SearchExhausted
from .polyhedral import Fan, Verdict, cone_inequalities, in_hrep, is_simplicial


@dataclass(frozen=True)
class RayData:
    """Index set ``I = 0..k-1`` and the primitive ray generators ``beta``."""

    beta: tuple
    fan: Fan = field(compare=False, repr=False)

    @property
    def index_set(self) -> tuple:
        return tuple(range(len(self.beta)))

    def __len__(self):
        return len(self.beta)


def ray_data(f: Fan) -> RayData:
    """Ray data in lexicographic ray order (the canonical fan's order)."""
    g = f.canonical()
    return RayData(g.rays, g)


@dataclass(frozen=True, order=True)
class SupportPattern:
    """Set of coordinates allowed to vanish."""

    sigma: frozenset

    @classmethod
    def of(cls, indices) -> "SupportPattern":
        return cls(frozenset(int(i) for i in indices))

    def key(self):
        return (len(self.sigma), sorted(self.sigma))

    def __repr__(self):
        return f"SupportPattern({sorted(self.sigma)})"


def all_patterns(k: int) -> list[SupportPattern]:
    """Every subset of ``range(k)``, by size and then lexicographically."""
    return [SupportPattern.of(c) for r in range(k + 1) for c in itertools.combinations(range(k), r)]


def nondegenerate_patterns(f: Fan) -> set[SupportPattern]:
    """Patterns whose indexed rays all lie in a single cone of ``f``.

    Equivalently the union of the ``U_c`` for cones ``c``; the set is
    closed under taking subsets and always contains the empty pattern.
    """
    rd = ray_data(f)
    g = rd.fan
    out = set()
    for c in g.maximal_cones:
        for r in range(len(c) + 1):
            for sub in itertools.combinations(sorted(c), r):
                out.add(SupportPattern.of(sub))
    out.add(SupportPattern.of(()))
    return out


@dataclass(frozen=True)
class GitWeights:
    """Unit-part lattice ``L`` in ``Z^I`` and a Gale dual of it.

    ``gale`` has rows spanning the annihilator of ``L``; column ``i`` is the
    class of the coordinate character ``e_i``.
    """

    size: int
    lattice_generators: tuple       # (<e_k, beta_i>)_i for each coordinate k
    lattice_basis: tuple
    gale: tuple

    def class_of(self, v) -> tuple:
        return tuple(lat.dot(g, v) for g in self.gale)

    @property
    def class_rank(self) -> int:
        return len(self.gale)


def git_weights(rd: RayData) -> GitWeights:
    k = len(rd)
    n = rd.fan.rank
    gens = tuple(tuple(b[c] for b in rd.beta) for c in range(n)) if k else ()
    basis = tuple(lat.lattice_basis(gens))
    gale = tuple(lat.nullspace([g for g in gens if any(g)], k)) if k else ()
    return GitWeights(k, gens, basis, gale)


def _class_hrep(w: GitWeights, p: SupportPattern):
    gens = [tuple(g[i] for g in w.gale) for i in range(w.size) if i not in p.sigma]
    return cone_inequalities(gens, w.class_rank)


def is_semistable(p: SupportPattern, rho, w: GitWeights) -> Verdict:
    """Whether a monomial of weight ``m rho`` survives on the pattern ``p``.

    Decided exactly: ``rho`` must lie in ``L_Q + cone(e_i : i not in p)``,
    found by the rational simplex.  A positive answer comes with an integer
    certificate ``(m, a)``: ``a >= 0`` vanishes on ``p`` and ``m rho - a`` is
    in ``L``, checked by lattice membership.
    """
    rho = lat.as_vector(rho)
    if len(rho) != w.size:
        raise ValueError("rho has the wrong length")
    free = [i for i in range(w.size) if i not in p.sigma]
    units = [tuple(x) for x in w.lattice_basis]
    gens = units + [tuple(-x for x in u) for u in units]
    gens += [tuple(int(j == i) for j in range(w.size)) for i in free]
    lam = lp.in_rational_cone(gens, rho) if gens else (None if any(rho) else ())
    if lam is None:
        return Verdict(False)
    nu = len(units)
    a_rat = [Fraction(0)] * w.size
    for c, i in zip(lam[2 * nu:], free):
        a_rat[i] = Fraction(c)
    unit_coords = [Fraction(lam[j]) - Fraction(lam[nu + j]) for j in range(nu)]
    m = math.lcm(*(x.denominator for x in a_rat + unit_coords))
    a = tuple(int(x * m) for x in a_rat)
    rest = lat.sub(lat.scale(m, rho), a)
    if not lat.in_lattice(units, rest):
        raise AssertionError("semistability certificate is not in the unit lattice")
    return Verdict(True, {"multiple": m, "monomial": a})


@dataclass(frozen=True)
class PatternVerdict:
    pattern: SupportPattern
    nondegenerate: bool
    semistable: bool
    certificate: dict | None

    def as_dict(self) -> dict:
        out = {"sigma": sorted(self.pattern.sigma), "nondegenerate": self.nondegenerate,
               "semistable": self.semistable}
        if self.certificate:
            out["certificate"] = {"multiple": self.certificate["multiple"],
                                  "monomial": list(self.certificate["monomial"])}
        return out


@dataclass
class Linearization:
    rho: tuple
    box: int
    transcript: list
    stable: bool
    candidates_tried: int
    method: str = "search"

    @property
    def verified(self) -> bool:
        return all(v.nondegenerate == v.semistable for v in self.transcript)

    def as_dict(self) -> dict:
        return {
            "rho": list(self.rho),
            "box": self.box,
            "verified": self.verified,
            "stable": self.stable,
            "candidates_tried": self.candidates_tried,
            "method": self.method,
            "transcript": [v.as_dict() for v in self.transcript],
        }


def transcript(f: Fan, rho) -> list[PatternVerdict]:
    """Semistability and nondegeneracy of every pattern, in canonical order."""
    rd = ray_data(f)
    w = git_weights(rd)
    nondeg = nondegenerate_patterns(f)
    out = []
    for p in all_patterns(len(rd)):
        v = is_semistable(p, rho, w)
        out.append(PatternVerdict(p, p in nondeg, bool(v), v.witness))
    return out


def shell(k: int, size: int):
    """Integer vectors of sup-norm exactly ``k``, in lexicographic order."""
    if k == 0:
        yield (0,) * size
        return
    for v in itertools.product(range(-k, k + 1), repeat=size):
        if max(abs(x) for x in v) == k:
            yield v


def _interior_candidate(w: GitWeights, need, avoid):
    """Integer ``rho`` whose class is strictly inside every required cone, if the LP finds one."""
    if w.class_rank == 0:
        return (0,) * w.size
    a_eq, a_ge = [], []
    for eqs, facets in need:
        a_eq += [list(e) for e in eqs]
        a_ge += [list(u) for u in facets]
    res = lp.solve_feasibility(w.class_rank, a_eq, [0] * len(a_eq), a_ge, [1] * len(a_ge))
    if not res.feasible or any(in_hrep(res.x, *h) for h in avoid):
        return None
    lift = lat.solve_rational(w.gale, res.x)
    if not any(lift):
        return (0,) * w.size
    # positive rescaling does not change semistability
    return lat.primitive_rational(lift)


def find_linearization(f: Fan, box: int | None = None, max_candidates: int = 200_000) -> Linearization:
    """A ``rho`` whose semistable patterns are exactly the nondegenerate ones.

    Candidates in ``Z^I`` are tried by sup-norm and then lexicographically,
    so the first hit is the smallest such ``rho``.  Only the maximal
    nondegenerate patterns and the minimal degenerate ones are tested
    during the search (semistability passes to subsets); the winner is
    re-checked on every pattern with :func:`is_semistable`.  If
    ``max_candidates`` run out first, a ``rho`` whose class lies strictly
    inside all required cones is taken from a rational LP instead, provided
    it fits in the box; ``method`` records which route succeeded.

    Raises
    ------
    SearchExhausted
        If neither route gives a ``rho`` with sup-norm at most ``box``
        (default ``3 |I|``).
    """
    rd = ray_data(f)
    k = len(rd)
    if box is None:
        box = 3 * k
    w = git_weights(rd)
    nondeg = nondegenerate_patterns(f)
    maximal = [p for p in nondeg if not any(p.sigma < q.sigma for q in nondeg)]
    minimal_bad = [
        p for p in all_patterns(k)
        if p not in nondeg and all(SupportPattern(p.sigma - {i}) in nondeg for i in p.sigma)
    ]
    need = [_class_hrep(w, p) for p in sorted(maximal, key=SupportPattern.key)]
    avoid = [_class_hrep(w, p) for p in sorted(minimal_bad, key=SupportPattern.key)]

    def accept(rho, tried, method):
        lin = Linearization(rho, box, transcript(f, rho), False, tried, method)
        if not lin.verified:
            raise AssertionError(f"{method} accepted rho but the full transcript disagrees")
        lin.stable = is_simplicial(rd.fan)
        return lin

    tried = 0
    radius = 0
    while radius <= box and tried < max_candidates:
        for rho in shell(radius, k):
            tried += 1
            cls = w.class_of(rho)
            if all(in_hrep(cls, *h) for h in need) and not any(in_hrep(cls, *h) for h in avoid):
                return accept(rho, tried, "search")
            if tried >= max_candidates:
                break
        else:
            radius += 1
    if radius > box:
        raise SearchExhausted(f"no linearization with sup-norm <= {box}", box)
    rho = _interior_candidate(w, need, avoid)
    if rho is not None and max(map(abs, rho), default=0) <= box:
        return accept(rho, tried, "lp")
    raise SearchExhausted(
        f"searched {tried} candidates up to sup-norm {radius} and the LP found no interior class", box)
