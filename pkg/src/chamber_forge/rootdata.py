"""Root data of semisimple type, Weyl groups and Weyl fans.

Cartan matrices use the convention ``cartan[i][j] = <alpha_i^vee, alpha_j>``.
Cocharacters are written in one of two bases:

* adjoint form: fundamental coweights, so the dominant chamber is the
  positive orthant and simple coroot ``i`` is row ``i`` of the Cartan matrix;
* simply-connected form: simple coroots.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import lattice as lat
from .errors import NotAdjoint, NotFiniteType
from .polyhedral import Cone, Fan, MatrixGroup, saturate


class Form(enum.Enum):
    ADJOINT = "adjoint"
    SIMPLY_CONNECTED = "sc"

    @classmethod
    def parse(cls, value) -> "Form":
        if isinstance(value, Form):
            return value
        v = str(value).lower()
        if v in ("adjoint", "ad"):
            return cls.ADJOINT
        if v in ("sc", "simply-connected", "simply_connected"):
            return cls.SIMPLY_CONNECTED
        raise ValueError(f"unknown lattice form {value!r}")


PRESETS = {
    "A1": ((2,),),
    "A2": ((2, -1), (-1, 2)),
    "A3": ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    "B2": ((2, -1), (-2, 2)),
    "C2": ((2, -2), (-1, 2)),
    "G2": ((2, -3), (-1, 2)),
}

# orders of the Weyl groups, used as an independent check of the closure
CLASSICAL_WEYL_ORDERS = {"A1": 2, "A2": 6, "A3": 24, "B2": 8, "C2": 8, "G2": 12}


def check_finite_type(cartan) -> None:
    """Raise :class:`NotFiniteType` unless ``cartan`` is a finite-type Cartan matrix."""
    n = len(cartan)
    if n == 0 or any(len(row) != n for row in cartan):
        raise NotFiniteType("Cartan matrix must be square and nonempty")
    for i in range(n):
        if cartan[i][i] != 2:
            raise NotFiniteType("diagonal entries must be 2")
        for j in range(n):
            if i != j:
                if cartan[i][j] > 0:
                    raise NotFiniteType("off-diagonal entries must be nonpositive")
                if (cartan[i][j] == 0) != (cartan[j][i] == 0):
                    raise NotFiniteType("zero pattern must be symmetric")
    # symmetrize: d_i a_ij = d_j a_ji
    d = [None] * n
    for start in range(n):
        if d[start] is not None:
            continue
        d[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(n):
                if i != j and cartan[i][j] != 0:
                    dj = d[i] * Fraction(cartan[i][j], cartan[j][i])
                    if d[j] is None:
                        d[j] = dj
                        stack.append(j)
                    elif d[j] != dj:
                        raise NotFiniteType("Cartan matrix is not symmetrizable")
    sym = [[d[i] * cartan[i][j] for j in range(n)] for i in range(n)]
    for k in range(1, n + 1):
        minor = [row[:k] for row in sym[:k]]
        den = math.lcm(*(x.denominator for row in minor for x in row))
        if lat.det([[int(x * den) for x in row] for row in minor]) <= 0:
            raise NotFiniteType("symmetrized Cartan matrix is not positive definite")


@dataclass(frozen=True)
class RootDatum:
    cartan: tuple
    form: Form
    name: str | None = None

    @property
    def rank(self) -> int:
        return len(self.cartan)

    @cached_property
    def simple_coroots(self) -> tuple:
        n = self.rank
        if self.form is Form.ADJOINT:
            return tuple(tuple(self.cartan[i]) for i in range(n))
        return lat.identity(n)

    @cached_property
    def simple_roots(self) -> tuple:
        """Simple roots as linear functionals on cocharacter coordinates."""
        n = self.rank
        if self.form is Form.ADJOINT:
            return lat.identity(n)
        return tuple(tuple(self.cartan[i][j] for i in range(n)) for j in range(n))

    def pairing(self, root: int, v) -> int:
        return lat.dot(self.simple_roots[root], v)

    @cached_property
    def simple_reflections(self) -> tuple:
        n = self.rank
        out = []
        for i in range(n):
            a, c = self.simple_roots[i], self.simple_coroots[i]
            out.append(tuple(tuple(int(k == l) - c[k] * a[l] for l in range(n)) for k in range(n)))
        return tuple(out)

    @property
    def simple_labels(self) -> tuple:
        return tuple(f"alpha{i + 1}" for i in range(self.rank))


def build_root_datum(cartan, form="adjoint", name: str | None = None) -> RootDatum:
    """Root datum for a finite-type Cartan matrix in adjoint or simply-connected form."""
    cartan = lat.as_matrix(cartan)
    check_finite_type(cartan)
    rd = RootDatum(cartan, Form.parse(form), name)
    for i in range(rd.rank):
        for j in range(rd.rank):
            assert rd.pairing(j, rd.simple_coroots[i]) == cartan[i][j]
    return rd


def preset(name: str, form="adjoint") -> RootDatum:
    key = name.upper()
    if key not in PRESETS:
        raise KeyError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}")
    return build_root_datum(PRESETS[key], form, key)


def weyl_group(rd: RootDatum, budget: int = 100_000) -> MatrixGroup:
    """Weyl group generated by the simple reflections, fully enumerated."""
    w = MatrixGroup(rd.simple_reflections, rd.rank)
    w.elements(budget)
    return w


def dominant_chamber(rd: RootDatum) -> Cone:
    """Cone of cocharacters pairing nonnegatively with every simple root.

    Its rays are the fundamental coweights, made primitive in the chosen
    lattice.
    """
    n = rd.rank
    rays = []
    for i in range(n):
        # solve <alpha_j, v> = delta_ij
        v = lat.solve_rational(rd.simple_roots, [int(i == j) for j in range(n)])
        rays.append(lat.primitive_rational(v))
    return Cone.from_generators(rays, n)


def chamber_fan(rd: RootDatum) -> Fan:
    return Fan.from_cones(rd.rank, [dominant_chamber(rd).rays])


def weyl_fan(rd: RootDatum) -> Fan:
    """Complete fan whose maximal cones are the Weyl chambers."""
    return saturate(chamber_fan(rd), weyl_group(rd))


def diagram_automorphisms(rd: RootDatum) -> MatrixGroup:
    """Permutations of the simple roots preserving the Cartan matrix.

    In both coordinate systems such a permutation acts by permuting basis
    vectors, so each element is a permutation matrix.
    """
    n = rd.rank
    gens = []
    for perm in itertools.permutations(range(n)):
        if all(rd.cartan[perm[i]][perm[j]] == rd.cartan[i][j] for i in range(n) for j in range(n)):
            if list(perm) == list(range(n)):
                continue
            gens.append(tuple(tuple(int(perm[j] == i) for j in range(n)) for i in range(n)))
    return MatrixGroup(gens, n)


@dataclass(frozen=True)
class Stratum:
    roots: frozenset      # subset S of the simple roots (by index)
    face: Cone            # face of the dominant chamber spanned by the coweights in S

    @property
    def codim(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class StrataPoset:
    """Orbit closures of the adjoint compactification, by subsets of simple roots.

    The stratum for ``S`` is the intersection of the boundary divisors
    indexed by ``S``; ``S = {}`` is the open stratum.  Order is reverse
    inclusion: ``S <= S'`` iff the stratum of ``S`` lies in the closure of
    the stratum of ``S'``, i.e. ``S`` contains ``S'``.
    """

    rank: int
    strata: tuple

    def __len__(self):
        return len(self.strata)

    @property
    def divisors(self) -> list:
        return [s for s in self.strata if len(s.roots) == 1]

    def leq(self, a: Stratum, b: Stratum) -> bool:
        return a.roots >= b.roots

    def face_of(self, subset) -> Cone:
        return next(s.face for s in self.strata if s.roots == frozenset(subset))


def boundary_strata(rd: RootDatum) -> StrataPoset:
    """Strata of the boundary, labelled by faces of the dominant chamber.

    Raises
    ------
    NotAdjoint
        For the simply-connected form.
    """
    if rd.form is not Form.ADJOINT:
        raise NotAdjoint("boundary strata are computed for the adjoint form")
    chamber = dominant_chamber(rd)
    n = rd.rank
    coweights = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    strata = []
    for k in range(n + 1):
        for subset in itertools.combinations(range(n), k):
            face = Cone.from_generators([coweights[i] for i in subset], n)
            assert frozenset(face.rays) in chamber.face_ray_sets()
            strata.append(Stratum(frozenset(subset), face))
    return StrataPoset(n, tuple(strata))
