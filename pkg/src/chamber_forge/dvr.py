"""Fans over a discrete valuation ring and unipotent actions on them.

A toric scheme over a DVR with generic fibre a torus of rank ``n`` is
described by a fan in ``R^n x R_{>=0}``.  Its height-zero part (the
recession fan) describes the generic fibre, and the vertices of its slice
at height one index the components of the special fibre.

The second half of the module refutes, candidate by candidate, the
existence of a complete rank-two fan stable under a nontrivial unipotent
matrix: some ray off the fixed axis has an infinite orbit, so a finite
fan cannot contain it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from fractions import Fraction

from . import lattice as lat
from .errors import BoundExceeded, NoRayOffAxis, NotAFan, NotUnipotent
from .parallel import ordered_map
from .polyhedral import Fan, MatrixGroup, fan_validate, is_stable


@dataclass(frozen=True)
class DvrFan:
    """Fan in rank ``base_rank + 1`` lying in the closed upper half-space."""

    base_rank: int
    fan: Fan

    def __post_init__(self):
        if self.fan.rank != self.base_rank + 1:
            raise ValueError("fan rank must be base_rank + 1")
        if any(r[-1] < 0 for r in self.fan.rays):
            raise ValueError("every ray must have nonnegative last coordinate")

    @classmethod
    def from_cones(cls, base_rank: int, cones) -> "DvrFan":
        return cls(base_rank, Fan.from_cones(base_rank + 1, cones))

    @property
    def vertical(self) -> tuple:
        return (0,) * self.base_rank + (1,)

    def validate(self) -> list[str]:
        return fan_validate(self.fan).errors


def vertical_fan(base_rank: int) -> DvrFan:
    """The cone ``{0} x R_{>=0}``: the split torus over the DVR."""
    return DvrFan.from_cones(base_rank, [[(0,) * base_rank + (1,)]])


def pullback(base: Fan) -> DvrFan:
    """Constant family: each cone ``s`` of ``base`` and ``s + R_{>=0} (0, 1)``."""
    up = (0,) * base.rank + (1,)
    cones = []
    for c in base.maximal_cones:
        rays = [base.rays[i] + (0,) for i in c]
        cones.append(rays + [up])
    if not cones:
        cones = [[up]]
    return DvrFan.from_cones(base.rank, cones)


def recession_fan(d: DvrFan) -> Fan:
    """Projection of the height-zero faces of ``d`` to ``R^n``.

    Raises
    ------
    NotAFan
        If the projected cones do not form a fan.
    """
    n = d.base_rank
    cones = []
    for c in d.fan.cones:
        low = [d.fan.rays[i][:n] for i in c if d.fan.rays[i][-1] == 0]
        cones.append(low)
    f = Fan.from_cones(n, cones)
    rep = fan_validate(f)
    if not rep.ok:
        raise NotAFan("; ".join(rep.errors))
    return f


@dataclass(frozen=True)
class SpecialFiber:
    count: int
    vertices: tuple      # rational points of R^n, sorted


def special_fiber_components(d: DvrFan) -> SpecialFiber:
    """Vertices of the slice of ``d`` at height one.

    Each cone meets the hyperplane ``h = 1`` in a polyhedron whose vertices
    are its rays of positive height rescaled to height one, so the
    vertices of the whole complex are those rescaled rays.
    """
    n = d.base_rank
    verts = {
        tuple(Fraction(x, r[-1]) for x in r[:n])
        for r in (d.fan.rays[i] for c in d.fan.cones for i in c)
        if r[-1] > 0
    }
    return SpecialFiber(len(verts), tuple(sorted(verts)))


def is_constant_family(d: DvrFan) -> bool:
    """Every ray is vertical or has height zero."""
    return all(r == d.vertical or r[-1] == 0 for r in d.fan.rays)


# --------------------------------------------------------------------------
# unipotent actions


@dataclass(frozen=True)
class UnipotentAction:
    """Unimodular matrix on the base lattice, trivial on the height."""

    matrix: tuple

    def __post_init__(self):
        m = lat.as_matrix(self.matrix)
        if not m or any(len(row) != len(m) for row in m) or abs(lat.det(m)) != 1:
            raise ValueError(f"{self.matrix} is not a unimodular square matrix")
        object.__setattr__(self, "matrix", m)

    @property
    def rank(self) -> int:
        return len(self.matrix)

    @cached_property
    def nilpotent_part(self) -> tuple:
        n = self.rank
        return tuple(tuple(self.matrix[i][j] - int(i == j) for j in range(n)) for i in range(n))

    def is_identity(self) -> bool:
        return not any(any(row) for row in self.nilpotent_part)

    @cached_property
    def _unipotent(self) -> bool:
        nil = self.nilpotent_part
        return not self.is_identity() and not any(any(row) for row in lat.matmul(nil, nil))

    def is_unipotent(self) -> bool:
        """``(A - I)^2 = 0`` and ``A != I``."""
        return self._unipotent

    @cached_property
    def fixed_axis(self) -> list[tuple[int, ...]]:
        """Basis of ``ker(A - I)``."""
        return lat.nullspace(self.nilpotent_part, self.rank)

    def power(self, n: int) -> tuple:
        # (A - I)^2 = 0 gives A^n = I + n (A - I) for every integer n
        if not self.is_unipotent():
            out = lat.identity(self.rank)
            base = self.matrix if n >= 0 else lat.integer_inverse(self.matrix)
            for _ in range(abs(n)):
                out = lat.matmul(base, out)
            return out
        nil = self.nilpotent_part
        r = self.rank
        return tuple(tuple(int(i == j) + n * nil[i][j] for j in range(r)) for i in range(r))

    def lifted(self) -> tuple:
        """Block matrix acting on ``R^n x R``, trivially on the last coordinate."""
        n = self.rank
        return tuple(tuple(self.matrix[i]) + (0,) for i in range(n)) + ((0,) * n + (1,),)


def _require_unipotent(u: UnipotentAction):
    if not u.is_unipotent():
        raise NotUnipotent(f"{u.matrix} is not a nontrivial unipotent matrix")


def apply_action(f, u: UnipotentAction):
    """Image of a fan (or a :class:`DvrFan`) under ``u``."""
    if isinstance(f, DvrFan):
        if f.base_rank != u.rank:
            raise ValueError("action rank does not match the base rank")
        return DvrFan(f.base_rank, f.fan.apply(u.lifted()))
    if f.rank != u.rank:
        raise ValueError("action rank does not match the fan rank")
    return f.apply(u.matrix)


def orbit_table(u: UnipotentAction, v=(0, 1), n_max: int = 100) -> list[tuple[int, tuple]]:
    """``(n, A^n v)`` for ``n = 0 .. n_max``."""
    return [(n, lat.matvec(u.power(n), v)) for n in range(n_max + 1)]


@dataclass(frozen=True)
class EscapeWitness:
    ray: tuple
    n: int
    image: tuple

    def as_dict(self) -> dict:
        return {"ray": list(self.ray), "n": self.n, "image": list(self.image)}


def _angle_key(v):
    # exact counterclockwise angle from the positive x-axis: the half-plane,
    # then -x/y, which increases with the angle inside each half
    x, y = v
    if y == 0:
        return (0, -1, 0) if x > 0 else (1, -1, 0)
    return (0 if y > 0 else 1, 0, Fraction(-x, y))


def angular_sort(vectors, start=(1, 0)):
    """Sort rank-2 vectors counterclockwise, beginning at direction ``start``."""
    a, b = start
    # rotation-similarity taking start to the positive x-axis
    return sorted(vectors, key=lambda v: _angle_key((a * v[0] + b * v[1], -b * v[0] + a * v[1])))


def orbit_escape_witness(f: Fan, u: UnipotentAction, bound: int | None = None) -> EscapeWitness:
    """A ray ``l`` of ``f`` moved by ``u`` and ``n`` with ``A^n l`` not a ray of ``f``.

    Rays are tried counterclockwise from the fixed axis.  Since
    ``A^n l = l + n (A - I) l`` the orbit of a moved ray is infinite, so a
    witness exists within ``bound = #rays + 1`` steps for every finite fan.

    Raises
    ------
    NotUnipotent
        If ``u`` is the identity or not unipotent.
    NoRayOffAxis
        If every ray is fixed, which a complete fan cannot allow.
    BoundExceeded
        If no ``n <= bound`` works (impossible for the default bound).
    """
    _require_unipotent(u)
    if f.rank != 2 or u.rank != 2:
        raise ValueError("orbit escape witnesses are for rank-2 fans")
    if bound is None:
        bound = len(f.rays) + 1
    axis = lat.primitive(u.fixed_axis[0])
    if axis < tuple(0 for _ in axis):
        axis = tuple(-x for x in axis)
    moved = [r for r in angular_sort(f.rays, axis) if lat.matvec(u.matrix, r) != r]
    if not moved:
        raise NoRayOffAxis("every ray lies on the fixed axis; the fan is not complete")
    rays = set(f.rays)
    for ray in moved:
        for n in range(1, bound + 1):
            image = lat.matvec(u.power(n), ray)
            if image not in rays:
                return EscapeWitness(ray, n, image)
    raise BoundExceeded(f"every moved ray stays in the fan for {bound} steps")


@dataclass
class CandidateVerdict:
    index: int
    rays: tuple
    stable: bool
    stability_witness: dict | None
    escape: EscapeWitness | None

    @property
    def refuted(self) -> bool:
        return (not self.stable) or self.escape is not None

    def as_dict(self) -> dict:
        return {
            "index": self.index,
            "rays": [list(r) for r in self.rays],
            "stable": self.stable,
            "stability_witness": self.stability_witness,
            "escape": self.escape.as_dict() if self.escape else None,
            "refuted": self.refuted,
        }


@dataclass
class NoStableFanReport:
    matrix: tuple
    universe: str
    verdicts: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.verdicts)

    @property
    def all_refuted(self) -> bool:
        return all(v.refuted for v in self.verdicts)

    @property
    def library_bugs(self) -> list:
        """Candidates that looked stable, or stable yet escaping: both impossible."""
        return [v.index for v in self.verdicts if not v.refuted or (v.stable and v.escape)]

    def as_dict(self, full: bool = True) -> dict:
        out = {
            "matrix": [list(r) for r in self.matrix],
            "universe": self.universe,
            "candidates": self.size,
            "all_refuted": self.all_refuted,
            "library_bugs": self.library_bugs,
        }
        if full:
            out["verdicts"] = [v.as_dict() for v in self.verdicts]
        return out


def no_stable_fan_report(u: UnipotentAction, candidates, universe: str = "explicit list") -> NoStableFanReport:
    """Refute ``u``-stability for each complete rank-2 candidate fan.

    Each candidate gets both a direct stability check (``A`` must map cones
    to cones) and an orbit escape witness.  A candidate passing both checks
    would contradict the finiteness argument and is listed in
    ``library_bugs``.
    """
    _require_unipotent(u)
    report = NoStableFanReport(u.matrix, universe)
    report.verdicts = ordered_map(_refute, [(k, f, u) for k, f in enumerate(candidates)])
    return report


def _refute(item) -> CandidateVerdict:
    k, f, u = item
    st = is_stable(f, MatrixGroup([u.matrix], u.rank))
    try:
        esc = orbit_escape_witness(f, u)
    except (NoRayOffAxis, BoundExceeded):
        esc = None
    return CandidateVerdict(k, f.rays, bool(st), st.witness, esc)


# --------------------------------------------------------------------------
# the bounded family of complete rank-2 fans


def primitive_box_directions(bound: int) -> list[tuple[int, int]]:
    """Primitive vectors with sup-norm at most ``bound``, counterclockwise from ``(1, 0)``."""
    vs = [(a, b) for a in range(-bound, bound + 1) for b in range(-bound, bound + 1)
          if (a, b) != (0, 0) and lat.is_primitive((a, b))]
    return angular_sort(vs)


def complete_fan_from_rays(rays) -> Fan:
    """Complete rank-2 fan on rays listed counterclockwise with all gaps below pi."""
    rays = [tuple(r) for r in rays]
    k = len(rays)
    for i in range(k):
        a, b = rays[i], rays[(i + 1) % k]
        if k < 3 or a[0] * b[1] - a[1] * b[0] <= 0:
            raise ValueError("consecutive rays must turn counterclockwise by less than pi")
    order = sorted(rays)
    idx = {r: i for i, r in enumerate(order)}
    cones = [frozenset()] + [frozenset([i]) for i in range(k)]
    cones += [frozenset([idx[rays[i]], idx[rays[(i + 1) % k]]]) for i in range(k)]
    return Fan(2, order, cones)


def complete_rank2_fans(bound: int):
    """Every complete fan in rank 2 whose rays have sup-norm at most ``bound``.

    A complete fan in the plane is determined by its rays, and a set of
    directions comes from one exactly when consecutive directions are less
    than pi apart.
    """
    dirs = primitive_box_directions(bound)
    m = len(dirs)
    for size in range(3, m + 1):
        for subset in itertools.combinations(range(m), size):
            rays = [dirs[i] for i in subset]
            ok = True
            for i in range(size):
                a, b = rays[i], rays[(i + 1) % size]
                if a[0] * b[1] - a[1] * b[0] <= 0:
                    ok = False
                    break
            if ok:
                yield complete_fan_from_rays(rays)


def bounded_family_report(u: UnipotentAction, bound: int) -> NoStableFanReport:
    fans = list(complete_rank2_fans(bound))
    universe = f"all complete rank-2 fans with primitive rays of sup-norm <= {bound}"
    return no_stable_fan_report(u, fans, universe)
