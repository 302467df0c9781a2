"""Equivariant resolution of fans and the construction of good chamber fans.

The resolution repeatedly picks the worst non-smooth cone, chooses a lattice
point in the half-open fundamental parallelepiped of a minimal non-smooth
face, and star-subdivides at its whole group orbit.  Every subdivision at
such a point strictly lowers the multiplicities of the cones it touches, so
the sorted multiplicity vector decreases lexicographically at each step.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import lattice as lat
from .errors import BudgetExceeded, NotCovering, NotStable
from .polyhedral import (
    Cone,
    Fan,
    MatrixGroup,
    _covers,
    fan_validate,
    is_complete,
    is_projective,
    is_smooth,
    is_stable,
    refines,
    saturate,
    star_subdivide,
    support_is_convex,
)
from .rootdata import RootDatum, diagram_automorphisms, dominant_chamber, weyl_group

DEFAULT_BUDGET = 1000


@dataclass
class RefinementStep:
    rays: list                 # the orbit subdivided at, in application order
    measure_before: tuple
    measure_after: tuple


@dataclass
class RefinementTrace:
    budget: int
    steps: list = field(default_factory=list)
    projective_checked: bool = False

    @property
    def iterations(self) -> int:
        return len(self.steps)

    def as_dict(self) -> dict:
        return {
            "budget": self.budget,
            "iterations": self.iterations,
            "projective_checked": self.projective_checked,
            "steps": [
                {"rays": [list(r) for r in s.rays],
                 "measure_before": [list(m) for m in s.measure_before],
                 "measure_after": [list(m) for m in s.measure_after]}
                for s in self.steps
            ],
        }


def cone_measure(cone: Cone) -> tuple[int, int]:
    """(excess rays over dimension, multiplicity); ``(0, 1)`` means smooth."""
    return (len(cone.rays) - cone.dim, cone.index)


def fan_measure(f: Fan) -> tuple:
    return tuple(sorted((cone_measure(f.cone(c)) for c in f.maximal_cones), reverse=True))


def _minimal_bad_face(cone: Cone) -> Cone:
    bad = [face for face in cone.faces if not face.is_smooth()]
    return min(bad, key=lambda c: (c.dim, len(c.rays), c.rays))


def parallelepiped_points(cone: Cone) -> list[tuple[tuple[int, ...], tuple]]:
    """Nonzero lattice points ``sum l_i r_i`` with ``0 <= l_i < 1``.

    Returned with their coefficient vectors.  ``cone`` must be simplicial.
    """
    rays = cone.rays
    n = cone.rank
    lo = [sum(min(0, r[k]) for r in rays) for k in range(n)]
    hi = [sum(max(0, r[k]) for r in rays) for k in range(n)]
    basis_rows = [list(r) for r in rays]
    out = []
    for p in itertools.product(*(range(a, b + 1) for a, b in zip(lo, hi))):
        if not any(p) or not all(lat.dot(e, p) == 0 for e in cone.equations):
            continue
        lam = lat.solve_rational(lat.transpose(basis_rows), p)
        if lam is not None and all(0 <= x < 1 for x in lam):
            out.append((p, lam))
    return out


def subdivision_ray(cone: Cone) -> tuple[int, ...]:
    """Canonical ray at which to subdivide a non-smooth cone.

    The barycenter of a minimal non-smooth face is used when it lies strictly
    inside that face's fundamental parallelepiped (or the face is not
    simplicial); otherwise the parallelepiped point with the smallest
    coefficient sum, ties broken lexicographically.
    """
    face = _minimal_bad_face(cone)
    total = tuple(sum(col) for col in zip(*face.rays))
    if not face.is_simplicial():
        return lat.primitive(total)
    if lat.gcd_list(total) > 1:
        return lat.primitive(total)
    pts = parallelepiped_points(face)
    p, _ = min(pts, key=lambda e: (sum(e[1]), e[0]))
    return p


def equivariant_smooth_refine(f: Fan, group: MatrixGroup, budget: int = DEFAULT_BUDGET,
                              check_projective: bool | None = None):
    """Smooth ``group``-stable refinement of a ``group``-stable fan.

    Parameters
    ----------
    f : Fan
        Valid fan, stable under ``group``.
    group : MatrixGroup
        Finite group.
    budget : int
        Maximum number of orbit steps.
    check_projective : bool, optional
        Re-run the projectivity LP after every step.  Defaults to whether
        ``f`` is itself projective (only decided when its support is convex).

    Returns
    -------
    (Fan, RefinementTrace)
    """
    if not is_stable(f, group):
        raise NotStable("input fan is not stable under the group")
    trace = RefinementTrace(budget)
    if check_projective is None:
        check_projective = _projective_or_none(f, group) is True
    trace.projective_checked = check_projective

    current = f
    while True:
        smooth = is_smooth(current)
        if smooth:
            break
        if trace.iterations >= budget:
            raise BudgetExceeded(f"not smooth after {budget} orbit steps", trace)
        before = fan_measure(current)
        worst = max(
            current.maximal_cones,
            key=lambda c: (cone_measure(current.cone(c)),
                           [tuple(-x for x in r) for r in current.cone(c).rays]),
        )
        v = subdivision_ray(current.cone(worst))
        orbit = sorted({lat.primitive(lat.matvec(g, v)) for g in group.elements()})
        applied = []
        for w in orbit:
            if w not in current.ray_index:
                current = star_subdivide(current, w)
                applied.append(w)
        after = fan_measure(current)
        trace.steps.append(RefinementStep(applied, before, after))
        if not after < before:
            raise AssertionError(f"multiplicity measure did not decrease: {before} -> {after}")
        if not is_stable(current, group):
            raise NotStable(f"orbit subdivision at {orbit} broke stability")
        if check_projective and not is_projective(current, group):
            raise AssertionError("subdivision lost projectivity")
    return current, trace


def _projective_or_none(f: Fan, group=None):
    if not support_is_convex(f):
        return None
    return bool(is_projective(f, group))


def intersect_with_chamber(f: Fan, rd: RootDatum) -> Fan:
    """Subfan of cones lying in the dominant chamber.

    Raises
    ------
    NotCovering
        If those cones do not cover the chamber.
    """
    chamber = dominant_chamber(rd)
    inside = [c for c in f.cones if all(chamber.contains(f.rays[i]) for i in c)]
    full = [f.cone(c) for c in inside if f.cone(c).dim == chamber.dim]
    if not _covers(full, chamber.dim, chamber.facet_normals):
        raise NotCovering("cones inside the dominant chamber do not cover it")
    return Fan.from_cones(f.rank, [[f.rays[i] for i in c] for c in inside])


@dataclass
class GoodFanResult:
    fan: Fan                    # subdivision of the dominant chamber
    saturated: Fan              # its Weyl saturation
    refined: Fan                # the smooth W x Gamma-stable complete fan
    trace: RefinementTrace
    weyl_projective: bool
    checks: dict


def good_fan(rd: RootDatum, gamma: MatrixGroup | None = None,
             budget: int = DEFAULT_BUDGET) -> GoodFanResult:
    """Gamma-stable subdivision of the dominant chamber with smooth projective W-saturation.

    Starts from the Weyl fan, refines it equivariantly for the group
    generated by ``W`` and ``gamma``, and cuts back to the chamber.  All
    postconditions are re-checked and recorded in ``checks``.
    """
    if gamma is None:
        gamma = diagram_automorphisms(rd)
    full_aut = diagram_automorphisms(rd)
    allowed = set(full_aut.elements())
    if not all(g in allowed for g in gamma.elements()):
        raise ValueError("gamma must consist of diagram automorphisms")
    w = weyl_group(rd)
    both = w.join(gamma)
    wf = saturate(Fan.from_cones(rd.rank, [dominant_chamber(rd).rays]), w)
    weyl_projective = bool(is_projective(wf, w))
    if not weyl_projective:
        raise AssertionError("Weyl fan is not projective; a projective subdivision is required first")
    refined, trace = equivariant_smooth_refine(wf, both, budget, check_projective=True)
    sigma = intersect_with_chamber(refined, rd)
    saturated = saturate(sigma, w)
    proj = is_projective(saturated, w)
    chamber_fan = Fan.from_cones(rd.rank, [dominant_chamber(rd).rays])
    checks = {
        "valid": fan_validate(sigma).ok,
        "support_is_chamber": refines(sigma, chamber_fan),
        "gamma_stable": bool(is_stable(sigma, gamma)),
        "saturation_weyl_stable": bool(is_stable(saturated, w)),
        "saturation_smooth": bool(is_smooth(saturated)),
        "saturation_complete": bool(is_complete(saturated)),
        "saturation_projective": bool(proj),
    }
    return GoodFanResult(sigma, saturated, refined, trace, weyl_projective, checks)
