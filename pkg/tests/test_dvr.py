from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from chamber_forge import lattice as lat
from chamber_forge.dvr import (
    DvrFan,
    UnipotentAction,
    angular_sort,
    apply_action,
    bounded_family_report,
    complete_fan_from_rays,
    complete_rank2_fans,
    is_constant_family,
    no_stable_fan_report,
    orbit_escape_witness,
    orbit_table,
    primitive_box_directions,
    pullback,
    recession_fan,
    special_fiber_components,
    vertical_fan,
)
from chamber_forge.errors import NoRayOffAxis, NotAFan, NotUnipotent
from chamber_forge.polyhedral import Fan, MatrixGroup, is_complete, is_stable

import corpus
import oracles

A = UnipotentAction(((1, 1), (0, 1)))


def upper_half_plane():
    return DvrFan.from_cones(1, [[(1, 0), (1, 1)], [(1, 1), (0, 1)], [(0, 1), (-1, 1)],
                                 [(-1, 1), (-1, 0)]])


def test_recession_fan_examples():
    assert recession_fan(upper_half_plane()) == corpus.p1()
    zero = recession_fan(vertical_fan(1))
    assert zero.cones == frozenset({frozenset()})
    for base in (corpus.p1(), corpus.p2(), corpus.p1xp1()):
        assert recession_fan(pullback(base)) == base


def test_recession_fan_overlap_is_reported():
    # raw (unvalidated) data whose height-zero cones overlap
    rays = [(1, 0, 0), (1, 1, 0), (1, 2, 0)]
    f = Fan(3, rays, [(), (0,), (1,), (2,), (0, 1), (0, 2)])
    with pytest.raises(NotAFan):
        recession_fan(DvrFan(2, f))


def test_special_fiber_examples():
    one = special_fiber_components(vertical_fan(2))
    assert one.count == 1 and one.vertices == ((0, 0),)
    d = DvrFan.from_cones(2, [[(0, 0, 1), (1, 0, 1), (0, 1, 0)], [(0, 0, 1), (1, 0, 1), (0, -1, 0)]])
    assert special_fiber_components(d).count == 2
    assert special_fiber_components(d).vertices == ((0, 0), (1, 0))
    flat = DvrFan.from_cones(1, [[(1, 0)], [(-1, 0)]])
    assert special_fiber_components(flat).count == 0


def test_special_fiber_rational_vertices():
    d = DvrFan.from_cones(1, [[(1, 2), (0, 1)]])
    assert special_fiber_components(d).vertices == ((Fraction(0),), (Fraction(1, 2),))
    assert special_fiber_components(upper_half_plane()).count == 3


def test_constant_family_examples():
    assert is_constant_family(pullback(corpus.p1()))
    assert not is_constant_family(DvrFan.from_cones(1, [[(1, 1)]]))
    assert is_constant_family(DvrFan(1, Fan(2, [], [()])))


def test_dvr_fan_rejects_lower_half():
    with pytest.raises(ValueError):
        DvrFan.from_cones(1, [[(1, -1)]])


def test_apply_action_examples():
    ray = Fan.from_cones(2, [[(0, 1)]])
    assert apply_action(ray, A).rays == ((1, 1),)
    axis = Fan.from_cones(2, [[(1, 0)]])
    assert apply_action(axis, A) == axis
    ident = UnipotentAction(((1, 0), (0, 1)))
    assert apply_action(corpus.p1xp1(), ident) == corpus.p1xp1()
    lifted = apply_action(pullback(corpus.p1xp1()), A)
    assert lifted.fan.rank == 3 and is_constant_family(lifted)


def test_unipotent_classification():
    assert A.is_unipotent() and A.fixed_axis == [(1, 0)]
    assert not UnipotentAction(((1, 0), (0, 1))).is_unipotent()
    assert not UnipotentAction(((0, -1), (1, 0))).is_unipotent()
    assert UnipotentAction(((0, 1), (-1, 2))).is_unipotent()
    with pytest.raises(ValueError):
        UnipotentAction(((2, 0), (0, 1)))


def test_orbit_table_is_n_one():
    table = orbit_table(A, (0, 1), 100)
    assert all(v == (n, 1) for n, v in table)
    assert len({v for _, v in table}) == 101
    assert A.power(-3) == ((1, -3), (0, 1))
    assert lat.matmul(A.power(5), A.power(-5)) == lat.identity(2)


def test_escape_witness_p1xp1():
    w = orbit_escape_witness(corpus.p1xp1(), A)
    assert (w.ray, w.n, w.image) == ((0, 1), 1, (1, 1))


def test_escape_witness_six_ray_fan():
    f = complete_fan_from_rays([(1, 0), (2, 1), (1, 1), (0, 1), (-1, 0), (0, -1)])
    assert len(f.rays) == 6
    w = orbit_escape_witness(f, A)
    assert w.n <= 3 and w.image not in f.rays
    assert w.image == lat.matvec(A.power(w.n), w.ray)


def test_escape_witness_preconditions():
    with pytest.raises(NotUnipotent):
        orbit_escape_witness(corpus.p1xp1(), UnipotentAction(((1, 0), (0, 1))))
    axis_only = Fan.from_cones(2, [[(1, 0)], [(-1, 0)]])
    with pytest.raises(NoRayOffAxis):
        orbit_escape_witness(axis_only, A)


def test_report_examples():
    assert no_stable_fan_report(A, []).size == 0
    rep = no_stable_fan_report(A, [corpus.p1xp1(), corpus.p2(), corpus.weyl("A2")])
    assert rep.size == 3 and rep.all_refuted and not rep.library_bugs
    with pytest.raises(NotUnipotent):
        no_stable_fan_report(UnipotentAction(((1, 0), (0, 1))), [])


def test_bounded_family_b1_matches_oracle():
    count, ndirs = oracles.count_complete_rank2_fans(1)
    assert len(primitive_box_directions(1)) == ndirs == 8
    rep = bounded_family_report(A, 1)
    assert rep.size == count == 131
    assert rep.all_refuted and not rep.library_bugs


@pytest.mark.parametrize("matrix", [((1, 0), (1, 1)), ((0, 1), (-1, 2)), ((1, -2), (0, 1))])
def test_conjugate_unipotents_refute_b1_family(matrix):
    rep = bounded_family_report(UnipotentAction(matrix), 1)
    assert rep.size == 131 and rep.all_refuted and not rep.library_bugs


def test_generated_fans_are_complete():
    for f in complete_rank2_fans(1):
        assert is_complete(f)


directions = primitive_box_directions(3)


@given(st.sets(st.sampled_from(directions), min_size=3, max_size=8))
def test_escape_witness_property(chosen):
    rays = angular_sort(chosen)
    ok = all(a[0] * b[1] - a[1] * b[0] > 0 for a, b in zip(rays, rays[1:] + rays[:1]))
    if not ok:
        with pytest.raises(ValueError):
            complete_fan_from_rays(rays)
        return
    f = complete_fan_from_rays(rays)
    w = orbit_escape_witness(f, A)
    assert w.ray in f.rays and w.ray[1] != 0
    assert w.image not in f.rays and w.image == lat.matvec(A.power(w.n), w.ray)
    assert not is_stable(f, MatrixGroup([A.matrix]))


def test_angular_sort_order():
    vs = [(0, -1), (1, 1), (-1, 0), (1, 0), (0, 1), (1, -1)]
    assert angular_sort(vs) == [(1, 0), (1, 1), (0, 1), (-1, 0), (0, -1), (1, -1)]
    assert angular_sort(vs, (0, 1))[0] == (0, 1)
