import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from picardkit.cones import (
    ConePoly,
    dual_cone,
    extremal_rays,
    in_cone_lp,
    is_simplicial,
    lattice_form,
    mori_cone,
    psef_generators,
    surface_cone_report,
)
from picardkit.curves import enumerate_exceptional
from picardkit.lattice import SurfaceModel, canonical_class, pairing


def _bp(r: int) -> SurfaceModel:
    return SurfaceModel.blowup_p2(r)


def _pp(n: int) -> SurfaceModel:
    return SurfaceModel.product_p1(n)


# --- duals -----------------------------------------------------------------

def test_orthant_is_self_dual():
    c = ConePoly.from_generators([(1, 0), (0, 1)])
    assert sorted(dual_cone(c).rays()) == [(0, 1), (1, 0)]


def test_dual_of_effective_cone_on_one_blowup():
    # generators E1 and H - E1, dualized by the intersection form
    c = ConePoly.from_generators([(0, 1), (1, -1)])
    d = dual_cone(c, lattice_form(_bp(1)))
    assert sorted(d.rays()) == [(1, -1), (1, 0)]


def test_rulings_self_dual_under_hyperbolic_form():
    c = ConePoly.from_generators([(1, 0), (0, 1)])
    d = dual_cone(c, lattice_form(_pp(2)))
    assert sorted(d.rays()) == [(0, 1), (1, 0)]


def test_dual_of_zero_cone_is_everything():
    z = ConePoly.from_generators([], ambient_dim=3)
    d = dual_cone(z)
    assert d.span_rank() == 3
    assert d.contains((1, -2, 5))
    assert d.contains((0, 0, -9), via="lp")


def test_dual_of_whole_plane_is_zero():
    plane = ConePoly.from_generators([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert plane.facet_normals() == ()
    assert plane.contains((3, -7))
    assert dual_cone(plane).rays() == ()


# --- extremal rays and simpliciality ---------------------------------------

def test_square_cone_has_four_extremal_rays():
    sq = ConePoly.from_generators(
        [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1), (0, 0, 1)])
    assert extremal_rays(sq) == [(-1, 0, 1), (0, -1, 1), (0, 1, 1), (1, 0, 1)]
    assert not is_simplicial(sq)


def test_interior_generator_is_dropped():
    c = ConePoly.from_generators([(1, 0), (1, 1), (0, 1)])
    assert extremal_rays(c) == [(0, 1), (1, 0)]


def test_orthant_is_simplicial():
    basis = [tuple(1 if j == i else 0 for j in range(4)) for i in range(4)]
    assert is_simplicial(ConePoly.from_generators(basis))


def test_all_effective_generators_extremal_rank7():
    cone = mori_cone(_bp(7))
    ext = extremal_rays(cone)
    assert len(ext) == 56
    assert set(ext) == set(cone.rays())


def test_halfplane_lineality():
    hp = ConePoly.from_generators([(1, 0), (-1, 0), (0, 1)])
    assert extremal_rays(hp) == [(-1, 0), (0, 1), (1, 0)]
    assert not is_simplicial(hp)
    assert hp.facet_normals() == ((0, 1),)
    assert not hp.contains((5, -3))
    assert not hp.contains((5, -3), via="lp")
    assert hp.contains((5, 3)) and hp.contains((5, 3), via="lp")


def test_mori_cone_of_products_is_simplicial():
    for n in (2, 3, 4):
        cone = mori_cone(_pp(n))
        assert is_simplicial(cone)
        assert len(cone.rays()) == n


# --- membership routes ------------------------------------------------------

def test_membership_accepts_rationals():
    c = ConePoly.from_generators([(1, 0), (1, 2)])
    x = (Fraction(3, 2), Fraction(1, 2))
    assert c.contains(x) and c.contains(x, via="lp")
    y = (Fraction(1, 3), Fraction(5, 3))
    assert not c.contains(y) and not c.contains(y, via="lp")


def test_unknown_membership_route_rejected():
    c = ConePoly.from_generators([(1, 0)])
    with pytest.raises(ValueError):
        c.contains((1, 0), via="euclid")


def test_constructor_validation():
    with pytest.raises(ValueError):
        ConePoly(2)
    with pytest.raises(ValueError):
        ConePoly.from_generators([])
    with pytest.raises(ValueError):
        ConePoly.from_generators([(1, 0), (1, 0, 0)])


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_nonnegative_combinations_are_members(data):
    dim = data.draw(st.integers(2, 4))
    count = data.draw(st.integers(1, 5))
    gens = [
        tuple(data.draw(st.integers(-4, 4)) for _ in range(dim))
        for _ in range(count)
    ]
    if not any(any(g) for g in gens):
        gens = [tuple(1 if i == 0 else 0 for i in range(dim))]
    coeffs = [data.draw(st.integers(0, 3)) for _ in gens]
    x = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(dim))
    cone = ConePoly.from_generators(gens, ambient_dim=dim)
    assert in_cone_lp(cone.rays(), x)
    assert cone.contains(x, via="lp")
    assert cone.contains(x, via="facets")


# --- randomized dual-route validation ---------------------------------------

def _random_cone(rng: random.Random, dim: int, count: int) -> ConePoly:
    gens = [tuple(rng.randint(-5, 5) for _ in range(dim)) for _ in range(count)]
    gens = [g for g in gens if any(g)] or [tuple([1] + [0] * (dim - 1))]
    return ConePoly.from_generators(gens, ambient_dim=dim)


def test_double_dual_returns_the_same_cone():
    rng = random.Random(20260816)
    for _ in range(25):
        dim = rng.randint(2, 5)
        c = _random_cone(rng, dim, rng.randint(2, 7))
        dd = dual_cone(dual_cone(c))
        assert all(dd.contains(g, via="lp") for g in c.rays())
        assert all(c.contains(r, via="lp") for r in dd.rays())


def test_facet_and_lp_membership_agree():
    rng = random.Random(4711)
    for _ in range(8):
        dim = rng.randint(2, 4)
        c = _random_cone(rng, dim, rng.randint(2, 6))
        for _ in range(100):
            if rng.random() < 0.5:
                x = tuple(rng.randint(-6, 6) for _ in range(dim))
            else:
                coeffs = [rng.randint(0, 3) for _ in c.rays()]
                x = tuple(sum(a * g[i] for a, g in zip(coeffs, c.rays()))
                          for i in range(dim))
            assert c.contains(x, via="facets") == c.contains(x, via="lp")


def test_dd_rays_match_lp_extremal_rays_on_pointed_cones():
    # last coordinate positive forces pointedness, so both routes must
    # recover exactly the same minimal ray set
    rng = random.Random(99)
    for _ in range(15):
        dim = rng.randint(2, 4)
        gens = [
            tuple([rng.randint(-4, 4) for _ in range(dim - 1)] + [rng.randint(1, 4)])
            for _ in range(rng.randint(2, 7))
        ]
        c = ConePoly.from_generators(gens, ambient_dim=dim)
        via_lp = set(extremal_rays(c))
        rebuilt = ConePoly.from_facets(c.facet_normals(), dim)
        assert set(rebuilt.rays()) == via_lp


# --- surface reports ---------------------------------------------------------

def test_report_plane():
    rep = surface_cone_report(_bp(0))
    assert rep.equal
    assert rep.mori_simplicial
    assert rep.picard_number == 1
    assert rep.psef.rays() == ((1,),)


def test_report_one_blowup():
    rep = surface_cone_report(_bp(1))
    assert not rep.equal
    assert rep.mori_simplicial
    assert sorted(rep.nef.rays()) == [(1, -1), (1, 0)]
    assert sorted(rep.psef.rays()) == [(0, 1), (1, -1)]


def test_report_product_of_lines():
    rep = surface_cone_report(_pp(2))
    assert rep.equal
    assert rep.mori_simplicial
    assert rep.picard_number == 2
    assert sorted(rep.nef.rays()) == [(0, 1), (1, 0)]


def test_equal_exactly_for_plane_and_product():
    expected = {0: True, 1: False, 2: False, 3: False, 4: False,
                5: False, 6: False, 7: False, 8: False}
    for r, want in expected.items():
        assert surface_cone_report(_bp(r)).equal is want


def test_mori_simplicial_iff_small_rank():
    for r in range(9):
        rep = surface_cone_report(_bp(r))
        assert rep.mori_simplicial is (r <= 2)


def test_anticanonical_positive_on_effective_generators():
    for r in range(1, 9):
        model = _bp(r)
        mk = -canonical_class(model)
        assert all(pairing(mk, g) > 0 for g in psef_generators(model))


def test_psef_generator_tables():
    assert [g.coords for g in psef_generators(_bp(1))] == [(0, 1), (1, -1)]
    assert len(psef_generators(_bp(8))) == 240
    assert set(psef_generators(_bp(6))) == set(enumerate_exceptional(6))
    with pytest.raises(ValueError):
        psef_generators(_pp(3))


def test_report_rejects_larger_products():
    with pytest.raises(ValueError):
        surface_cone_report(_pp(4))


def test_nef_description_stays_lazy_for_large_rank():
    rep = surface_cone_report(_bp(7))
    assert rep.nef._generators is None
    # membership still works through the facet description
    h = (1, 0, 0, 0, 0, 0, 0, 0)
    assert rep.nef.contains(h)
    e1 = (0, 1, 0, 0, 0, 0, 0, 0)
    assert not rep.nef.contains(e1)
