from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from picardkit.lattice import (
    DivisorClass,
    SurfaceModel,
    adjunction_genus,
    canonical_class,
    pairing,
    top_intersection,
)

DP7 = SurfaceModel.blowup_p2(7)


def cls(model, *coords):
    return DivisorClass(model, tuple(coords))


def test_model_validation():
    with pytest.raises(ValueError):
        SurfaceModel.blowup_p2(9)
    with pytest.raises(ValueError):
        SurfaceModel.blowup_p2(-1)
    with pytest.raises(ValueError):
        SurfaceModel.product_p1(0)
    assert SurfaceModel.blowup_p2(3).rank == 4
    assert SurfaceModel.product_p1(3).rank == 3
    assert SurfaceModel.blowup_p2(2).basis_labels == ("H", "E1", "E2")


def test_divisor_class_validation():
    with pytest.raises(ValueError):
        cls(DP7, 1, 2)  # wrong length
    with pytest.raises(ValueError):
        DivisorClass(DP7, (Fraction(1, 2),) * 8)  # non-integer entries


def test_cross_model_classes_never_equal():
    a = cls(SurfaceModel.blowup_p2(1), 1, 0)
    b = cls(SurfaceModel.product_p1(2), 1, 0)
    assert a != b
    assert a == cls(SurfaceModel.blowup_p2(1), 1, 0)


def test_from_curve_and_multiplicities_roundtrip():
    c = DivisorClass.from_curve(DP7, 3, (0, 1, 1, 1, 1, 1, 2))
    assert c.coords == (3, 0, -1, -1, -1, -1, -1, -2)
    assert c.degree == 3
    assert c.multiplicities() == (0, 1, 1, 1, 1, 1, 2)
    # padding
    assert DivisorClass.from_curve(DP7, 1, (1,)).coords == (1, -1, 0, 0, 0, 0, 0, 0)


def test_pairing_examples():
    k7 = canonical_class(DP7)
    assert k7.coords == (-3, 1, 1, 1, 1, 1, 1, 1)
    assert pairing(k7, k7) == 2

    dp3 = SurfaceModel.blowup_p2(3)
    h = cls(dp3, 1, 0, 0, 0)
    assert pairing(h, h) == 1

    c1 = DivisorClass.from_curve(DP7, 1, (1,))
    c2 = DivisorClass.from_curve(DP7, 3, (0, 1, 1, 1, 1, 1, 2))
    assert pairing(c1, c2) == 3


def test_pairing_errors():
    a = cls(SurfaceModel.blowup_p2(1), 1, 0)
    b = cls(SurfaceModel.blowup_p2(2), 1, 0, 0)
    with pytest.raises(ValueError):
        pairing(a, b)
    p3 = SurfaceModel.product_p1(3)
    with pytest.raises(ValueError):
        pairing(cls(p3, 1, 0, 0), cls(p3, 0, 1, 0))


def test_hyperbolic_pairing_on_p1xp1():
    p2 = SurfaceModel.product_p1(2)
    h1, h2 = cls(p2, 1, 0), cls(p2, 0, 1)
    assert pairing(h1, h2) == 1
    assert pairing(h1, h1) == 0
    k = canonical_class(p2)
    assert pairing(k, k) == 8


def test_canonical_class_examples():
    assert canonical_class(SurfaceModel.blowup_p2(0)).coords == (-3,)
    k8 = canonical_class(SurfaceModel.blowup_p2(8))
    assert k8.coords == (-3,) + (1,) * 8
    assert pairing(k8, k8) == 1
    assert canonical_class(SurfaceModel.product_p1(3)).coords == (-2, -2, -2)


def test_k_squared_is_nine_minus_r():
    for r in range(9):
        m = SurfaceModel.blowup_p2(r)
        k = canonical_class(m)
        assert pairing(k, k) == 9 - r


def test_adjunction_genus_examples():
    dp2 = SurfaceModel.blowup_p2(2)
    e1 = cls(dp2, 0, 1, 0)
    assert adjunction_genus(e1) == 0

    ruling = DivisorClass.from_curve(DP7, 1, (1,))
    assert adjunction_genus(ruling) == 0

    minus_k = -canonical_class(DP7)
    assert adjunction_genus(minus_k) == 1


def test_top_intersection_examples():
    p2 = SurfaceModel.product_p1(2)
    d = cls(p2, 1, 1)
    assert top_intersection(p2, [d, d]) == 2

    p3 = SurfaceModel.product_p1(3)
    t = cls(p3, 1, 1, 1)
    assert top_intersection(p3, [t, t, t]) == 6

    q = cls(p2, 2, 1)
    assert top_intersection(p2, [q, q]) == 4


def test_top_intersection_errors():
    p3 = SurfaceModel.product_p1(3)
    t = cls(p3, 1, 1, 1)
    with pytest.raises(ValueError):
        top_intersection(p3, [t, t])  # arity
    with pytest.raises(ValueError):
        top_intersection(SurfaceModel.blowup_p2(2), [t, t, t])  # wrong model


coords7 = st.tuples(*[st.integers(-9, 9)] * 8)


@given(coords7, coords7, coords7, st.integers(-4, 4), st.integers(-4, 4))
def test_pairing_symmetric_bilinear(xa, xb, xc, s, t):
    a, b, c = cls(DP7, *xa), cls(DP7, *xb), cls(DP7, *xc)
    assert pairing(a, b) == pairing(b, a)
    assert pairing(s * a + t * b, c) == s * pairing(a, c) + t * pairing(b, c)


@given(st.integers(1, 5), st.data())
def test_top_intersection_permutation_symmetric(n, data):
    model = SurfaceModel.product_p1(n)
    vecs = data.draw(st.lists(
        st.tuples(*[st.integers(-3, 3)] * n), min_size=n, max_size=n))
    classes = [cls(model, *v) for v in vecs]
    base = top_intersection(model, classes)
    perm = data.draw(st.permutations(classes))
    assert top_intersection(model, perm) == base


@given(st.integers(1, 6), st.data())
def test_top_intersection_equal_rows_formula(n, data):
    model = SurfaceModel.product_p1(n)
    a = data.draw(st.tuples(*[st.integers(-3, 3)] * n))
    d = cls(model, *a)
    expect = 1
    for v in a:
        expect *= v
    fact = 1
    for i in range(2, n + 1):
        fact *= i
    assert top_intersection(model, [d] * n) == fact * expect


@given(st.integers(1, 5), st.data())
def test_top_intersection_multilinear_first_slot(n, data):
    model = SurfaceModel.product_p1(n)
    draw_vec = st.tuples(*[st.integers(-3, 3)] * n)
    rest = [cls(model, *data.draw(draw_vec)) for _ in range(n - 1)]
    u = cls(model, *data.draw(draw_vec))
    v = cls(model, *data.draw(draw_vec))
    s = data.draw(st.integers(-3, 3))
    t = data.draw(st.integers(-3, 3))
    lhs = top_intersection(model, [s * u + t * v] + rest)
    rhs = (s * top_intersection(model, [u] + rest)
           + t * top_intersection(model, [v] + rest))
    assert lhs == rhs
