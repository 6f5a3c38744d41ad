from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polycoord.base_rings import QZ, QZF, ZZ, UniPoly
from polycoord.bipoly import BiPoly
from polycoord.construct import construct_rs
from polycoord.parsing import parse_poly
from polycoord.plane_maps import (
    AffineTail,
    NonReducedWord,
    NotAnAutomorphism,
    PlaneMap,
    Swap,
    Triangular,
    Word,
    compose,
    decompose_over_field,
    invert_over_field,
    is_affine,
    is_parabolic_3d,
    is_triangular,
    jacobian_det,
    rational_length,
    recompose,
    vde_check,
    word_from_json,
    word_to_json,
)
from conftest import bipolys, nagata

z = UniPoly.z()
X, Y = BiPoly.x(ZZ), BiPoly.y(ZZ)


def zmap(f1, f2):
    return PlaneMap(parse_poly(f1, QZ), parse_poly(f2, QZ))


def nagata_pair():
    """(F, N): second component is the Nagata polynomial."""
    s = construct_rs(z**2, parse_poly("y+zy^2", QZ), -1).sigma
    return PlaneMap(s.f2, s.f1)


def test_compose_trivial():
    s = PlaneMap(X + Y * Y, Y)
    assert compose(PlaneMap.identity(ZZ), s) == s
    assert compose(PlaneMap.swap(ZZ), PlaneMap.swap(ZZ)).is_identity()


def test_convention_pins_nagata_product():
    dom = QZF
    yq = BiPoly.y(dom)
    w = [Triangular(dom.convert(z**2), parse_poly("y+zy^2", QZ).to_field()), Swap(),
         Triangular(dom.inverse(dom.convert(-z**2)),
                    (yq - (yq * yq).scale(dom.convert(z))).scale(dom.inverse(dom.convert(z**2)))),
         Swap()]
    s = recompose(Word(tuple(w), dom))
    assert s.f2.to_domain(QZ) == nagata()
    assert s.f1.to_domain(QZ) == parse_poly("z^2x+y+zy^2", QZ)


def test_jacobian_examples():
    assert jacobian_det(PlaneMap.identity(ZZ)) == BiPoly.const(1, ZZ)
    assert jacobian_det(PlaneMap(X.scale(2), Y)) == BiPoly.const(2, ZZ)
    assert jacobian_det(nagata_pair()) == BiPoly.const(-1, QZ)


def test_vde_check_examples():
    assert vde_check(nagata_pair())
    assert not vde_check(PlaneMap(X.scale(2), Y))
    assert vde_check(PlaneMap(X + Y * Y, Y))


def test_decompose_identity():
    w = decompose_over_field(PlaneMap.identity(QZF))
    assert len(w) == 1 and w.tail().is_identity()


def test_decompose_nagata_two_swaps():
    s = nagata_pair()
    w = decompose_over_field(s)
    assert w.swaps() == 2
    assert rational_length(w) == 2
    assert recompose(w).to_domain(QZ) == s


def test_decompose_rejects_non_automorphism():
    with pytest.raises(NotAnAutomorphism) as e:
        decompose_over_field(PlaneMap(X * X, Y).to_field())
    assert e.value.degrees == (2, 1)
    # Jacobian 2y: rejected as well
    with pytest.raises(NotAnAutomorphism):
        decompose_over_field(PlaneMap(X, Y * Y + X).to_field())


def test_invert_examples():
    idm = PlaneMap.identity(QZF)
    assert invert_over_field(idm) == idm
    p = Fraction(3)
    t = Triangular(p, (Y * Y).to_field()).to_map()
    inv = invert_over_field(t)
    F = BiPoly.x(ZZ.field)
    assert inv == PlaneMap((F - (Y * Y).to_field()).scale(Fraction(1, 3)), Y.to_field())
    s = nagata_pair()
    si = invert_over_field(s)
    assert compose(s, si).is_identity() and compose(si, s).is_identity()
    assert si.is_integral()


def test_rational_length_examples():
    assert rational_length([]) == 0
    T = Triangular(1, Y * Y)
    assert rational_length([T, Swap(), T]) == 1
    with pytest.raises(NonReducedWord):
        rational_length([T, T])


def test_shape_predicates():
    c = zmap("x+2zy+1-z^3", "y-z^2")
    assert is_triangular(c, z_as_variable=True)
    assert not is_affine(c, z_as_variable=True)
    assert is_affine(PlaneMap.swap(ZZ))
    p = zmap("x+y^2", "y")
    assert is_parabolic_3d(p) and is_triangular(p, z_as_variable=True)
    assert not is_parabolic_3d(nagata_pair())


def test_word_json_round_trip():
    w = decompose_over_field(nagata_pair())
    assert word_from_json(word_to_json(w), QZ) == w


def test_affine_tail_rejects_singular():
    with pytest.raises(ValueError):
        AffineTail(1, 2, 2, 4, 0, 0)


small_maps = st.tuples(bipolys(maxdeg=2), bipolys(maxdeg=2)).map(lambda t: PlaneMap(*t))


@given(small_maps, small_maps)
def test_chain_rule(s, t):
    # compose(s, t) substitutes s into t
    lhs = jacobian_det(compose(s, t))
    rhs = jacobian_det(t).substitute(s.f1, s.f2) * jacobian_det(s)
    assert lhs == rhs


tri = st.builds(lambda p, a, b, c: Triangular(Fraction(p), BiPoly({(0, 1): a, (0, 2): b, (0, 3): c}, ZZ)),
                st.sampled_from([1, -1, 2, 3]), st.integers(-3, 3), st.integers(-3, 3), st.integers(-2, 2))


@given(st.lists(st.one_of(tri, st.just(Swap())), min_size=1, max_size=6))
def test_decompose_round_trip_and_length_invariance(factors):
    dom = ZZ.field
    s = recompose(Word(tuple(factors), dom), dom)
    w = decompose_over_field(s)
    assert recompose(w) == s
    merged = []
    for f in factors:
        if merged and isinstance(f, Triangular) and isinstance(merged[-1], Triangular):
            g = merged.pop()
            merged.append(Triangular(g.p * f.p, g.Q.to_field().scale(f.p) + f.Q.to_field()))
        else:
            merged.append(f)
    assert recompose(Word(tuple(merged), dom), dom) == s


@given(small_maps)
def test_vde_implies_integral_inverse(s):
    try:
        ok = vde_check(s)
    except NotAnAutomorphism:
        ok = False
    if ok:
        inv = invert_over_field(s.to_field())
        assert inv.is_integral()
        assert compose(s.to_field(), inv).is_identity()
