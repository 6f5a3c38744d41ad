import random

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polycoord.base_rings import QZ, ZZ, UniPoly
from polycoord.bipoly import BiPoly
from polycoord.classify import (
    NotIntegral,
    NotReduced,
    Quadruplet,
    TameVerdict,
    classify,
    dq_decompose,
    equivalent,
    expand,
    jacobian_identity_holds,
    reduce,
    reduce_with_shift,
)
from polycoord.construct import NotCoordinate
from polycoord.oracles import perturb, random_quadruplet
from polycoord.parsing import parse_poly
from polycoord.plane_maps import compose, vde_check
from conftest import nagata

z = UniPoly.z()
F = QZ.field


def zq(text):
    return parse_poly(text, QZ).to_field()


def iq(text):
    return parse_poly(text, ZZ).to_field()


def fz(a):
    return F.convert(a)


def nagata_quad():
    zi2 = F.inverse(fz(z**2))
    return Quadruplet(fz(z**2), -zi2, zq("y+zy^2"), zq("y-zy^2").scale(zi2), QZ)


def example1_quad():
    return Quadruplet(fz(z**2 * (z - 1)), fz(z), zq("y+zy^2"), zq("(z-1)(y+zy^2)"), QZ)


def trivial_quad():
    return Quadruplet(1, 1, iq("y"), iq("y^2"), ZZ)


def test_expand_examples():
    assert expand(nagata_quad()) == nagata()
    assert expand(trivial_quad()) == parse_poly("y+(x+y)^2", ZZ)
    with pytest.raises(NotIntegral):
        expand(Quadruplet(ZZ.field.convert(1) / 2, 1, iq("y"), iq("y^2"), ZZ))


def test_reduce_examples():
    N = nagata_quad()
    assert N.is_reduced() and reduce(N) == N
    half = F.inverse(fz(2))
    zi2 = F.inverse(fz(z**2))
    q = Quadruplet(fz(z**2) * half, -zi2, zq("y+zy^2").scale(half),
                   zq("2y-4zy^2").scale(zi2), QZ)
    assert expand(q) == nagata()
    assert reduce(q) == N
    q = Quadruplet(-fz(z**2), -zi2, zq("-(y+zy^2)"), zq("-y-zy^2").scale(zi2), QZ)
    assert expand(q) == nagata()
    assert reduce(q) == N


def test_dq_examples():
    dq = dq_decompose(nagata_quad())
    assert (dq.d, dq.q1, dq.q2) == (z**2, UniPoly((1,)), UniPoly((-1,)))
    assert dq.Q2_tilde == parse_poly("y-zy^2", QZ)
    dq = dq_decompose(trivial_quad())
    assert (dq.d, dq.q2) == (1, 1) and dq.Q2_tilde == parse_poly("y^2", ZZ)
    third = ZZ.field.convert(1) / 3
    q = Quadruplet(15, ZZ.field.convert(2) / 3, iq("y+6y^2"), iq("25y+30y^2").scale(third), ZZ)
    dq = dq_decompose(q)
    assert (dq.d, dq.q1, dq.q2) == (3, 5, 2)


def test_dq_needs_reduced():
    with pytest.raises(NotReduced):
        dq_decompose(Quadruplet(2, 1, iq("2y+1"), iq("y^2"), ZZ))


def test_classify_nagata():
    rep = classify(nagata_quad())
    assert rep.mate_length1 and rep.length_1plus1
    assert rep.tame is TameVerdict.NOT_TAME
    # normalized by the unit p1*p2 = -1
    assert rep.mate.f2 == -parse_poly("z^2x+y+zy^2", QZ)
    assert vde_check(rep.mate)
    assert compose(rep.sigma, rep.tau).f2 == nagata()
    assert rep.wild_3d_note is not None
    assert rep.coherent()


def test_classify_example1():
    rep = classify(example1_quad())
    assert not rep.length_1plus1 and not rep.mate_length1
    assert rep.tame is TameVerdict.NOT_TAME
    assert rep.sigma is None and rep.tau is None


def test_classify_trivial():
    rep = classify(trivial_quad())
    assert rep.mate_length1 and rep.length_1plus1
    assert rep.tame is TameVerdict.TAME
    w = rep.tame_witness
    rho = w[0]
    for m in w[1:]:
        rho = compose(rho, m)
    assert rho.f2 == expand(trivial_quad())
    assert rep.wild_3d_note is None


def test_classify_zero_budget_is_undetermined():
    assert classify(trivial_quad(), budget=0).tame is TameVerdict.UNDETERMINED


def test_classify_rejects_non_coordinate():
    with pytest.raises(NotCoordinate):
        classify(Quadruplet(2, 1, iq("y"), iq("y^2"), ZZ))


def test_report_json_shape():
    js = classify(nagata_quad()).to_json()
    assert js["tame"] == "NotTame" and js["mate_length1"] is True
    assert set(js) >= {"F", "mate", "sigma", "tau", "length_1plus1", "wild_3d_note"}


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([ZZ, QZ]))
def test_reduce_unique_under_perturbation(seed, pseed, ring):
    q = reduce(random_quadruplet(seed, ring))
    p, r = perturb(q, random.Random(pseed))
    red, shift = reduce_with_shift(p)
    assert red == q
    assert expand(p) + BiPoly.const(shift, ring) == expand(red)
    assert reduce(red) == red
    assert equivalent(p, q) and equivalent(q, p)


@given(st.integers(0, 10**6), st.sampled_from([ZZ, QZ]))
def test_reduced_properties(seed, ring):
    q = reduce(random_quadruplet(seed, ring))
    Fq = expand(q)
    assert Fq.constant_term() == 0
    assert ring.is_integral(q.p1 * q.p2)
    assert jacobian_identity_holds(q)


@given(st.integers(0, 10**5), st.sampled_from([ZZ, QZ]))
def test_classify_reports_coherent(seed, ring):
    q = reduce(random_quadruplet(seed, ring))
    rep = classify(q)
    assert rep.coherent()
    unit = ring.is_integral(q.p1 * q.p2) and ring.is_unit(ring.convert(ring.numer(q.p1 * q.p2)))
    assert rep.mate_length1 == unit
    if rep.length_1plus1:
        assert compose(rep.sigma, rep.tau).f2 == rep.F


def test_equivalence_is_an_equivalence_relation():
    rng = random.Random(7)
    for seed in range(15):
        a = random_quadruplet(seed)
        b, _ = perturb(a, rng)
        c, _ = perturb(b, rng)
        assert equivalent(a, a)
        assert equivalent(a, b) == equivalent(b, a)
        assert equivalent(a, b) and equivalent(b, c) and equivalent(a, c)
    assert not equivalent(random_quadruplet(0), random_quadruplet(1))
