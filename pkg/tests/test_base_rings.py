from fractions import Fraction

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polycoord.base_rings import (
    QZ,
    ZZ,
    NotAUnitError,
    QuotientRing,
    RatFunc,
    UniPoly,
    gcd_bezout,
    inverse_mod,
    is_nilpotent_mod,
    is_unit_mod,
    normalize_unit,
    poly_gcd,
)
from conftest import unipolys

z = UniPoly.z()


def test_normalize_unit_examples():
    assert normalize_unit(-6, ZZ) == (-1, 6)
    assert normalize_unit(1, ZZ) == (1, 1)
    u, w = normalize_unit(2 * z**2 + 4 * z, QZ)
    assert u == 2 and w == z**2 + 2 * z


def test_normalize_unit_rejects_zero():
    with pytest.raises((ValueError, ZeroDivisionError, ArithmeticError)):
        normalize_unit(0, ZZ)


def test_gcd_bezout_examples():
    g, s, t = gcd_bezout(3, 5, ZZ)
    assert g == 1 and 3 * s + 5 * t == 1
    g, s, t = gcd_bezout(-4, 0, ZZ)
    assert (g, s, t) == (4, -1, 0)
    g, s, t = gcd_bezout(z**2, z**2 * (z - 1), QZ)
    assert g == z**2
    assert s * z**2 + t * z**2 * (z - 1) == g


def test_gcd_bezout_rejects_zero_pair():
    with pytest.raises((ValueError, ZeroDivisionError, ArithmeticError)):
        gcd_bezout(0, 0, ZZ)


def test_nilpotent_examples():
    assert is_nilpotent_mod(z, z**2, QZ)
    assert is_nilpotent_mod(0, 12, ZZ)
    assert not is_nilpotent_mod(z, z**2 * (z - 1), QZ)


def test_unit_mod_examples():
    assert is_unit_mod(25, 3, ZZ)
    assert is_unit_mod(1, 12, ZZ)
    assert not is_unit_mod(z, z**2, QZ)


def test_zero_modulus_rejected():
    with pytest.raises(ZeroDivisionError):
        is_nilpotent_mod(2, 0, ZZ)
    with pytest.raises(ZeroDivisionError):
        is_unit_mod(2, 0, ZZ)


@pytest.mark.parametrize("p", range(1, 65))
def test_nilpotent_matches_direct_search(p):
    for a in range(p):
        direct = any(pow(a, k, p) == 0 for k in range(1, p.bit_length() + 1)) or p == 1
        assert is_nilpotent_mod(a, p, ZZ) == direct
        if p > 1:
            assert not (is_nilpotent_mod(a, p, ZZ) and is_unit_mod(a, p, ZZ))


@given(st.integers(-500, 500).filter(bool), st.integers(-500, 500).filter(bool))
def test_w_multiplicative_over_z(a, b):
    assert normalize_unit(a * b, ZZ)[1] == normalize_unit(a, ZZ)[1] * normalize_unit(b, ZZ)[1]
    w = normalize_unit(a, ZZ)[1]
    assert normalize_unit(w, ZZ) == (1, w)


@given(unipolys(nonzero=True), unipolys(nonzero=True))
def test_w_multiplicative_over_qz(a, b):
    ua, wa = normalize_unit(a, QZ)
    ub, wb = normalize_unit(b, QZ)
    assert normalize_unit(a * b, QZ)[1] == wa * wb
    assert ua * wa == a
    assert normalize_unit(wa, QZ)[1] == wa


@given(unipolys(), unipolys())
def test_gcd_bezout_properties(a, b):
    if a.is_zero() and b.is_zero():
        return
    g, s, t = gcd_bezout(a, b, QZ)
    assert s * a + t * b == g
    assert g.lc == 1
    assert (a % g).is_zero() and (b % g).is_zero()
    assert gcd_bezout(b, a, QZ)[0] == g
    assert poly_gcd(a, b) == g


@given(st.integers(-300, 300), st.integers(-300, 300))
def test_gcd_bezout_properties_z(a, b):
    if a == 0 and b == 0:
        return
    g, s, t = gcd_bezout(a, b, ZZ)
    assert g > 0 and s * a + t * b == g and a % g == 0 and b % g == 0
    assert gcd_bezout(b, a, ZZ)[0] == g


def test_quotient_canonical_representatives():
    k = QuotientRing(ZZ, 7)
    assert k.convert(-1).rep == 6
    kz = QuotientRing(QZ, z**2)
    assert kz.convert(z**3 + z + 1).rep == z + 1
    assert (kz.convert(z) * kz.convert(z)) == kz.convert(0)
    assert inverse_mod(1 + z, z**2, QZ) == 1 - z


def test_quotient_inverse_of_non_unit():
    with pytest.raises(NotAUnitError):
        QuotientRing(ZZ, 12).convert(4).inverse()


@given(unipolys(), unipolys(nonzero=True), unipolys(nonzero=True))
def test_ratfunc_field_laws(a, b, c):
    f = RatFunc(a, b)
    g = RatFunc(c, b * c + 1) if not (b * c + 1).is_zero() else RatFunc(c)
    assert (f + g) - g == f
    if g:
        assert (f * g) / g == f
    assert f * RatFunc(1) == f


def test_ratfunc_canonical_form():
    f = RatFunc(2 * z**2 + 2 * z, 4 * z)
    assert f == RatFunc(z + 1, UniPoly((2,)))
    assert f.den.lc == 1
    assert hash(f) == hash(RatFunc(UniPoly((Fraction(1, 2),)) * (z + 1)))
