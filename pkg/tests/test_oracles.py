import itertools
import json
import random
from pathlib import Path

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polycoord import base_rings, bipoly
from polycoord.base_rings import QZ, ZZ, UniPoly
from polycoord.bipoly import BiPoly
from polycoord.classify import reduce
from polycoord.oracles import (
    BoundsExceeded,
    SearchSpace,
    brute_comp_inverse,
    brute_va1,
    has_left_inverse,
    inverse_degree_cap,
    random_quadruplet,
    random_rl2,
    random_word,
)
from polycoord.plane_maps import word_to_json
from polycoord.va1 import composition_inverse_mod, is_va1_mod

GOLDEN = json.loads((Path(__file__).parent / "golden" / "seed0.json").read_text())


def _poly(cs):
    return BiPoly.from_y_coeffs(list(cs), ZZ)


def test_brute_va1_examples():
    assert brute_va1(2, 1) == {(0, 1), (1, 1)}
    assert (1, 1, 2) in brute_va1(4, 2)
    mod3 = brute_va1(3, 2)
    assert mod3 == {(c, u, 0) for c in range(3) for u in (1, 2)}


def test_brute_comp_inverse_examples():
    assert brute_comp_inverse((0, 1, 2), 4, 2) == (0, 1, 2)
    assert brute_comp_inverse((0, 1), 7, 2) == (0, 1, 0)
    assert brute_comp_inverse((0, 0, 1), 4, 3) is None
    assert brute_comp_inverse(_poly([0, 1, 2]), 4, 2) == (0, 1, 2)


def test_bounds():
    with pytest.raises(BoundsExceeded):
        brute_va1(13, 1)
    with pytest.raises(BoundsExceeded):
        brute_va1(4, 4)
    with pytest.raises(BoundsExceeded):
        SearchSpace(1, 1, 2)
    with pytest.raises(BoundsExceeded):
        brute_comp_inverse((0, 1), 12, 6)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_brute_va1_matches_decision_degree2(n):
    got = brute_va1(n, 2)
    for cs in itertools.product(range(n), repeat=3):
        assert (cs in got) == is_va1_mod(_poly(cs), n, ZZ).member


def _brute_cap(n):
    cap = 1
    while cap < 6 and n ** (cap + 2) <= 50_000:
        cap += 1
    return cap


@given(st.integers(2, 12), st.lists(st.integers(0, 11), min_size=1, max_size=4))
def test_comp_inverse_exists_iff_va1(n, cs):
    cs = tuple(c % n for c in cs)
    cap = _brute_cap(n)
    S = brute_comp_inverse(cs, n, cap)
    verdict = is_va1_mod(_poly(cs), n, ZZ)
    if S is not None:
        assert verdict.member
        assert (_poly(S).of(_poly(cs)) - BiPoly.y(ZZ)).reduce_mod(n).is_zero()
    elif verdict.member:
        # the search space is too small to hold the inverse
        assert composition_inverse_mod(_poly(cs), n, ZZ).deg_y > cap


@given(st.integers(2, 12), st.lists(st.integers(0, 11), min_size=2, max_size=4))
def test_main_path_inverse_degree_within_cap(n, cs):
    Q = _poly(c % n for c in cs)
    if not is_va1_mod(Q, n, ZZ).member:
        return
    S = composition_inverse_mod(Q, n, ZZ)
    assert S.deg_y <= inverse_degree_cap(n)
    assert has_left_inverse(tuple(c % n for c in cs), n)


def test_generators_are_deterministic():
    for seed in (0, 1, 17):
        assert random_rl2(seed) == random_rl2(seed)
        assert random_quadruplet(seed, QZ) == random_quadruplet(seed, QZ)
        assert random_word(seed, 6) == random_word(seed, 6)


def _quad_json(q):
    f = q.ring.field
    return {"p1": str(BiPoly.const(q.p1, f)), "p2": str(BiPoly.const(q.p2, f)),
            "Q1": str(q.Q1), "Q2": str(q.Q2)}


def _rl2_json(d):
    return {"d": str(d.d), "q1": str(d.q1), "q2": str(d.q2), "Q1": str(d.Q1), "Q2": str(d.Q2)}


def test_seed0_golden():
    assert _rl2_json(random_rl2(0, ZZ)) == GOLDEN["rl2_int"]
    assert _rl2_json(random_rl2(0, QZ)) == GOLDEN["rl2_z"]
    assert _quad_json(random_quadruplet(0, ZZ)) == GOLDEN["quadruplet_int"]
    assert _quad_json(random_quadruplet(0, QZ)) == GOLDEN["quadruplet_z"]
    assert word_to_json(random_word(0, 5)) == GOLDEN["word_5"]


def test_reduced_forms_are_distinct():
    keys = {reduce(random_quadruplet(seed)).key() for seed in range(300)}
    assert len(keys) >= 297


def test_random_word_lengths():
    for length in range(1, 7):
        w = random_word(length, length)
        assert len(w.factors) == length


def _schoolbook(a, b):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


_ints = st.integers(-10**30, 10**30)
_coeff = st.one_of(_ints, st.fractions(max_denominator=50))


@given(st.lists(_coeff, min_size=1, max_size=12), st.lists(_coeff, min_size=1, max_size=12))
def test_kronecker_univariate_matches_schoolbook(a, b):
    # the packer sees normalized coefficient lists of nonzero polynomials
    A, B = UniPoly(a), UniPoly(b)
    if A.is_zero() or B.is_zero():
        return
    expected = UniPoly(_schoolbook(list(A.coeffs), list(B.coeffs)))
    assert UniPoly(base_rings._kronecker_mul(A.coeffs, B.coeffs)) == expected


_bi_terms = st.dictionaries(
    st.tuples(st.integers(0, 4), st.integers(0, 4)),
    st.lists(st.integers(-10**6, 10**6), min_size=1, max_size=4),
    min_size=1, max_size=10)


@given(_bi_terms, _bi_terms)
def test_kronecker_bivariate_matches_schoolbook(ta, tb):
    A = BiPoly({k: UniPoly(v) for k, v in ta.items()}, QZ)
    B = BiPoly({k: UniPoly(v) for k, v in tb.items()}, QZ)
    if A.is_zero() or B.is_zero():
        return
    fast = bipoly._kronecker_mul(A.terms, B.terms, QZ)
    slow: dict = {}
    for (i1, j1), c1 in A.terms.items():
        for (i2, j2), c2 in B.terms.items():
            k = (i1 + i2, j1 + j2)
            slow[k] = slow.get(k, UniPoly()) + c1 * c2
    assert fast == BiPoly({k: v for k, v in slow.items() if not v.is_zero()}, QZ)


def test_perturbation_rng_is_seeded():
    from polycoord.oracles import perturb
    q = random_quadruplet(3)
    assert perturb(q, random.Random(5)) == perturb(q, random.Random(5))
