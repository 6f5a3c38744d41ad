"""Acceptance criteria, each timed against its budget.

Run with ``pytest tests/test_acceptance.py``; one PASS/FAIL line per criterion
is printed in the terminal summary.
"""

import itertools
import random
import time

from polycoord.base_rings import QZ, ZZ, UniPoly
from polycoord.bipoly import BiPoly
from polycoord.classify import TameVerdict, classify, expand, jacobian_identity_holds, reduce
from polycoord.classify import Quadruplet
from polycoord.construct import Rl2Data, construct_rl2, construct_rs, verify_rl2_criterion
from polycoord.cotame import certify_cotame_r1, certify_cotame_r2, verify_certificate
from polycoord.equivalence import decide_same_p, poloni_decide, poloni_instance
from polycoord.oracles import brute_va1, perturb, random_quadruplet, random_word
from polycoord.parsing import parse_poly
from polycoord.plane_maps import (
    PlaneMap,
    Swap,
    Triangular,
    Word,
    compose,
    decompose_over_field,
    jacobian_det,
    recompose,
    vde_check,
)
from polycoord.va1 import is_va1_mod

RESULTS: dict = {}
z = UniPoly.z()


def P(text, ring=QZ):
    return parse_poly(text, ring)


def timed(number, budget):
    """Decorator recording PASS/FAIL and elapsed time for one criterion."""
    def wrap(fn):
        def test():
            t0 = time.perf_counter()
            try:
                fn()
            except BaseException:
                RESULTS[number] = ("FAIL", time.perf_counter() - t0, budget, "assertion failed")
                raise
            dt = time.perf_counter() - t0
            ok = budget is None or dt < budget
            RESULTS[number] = ("PASS" if ok else "FAIL", dt, budget, "" if ok else "over budget")
            assert ok, f"criterion {number} took {dt:.2f}s (budget {budget}s)"
        test.__name__ = fn.__name__
        test.__doc__ = fn.__doc__
        return test
    return wrap


@timed(1, 1.0)
def test_criterion_01_nagata_fixture():
    w = construct_rs(z**2, P("y+zy^2"), -1)
    assert w.sigma == PlaneMap(P("x-2y(zx+y^2)-z(zx+y^2)^2"), P("z^2x+y+zy^2"))
    assert vde_check(w.sigma)
    assert compose(w.sigma, w.sigma_inverse).is_identity()


@timed(2, 1.0)
def test_criterion_02_example1():
    p1, p2 = z**2 * (z - 1), z
    Q1, Q2 = P("y+zy^2"), P("(z-1)(y+zy^2)")
    data = Rl2Data(1, p1, p2, Q1, Q2, QZ)
    assert verify_rl2_criterion(data)[0]
    F = QZ.field
    q = Quadruplet(F.convert(p1), F.convert(p2), Q1.to_field(), Q2.to_field(), QZ)
    assert expand(q) == data.F()
    rep = classify(q)
    assert rep.length_1plus1 is False
    assert rep.tame is TameVerdict.NOT_TAME
    assert rep.mate_length1 is False


@timed(3, 5.0)
def test_criterion_03_example2_both_instances():
    instances = [
        Rl2Data(3, 5, 2, P("y+6y^2", ZZ), P("25y+30y^2", ZZ), ZZ),
        Rl2Data(z**2, (z - 1) ** 2, (z - 2) ** 2, P("y+z^2 y^2"),
                P("(z-1)^2((-2z^3+8z^2-4z-4)y+z^2(z-2)y^2)"), QZ),
    ]
    for data in instances:
        assert verify_rl2_criterion(data)[0]
        w = construct_rl2(data)
        assert w.sigma.is_integral() and w.sigma_inverse.is_integral()
        assert jacobian_det(w.sigma) == BiPoly.const(1, data.ring)
        assert compose(w.sigma, w.sigma_inverse).is_identity()
        assert compose(w.sigma_inverse, w.sigma).is_identity()


@timed(4, 30.0)
def test_criterion_04_reduced_form_uniqueness():
    rng = random.Random(4)
    bases = [reduce(random_quadruplet(s, ZZ)) for s in range(10)]
    bases += [reduce(random_quadruplet(s, QZ)) for s in range(10)]
    count = 0
    for q in bases:
        for _ in range(50):
            p, _r = perturb(q, rng)
            red = reduce(p)
            assert red.key() == q.key()
            count += 1
    assert count == 1000


@timed(5, 30.0)
def test_criterion_05_jacobian_identity():
    for s in range(1000):
        q = reduce(random_quadruplet(s, ZZ if s % 2 == 0 else QZ))
        assert jacobian_identity_holds(q)


@timed(6, 60.0)
def test_criterion_06_va1_oracle_agreement():
    cases = 0
    for n in range(2, 13):
        members = brute_va1(n, 3)
        for cs in itertools.product(range(n), repeat=4):
            Q = BiPoly.from_y_coeffs(list(cs), ZZ)
            assert (cs in members) == is_va1_mod(Q, n, ZZ).member, (n, cs)
            cases += 1
    assert cases > 10_000


@timed(7, 60.0)
def test_criterion_07_poloni_closed_form():
    assert poloni_decide(P("y^3", ZZ), P("-y^3", ZZ))
    assert not poloni_decide(P("y^2", ZZ), P("0", ZZ))
    for q1, q2, expected in (("y^3", "-y^3", True), ("y^2", "0", False), ("y^2+y^5", "y^2+y^5", True)):
        p, Q1, Q2 = poloni_instance(P(q1, ZZ), P(q2, ZZ))
        assert decide_same_p(p, Q1, Q2, QZ).equivalent is expected
    rng = random.Random(7)
    for i in range(100):
        q1 = BiPoly({(0, j): rng.randint(-10, 10) for j in range(1, rng.randint(1, 5) + 1)}, ZZ)
        if i % 2 == 0:
            q2 = BiPoly({k: (c if k[1] % 2 == 0 else rng.randint(-10, 10))
                         for k, c in q1.terms.items()}, ZZ)
        else:
            q2 = BiPoly({(0, j): rng.randint(-10, 10) for j in range(1, rng.randint(1, 5) + 1)}, ZZ)
        p, Q1, Q2 = poloni_instance(q1, q2)
        assert decide_same_p(p, Q1, Q2, QZ).equivalent == poloni_decide(q1, q2)


@timed(8, 5.0)
def test_criterion_08_cotame():
    cert = certify_cotame_r1(z**2, P("y+zy^2"), -1)
    conj = [s.result for s in cert.steps if type(s).__name__ == "ConjugateByTranslation"]
    assert conj == [PlaneMap(P("x+2zy+1-z^3"), P("y-z^2"))]
    assert verify_certificate(cert, cert.sigma)
    F = QZ.field
    w = Word((Triangular(F.convert(1), P("zy").to_field()), Swap(),
              Triangular(F.convert(1), P("y^4").to_field()), Swap(),
              Triangular(F.convert(1), P("zy").to_field())), F)
    s = recompose(w, F).to_ring()
    c2 = certify_cotame_r2(s)
    m = c2.measures()
    assert m[0] == 4 and all(a > b for a, b in zip(m, m[1:]))
    assert verify_certificate(c2, s)


@timed(9, 60.0)
def test_criterion_09_decomposition_round_trip():
    dom = QZ.field
    for seed in range(200):
        w = random_word(seed, 1 + seed % 6)
        s = recompose(w, dom)
        w2 = decompose_over_field(s)
        assert recompose(w2, dom) == s
        assert w2.swaps() == w.swaps()


@timed(10, None)
def test_criterion_10_report_coherence():
    violations = 0
    for s in range(150):
        for ring in (ZZ, QZ):
            rep = classify(reduce(random_quadruplet(s, ring)))
            if rep.tame is TameVerdict.TAME and not rep.length_1plus1:
                violations += 1
            if rep.mate_length1 and not rep.length_1plus1:
                violations += 1
    assert violations == 0
