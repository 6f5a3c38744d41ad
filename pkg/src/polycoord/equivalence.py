"""Equivalence of length-1 polynomials ``p1*x + Q1(y)`` and ``p2*x + Q2(y)``.

Two polynomials are equivalent when an automorphism of R[x,y] maps one to
the other.  Witnesses are pairs ``(u, Q3)`` with ``u`` a unit, from which the
automorphism is rebuilt and checked exactly.

:func:`decide_same_p` settles the case ``p1 = p2 = p`` by lifting along the
``pi``-adic layers of every prime-power factor ``pi^e`` of ``p``.  Over Q[z]
the lift at each layer is unique, so the search is exhaustive.  Over Z the
residue fields have positive characteristic; the bottom layer is enumerated
and a vanishing derivative is reported as unsupported.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import sympy

from .base_rings import QZ, ZZ, BaseRing, QuotientRing, UniPoly, inverse_mod, ring_of
from .bipoly import BiPoly
from .plane_maps import PlaneMap, compose, invert_over_field, jacobian_det, vde_check
from .va1 import as_ring_ypoly, is_coordinate_B1


class StarFailed(ValueError):
    """Y is not integral."""


class StarStarFailed(ValueError):
    """Q1(Y) differs from p2*x + Q2(y) modulo p1."""


class NotUnit(ValueError):
    pass


class UnsupportedRing(NotImplementedError):
    pass


@dataclass(frozen=True)
class EquivWitness:
    u: object
    Q3: BiPoly
    sigma: PlaneMap
    source: BiPoly
    target: BiPoly

    def check(self, full: bool = False) -> bool:
        """Exact image check; ``full`` also reruns the GA2(R) membership test."""
        ok = self.sigma(self.source) == self.target
        return ok and (not full or vde_check(self.sigma))


def _ring(ring, *vals) -> BaseRing:
    if ring is not None:
        return ring
    for v in vals:
        if isinstance(v, BiPoly):
            return v.dom.base
    return ring_of(*vals)


def _check_normalized(p, Q: BiPoly, ring: BaseRing, name: str):
    if Q.constant_term() != 0:
        raise ValueError(f"{name}(0) must be 0")
    g = ring.gcd_many([p] + list(Q.terms.values()))
    if not ring.is_unit(g):
        raise ValueError(f"gcd of the modulus and the content of {name} is not a unit")


def b1(p, Q: BiPoly, ring: BaseRing) -> BiPoly:
    return BiPoly.x(ring).scale(p) + Q


def check_witness(p1, Q1, p2, Q2, u, Q3, ring: BaseRing | None = None) -> EquivWitness:
    ring = _ring(ring, Q1, Q2, Q3, p1, p2)
    p1, p2, u = ring.convert(p1), ring.convert(p2), ring.convert(u)
    Q1, Q2 = as_ring_ypoly(Q1, ring), as_ring_ypoly(Q2, ring)
    Q3 = as_ring_ypoly(Q3, ring) if isinstance(Q3, BiPoly) or Q3 else BiPoly.zero(ring)
    _check_normalized(p1, Q1, ring, "Q1")
    _check_normalized(p2, Q2, ring, "Q2")
    if not ring.is_unit(u):
        raise NotUnit(f"{u} is not a unit")
    f = ring.field
    g = ring.gcd(p1, p2)
    target = b1(p2, Q2, ring)
    Yf = (BiPoly.y(f).scale(f.convert(ring.exquo(p1, g))) + Q3.to_field().of(target.to_field()))
    Yf = Yf.scale(f.convert(u) * f.convert(g) * f.inverse(f.convert(p2)))
    if not Yf.is_integral():
        raise StarFailed("Y = u*gcd(p1,p2)/p2 * (p1'*y + Q3(p2*x + Q2(y))) is not integral")
    Y = Yf.to_ring()
    diff = target - Q1.of(Y)
    if not diff.reduce_mod(p1).is_zero():
        raise StarStarFailed("Q1(Y) differs from p2*x + Q2(y) modulo p1")
    sigma = PlaneMap(diff.exquo_scalar(p1), Y)
    if jacobian_det(sigma) != BiPoly.const(u, ring):
        raise AssertionError("Jacobian determinant differs from u")
    # Over qt(R) the image of sigma contains p2*x + Q2(y) (checked below) and
    # Y = c*y + Q4(p2*x + Q2(y)) with c != 0, hence y and then x: sigma is
    # onto, so it lies in GA2(qt(R)); with a unit Jacobian it lies in GA2(R).
    w = EquivWitness(u, Q3, sigma, b1(p1, Q1, ring), target)
    if not w.check():
        raise AssertionError("witness failed to verify")
    return w


def invert_witness(w: EquivWitness) -> PlaneMap:
    """An automorphism taking ``w.target`` back to ``w.source``, checked exactly."""
    inv = invert_over_field(w.sigma).to_ring()
    if inv(w.target) != w.source or not compose(w.sigma, inv).is_identity():
        raise AssertionError("inverse witness failed to verify")
    return inv


def necessary_va2(p1, Q1, p2, Q2, ring: BaseRing | None = None) -> bool:
    ring = _ring(ring, Q1, Q2, p1, p2)
    p1, p2 = ring.convert(p1), ring.convert(p2)
    Q1, Q2 = as_ring_ypoly(Q1, ring), as_ring_ypoly(Q2, ring)
    g = ring.gcd(p1, p2)
    return (is_coordinate_B1(ring.exquo(p1, g), Q1, ring)
            and is_coordinate_B1(ring.exquo(p2, g), Q2, ring))


# ---------------------------------------------------------------------------
# Same modulus
# ---------------------------------------------------------------------------


@dataclass
class SamePResult:
    equivalent: bool
    witness: Optional[EquivWitness]
    reason: str
    units_tried: list = field(default_factory=list)


def prime_power_factors(p, ring: BaseRing) -> list:
    """``[(pi, e), ...]`` with ``pi`` irreducible and normalized."""
    p = ring.convert(p)
    if ring is ZZ:
        return sorted(sympy.factorint(abs(p)).items())
    zs = sympy.Symbol("z")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) if isinstance(c, Fraction)
                       else sympy.Integer(c) for c in reversed(p.coeffs)], zs, domain="QQ")
    out = []
    for fac, e in poly.factor_list()[1]:
        cs = [Fraction(int(c.p), int(c.q)) for c in reversed(fac.all_coeffs())]
        out.append((ring.normalize_unit(UniPoly(cs))[1], e))
    return sorted(out, key=lambda t: (t[0].degree, str(t[0])))


def _ydeg(P: BiPoly) -> int:
    return -1 if P.is_zero() else P.deg_y


def _ydivmod(A: BiPoly, B: BiPoly, k: QuotientRing):
    """Division in k[y] for a field k."""
    b = _ydeg(B)
    lcinv = B.coeff(0, b).inverse()
    quo: dict = {}
    y = BiPoly.y(k)
    R = A
    while _ydeg(R) >= b:
        d = _ydeg(R)
        c = R.coeff(0, d) * lcinv
        quo[(0, d - b)] = c
        R = R - (y ** (d - b)).scale(c) * B
    return BiPoly(quo, k), R


def _expand_in(P: BiPoly, Q: BiPoly, k: QuotientRing) -> Optional[list]:
    """Coefficients ``c`` with ``P = sum c_k Q^k`` in k[y], or None."""
    out = []
    while not P.is_zero():
        P, r = _ydivmod(P, Q, k)
        if _ydeg(r) > 0:
            return None
        out.append(r.constant_term() if not r.is_zero() else k.zero)
    return out


def _unit_candidates(Q1b: BiPoly, Q2b: BiPoly, k: QuotientRing, ring: BaseRing):
    """Units allowed by leading coefficients modulo pi; None means no constraint."""
    a = _ydeg(Q2b)
    if a <= 1:
        return None
    if ring is ZZ:
        return {u for u in (1, -1) if Q1b.coeff(0, a) * (u ** a) == Q2b.coeff(0, a)}
    c1, c2 = Q1b.coeff(0, a).rep, Q2b.coeff(0, a).rep
    n = max(len(c1.coeffs), len(c2.coeffs))
    ratio = None
    for i in range(n):
        x1 = c1.coeffs[i] if i < len(c1.coeffs) else Fraction(0)
        x2 = c2.coeffs[i] if i < len(c2.coeffs) else Fraction(0)
        if x1 == 0 and x2 == 0:
            continue
        if x1 == 0 or x2 == 0:
            return set()
        t = Fraction(x2) / Fraction(x1)
        if ratio is not None and t != ratio:
            return set()
        ratio = t
    roots = sympy.Poly(sympy.Symbol("u") ** a - sympy.Rational(ratio.numerator, ratio.denominator),
                       sympy.Symbol("u")).ground_roots()
    return {Fraction(int(r.p), int(r.q)) for r in roots if r.is_rational}


def _lift_component(Q1: BiPoly, Q2: BiPoly, pi, e: int, u, ring: BaseRing) -> Optional[BiPoly]:
    k = QuotientRing(ring, pi)
    m = pi ** e
    y = BiPoly.y(ring)
    Q1b, Q2b = Q1.reduce_mod(pi), Q2.reduce_mod(pi)
    a, b = _ydeg(Q1b), _ydeg(Q2b)
    if a != b:
        return None
    uk = k.convert(u)
    starts = []
    if b >= 2:
        lc1, c1, c2 = Q1b.coeff(0, a), Q1b.coeff(0, a - 1), Q2b.coeff(0, a - 1)
        den = lc1 * a * uk ** (a - 1)
        if den:
            starts = [(c2 - c1 * uk ** (a - 1)) / den]
        elif ring is ZZ and pi <= 10_000:
            starts = [k.convert(g) for g in range(pi)]
        else:
            raise UnsupportedRing(f"bottom layer is not determined modulo {pi}")
        starts = [BiPoly.const((g / uk).rep, ring) for g in starts]
    else:
        alpha, lam = Q1b.coeff(0, 1), Q2b.coeff(0, 1)
        beta = lam / alpha
        starts = [y.scale(((beta - uk) / (uk * lam)).rep)]
    for Q3 in starts:
        out = _lift_from(Q1, Q2, Q3, pi, e, u, ring, k)
        if out is not None:
            return BiPoly(out.reduce_mod(m).lift().terms, ring)
    return None


def _lift_from(Q1, Q2, Q3, pi, e, u, ring, k) -> Optional[BiPoly]:
    y = BiPoly.y(ring)

    def Y_of(Q3):
        return (y + Q3.of(Q2)).scale(u)

    if not (Q1.of(Y_of(Q3)) - Q2).reduce_mod(pi).is_zero():
        return None
    Q2b = Q2.reduce_mod(pi)
    uinv = k.convert(u).inverse()
    for j in range(1, e):
        Y = Y_of(Q3)
        pj = pi ** j
        E = (Q1.of(Y) - Q2).reduce_mod(pj * pi).lift()
        Ep = E.exquo_scalar(pj).reduce_mod(pi)
        if Ep.is_zero():
            continue
        dQ = Q1.partial("y").of(Y).reduce_mod(pi)
        if dQ.is_zero():
            raise UnsupportedRing(f"derivative of Q1 vanishes modulo {pi}")
        D, r = _ydivmod(-Ep, dQ, k)
        if not r.is_zero():
            return None
        cs = _expand_in(D.scale(uinv), Q2b, k)
        if cs is None:
            return None
        Q3 = Q3 + BiPoly({(0, i): c.rep * pj for i, c in enumerate(cs) if c}, ring)
    if not (Q1.of(Y_of(Q3)) - Q2).reduce_mod(pi ** e).is_zero():
        return None
    return Q3


def _crt(parts: list, ring: BaseRing) -> BiPoly:
    """Combine ``[(m_i, Q_i)]`` into Q with ``Q = Q_i`` modulo every ``m_i``."""
    M = ring.one
    for m, _ in parts:
        M = M * m
    acc = BiPoly.zero(ring)
    for m, Q in parts:
        co = ring.exquo(M, m)
        idem = co * inverse_mod(co, m, ring)
        acc = acc + Q.scale(idem)
    if ring.is_unit(M):
        return BiPoly.zero(ring)
    return acc.reduce_mod(M).lift()


def decide_same_p(p, Q1, Q2, ring: BaseRing | None = None) -> SamePResult:
    ring = _ring(ring, Q1, Q2, p)
    if ring not in (ZZ, QZ):
        raise UnsupportedRing(ring.name)
    p = ring.convert(p)
    if p == 0:
        raise ValueError("p must be nonzero")
    Q1, Q2 = as_ring_ypoly(Q1, ring), as_ring_ypoly(Q2, ring)
    _check_normalized(p, Q1, ring, "Q1")
    _check_normalized(p, Q2, ring, "Q2")
    comps = prime_power_factors(p, ring)
    allowed = None
    for pi, _ in comps:
        k = QuotientRing(ring, pi)
        c = _unit_candidates(Q1.reduce_mod(pi), Q2.reduce_mod(pi), k, ring)
        if c is not None:
            allowed = c if allowed is None else allowed & c
    if allowed is None:
        allowed = {1, -1} if ring is ZZ else {1}
    units = sorted(allowed, key=lambda v: (abs(v), v < 0))
    best = None
    for u in units:
        parts = []
        for pi, e in comps:
            Q3i = _lift_component(Q1, Q2, pi, e, u, ring)
            if Q3i is None:
                break
            parts.append((pi ** e, Q3i))
        else:
            Q3 = _crt(parts, ring)
            w = check_witness(p, Q1, p, Q2, u, Q3, ring)
            if best is None or _ydeg(Q3) < _ydeg(best.Q3):
                best = w
    if best is None:
        return SamePResult(False, None, "no unit admits a lift on every layer", units)
    return SamePResult(True, best, "witness found", units)


# ---------------------------------------------------------------------------
# Poloni family over Q[z] with p = z^2
# ---------------------------------------------------------------------------


def _rational_ypoly(q) -> BiPoly:
    q = as_ring_ypoly(q, QZ) if isinstance(q, BiPoly) and q.dom.base is QZ else q
    if isinstance(q, BiPoly) and q.dom.base is ZZ:
        q = BiPoly(q.terms, ZZ.field)
    if not isinstance(q, BiPoly):
        q = BiPoly.from_y_coeffs(q, ZZ.field)
    if not q.is_univariate_y():
        raise ValueError("expected a polynomial in y")
    return q


def poloni_decide(q1, q2) -> bool:
    """Equivalence of ``z^2*x - y^2 - z*q1(y)`` and ``z^2*x - y^2 - z*q2(y)``."""
    q1, q2 = _rational_ypoly(q1), _rational_ypoly(q2)
    for q in (q1, q2):
        if q.constant_term() != 0:
            raise ValueError("q1(0) and q2(0) must be 0")
    even = lambda q: {k: c for k, c in q.terms.items() if k[1] % 2 == 0}  # noqa: E731
    return even(q1) == even(q2)


def poloni_instance(q1, q2):
    """``(p, Q1, Q2)`` over Q[z] for the family above."""
    out = []
    for q in (q1, q2):
        q = _rational_ypoly(q)
        Q = BiPoly({k: QZ.convert(c) for k, c in q.terms.items()}, QZ)
        yy = BiPoly.y(QZ)
        out.append(-(yy * yy) - Q.scale(UniPoly.z()))
    return UniPoly((0, 0, 1)), out[0], out[1]
