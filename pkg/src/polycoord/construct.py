"""Constructions of coordinates of R[x,y] with explicit automorphisms.

* :func:`construct_rs` completes ``p1*x + Q1(y)`` to an automorphism.
* :func:`construct_rl2` completes ``d^-1 {q2*y + Q2(q1*d*x + Q1(y))}`` to an
  automorphism ``t1 pi t2 pi t3`` of Jacobian 1, with its inverse.
* :func:`berson_poly` and :func:`example2_family` build inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .base_rings import BaseRing, is_nilpotent_mod, ring_of
from .bipoly import BiPoly
from .plane_maps import (
    PlaneMap,
    Triangular,
    compose,
    compose_all,
    invert_over_field,
    jacobian_det,
)
from .va1 import as_ring_ypoly, composition_inverse_mod, is_va1_mod


class InvariantViolation(ValueError):
    pass


class NotCoordinate(ValueError):
    pass


class CriterionFailed(NotCoordinate):
    pass


class InternalCheckFailed(AssertionError):
    pass


class PairwiseCoprimalityFailed(ValueError):
    pass


class NilpotencyFailed(ValueError):
    pass


def _ring(ring, *vals) -> BaseRing:
    if ring is not None:
        return ring
    for v in vals:
        if isinstance(v, BiPoly):
            return v.dom.base
    return ring_of(*vals)


@dataclass(frozen=True)
class Rl2Data:
    d: object
    q1: object
    q2: object
    Q1: BiPoly
    Q2: BiPoly
    ring: BaseRing

    def __post_init__(self):
        r = self.ring
        for name in ("d", "q1", "q2"):
            v = r.convert(getattr(self, name))
            if v == 0:
                raise InvariantViolation(f"{name} must be nonzero")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "Q1", as_ring_ypoly(self.Q1, r))
        object.__setattr__(self, "Q2", as_ring_ypoly(self.Q2, r))
        if not r.is_unit(r.gcd(self.d, self.q2)):
            raise InvariantViolation("gcd(d, q2) is not a unit")
        h = BiPoly.y(r).scale(self.q2) + self.Q2.of(self.Q1)
        if not h.reduce_mod(self.d).is_zero():
            raise InvariantViolation("q2*y + Q2(Q1(y)) does not vanish modulo d")

    @classmethod
    def build(cls, d, q1, q2, Q1, Q2, ring: BaseRing | None = None) -> "Rl2Data":
        return cls(d, q1, q2, Q1, Q2, _ring(ring, Q1, Q2, d, q1, q2))

    def F(self) -> BiPoly:
        r = self.ring
        x, y = BiPoly.x(r), BiPoly.y(r)
        inner = x.scale(self.q1 * self.d) + self.Q1
        num = y.scale(self.q2) + self.Q2.of(inner)
        return num.exquo_scalar(self.d)

    def F0(self) -> BiPoly:
        r = self.ring
        return (BiPoly.y(r).scale(self.q2) + self.Q2.of(self.Q1)).exquo_scalar(self.d)


@dataclass
class CoordinateWitness:
    F: BiPoly
    sigma: PlaneMap
    sigma_inverse: PlaneMap
    trace: dict = field(default_factory=dict)

    def check(self) -> bool:
        return (self.sigma.f2 == self.F
                and compose(self.sigma, self.sigma_inverse).is_identity()
                and compose(self.sigma_inverse, self.sigma).is_identity()
                and self.sigma.is_integral() and self.sigma_inverse.is_integral())


def _tri(p, Q: BiPoly) -> PlaneMap:
    return Triangular(p, Q).to_map(Q.dom)


def construct_rs(p1, Q1, u=1, ring: BaseRing | None = None) -> CoordinateWitness:
    """Automorphism ``((u*p1)^-1 (y - Q2(F)), F)`` with ``F = p1*x + Q1(y)``."""
    ring = _ring(ring, Q1, p1)
    p1, u = ring.convert(p1), ring.convert(u)
    if not ring.is_unit(u):
        raise ValueError(f"{u} is not a unit")
    Q1 = as_ring_ypoly(Q1, ring)
    v = is_va1_mod(Q1, p1, ring)
    if not v.member:
        raise NotCoordinate(f"{p1}*x + Q1(y) is not a coordinate: {v.reason}")
    Q2 = composition_inverse_mod(Q1, p1, ring)
    x, y = BiPoly.x(ring), BiPoly.y(ring)
    F = x.scale(p1) + Q1
    G = (y - Q2.of(F)).exquo_scalar(u * p1)
    sigma = PlaneMap(G, F)
    inv = invert_over_field(sigma)
    if not inv.is_integral():
        raise InternalCheckFailed("inverse is not integral")
    w = CoordinateWitness(F, sigma, inv.to_ring(), {"Q2": Q2, "u": u})
    if not w.check():
        raise InternalCheckFailed("construct_rs witness failed to verify")
    return w


def verify_rl2_criterion(data: Rl2Data):
    """``(ok, (verdict mod q1 on F(0,y), verdict mod q2 on Q2))``."""
    va = is_va1_mod(data.F0(), data.q1, data.ring)
    vb = is_va1_mod(data.Q2, data.q2, data.ring)
    return va.member and vb.member, (va, vb)


def verify_l2_criterion(p1, p2, Q1, Q2, ring: BaseRing | None = None):
    """Criterion for ``p2*y + Q2(p1*x + Q1(y))`` (the case d = 1)."""
    ring = _ring(ring, Q1, Q2, p1, p2)
    Q1, Q2 = as_ring_ypoly(Q1, ring), as_ring_ypoly(Q2, ring)
    h = BiPoly.y(ring).scale(ring.convert(p2)) + Q2.of(Q1)
    va = is_va1_mod(h, p1, ring)
    vb = is_va1_mod(Q2, p2, ring)
    return va.member and vb.member, (va, vb)


def criterion_b_weak(d, q1, q2, Q1, Q2, ring: BaseRing | None = None) -> bool:
    """Diagnostic variant of criterion b under the weaker hypothesis on d.

    With ``a = Q2'(0)`` and ``N = Q2 - a*y``: N has nilpotent coefficients
    modulo q2, and F(0, y) lies in VA1 modulo ``gcd(q2, a*q1)``.  Exposed for
    comparison only; it is not a decision path for coordinates.
    """
    ring = _ring(ring, Q1, Q2, d, q1, q2)
    d, q1, q2 = ring.convert(d), ring.convert(q1), ring.convert(q2)
    Q1, Q2 = as_ring_ypoly(Q1, ring), as_ring_ypoly(Q2, ring)
    a = Q2.coeff(0, 1)
    N = Q2 - BiPoly.y(ring).scale(a)
    if not all(is_nilpotent_mod(c, q2, ring) for c in N.terms.values()):
        return False
    g = ring.gcd(q2, a * q1) if a != 0 else ring.normalize_unit(q2)[1]
    if ring.is_unit(g):
        return True
    F0 = (BiPoly.y(ring).scale(q2) + Q2.of(Q1)).exquo_scalar(d)
    return is_va1_mod(F0, g, ring).member


def _reduce_coeffs(Q: BiPoly, m) -> BiPoly:
    return Q.reduce_mod(m).lift()


def construct_rl2(data: Rl2Data) -> CoordinateWitness:
    ok, (va, vb) = verify_rl2_criterion(data)
    if not ok:
        which = va.reason if not va.member else vb.reason
        raise CriterionFailed(f"criterion fails: {which}")
    r = data.ring
    d, q1, q2, Q1, Q2 = data.d, data.q1, data.q2, data.Q1, data.Q2
    x, y = BiPoly.x(r), BiPoly.y(r)
    F = data.F()

    # S(Q2(y)) = y + q2*U(y)
    S = composition_inverse_mod(Q2, q2, r)
    U = (S.of(Q2) - y).exquo_scalar(q2)
    # S(q2*y + x) - S(x) = q2*V(x, y)
    S_at_x = S.substitute(BiPoly.zero(r), x)
    V = (S.substitute(BiPoly.zero(r), x + y.scale(q2)) - S_at_x).exquo_scalar(q2)
    W = V.substitute(Q2.of(Q1), y)
    T = composition_inverse_mod(data.F0(), q1, r)
    Q3 = S.of(y.scale(d)) - (U.of(Q1.of(T)) + W.of(T)).scale(q2)
    Q3 = _reduce_coeffs(Q3, q1 * q2)

    dom = r.field
    pi = PlaneMap.swap(dom)
    t1 = _tri(q1 * d, Q1.to_field())
    t2 = _tri(dom.inverse(dom.convert(d)) * q2, Q2.to_field().scale(dom.inverse(dom.convert(d))))
    inv_q = dom.inverse(dom.convert(q1 * q2))
    t3 = _tri(inv_q, (-Q3.to_field()).scale(inv_q))
    sigma = compose_all([t1, pi, t2, pi, t3])
    if not sigma.is_integral():
        raise InternalCheckFailed("sigma is not integral")
    sigma = sigma.to_ring()
    if sigma.f2 != F:
        raise InternalCheckFailed("sigma(y) differs from F")
    cong = x.scale(q1 * d) + Q1 - Q3.of(F)
    if not cong.reduce_mod(q1 * q2).is_zero():
        raise InternalCheckFailed("congruence q1*d*x + Q1(y) = Q3(F) mod q1*q2 fails")
    if jacobian_det(sigma) != BiPoly.const(1, r):
        raise InternalCheckFailed("Jacobian determinant is not 1")

    # inverse: t3^-1 pi t2^-1 pi t1^-1
    G = (y.scale(d) - Q2.of(x.scale(q1 * q2) + Q3)).exquo_scalar(q2)
    H = (x.scale(q1 * q2) + Q3 - Q1.of(G)).exquo_scalar(q1 * d)
    inv = PlaneMap(H, G)
    trace = {"S": S, "U": U, "V": V, "W": W, "T": T, "Q3": Q3}
    w = CoordinateWitness(F, sigma, inv, trace)
    if not w.check():
        raise InternalCheckFailed("construct_rl2 witness failed to verify")
    return w


def construct_l2(p1, p2, Q1, Q2, ring: BaseRing | None = None) -> CoordinateWitness:
    """Witness for ``p2*y + Q2(p1*x + Q1(y))`` via the case d = 1."""
    ring = _ring(ring, Q1, Q2, p1, p2)
    ok, (va, vb) = verify_l2_criterion(p1, p2, Q1, Q2, ring)
    if not ok:
        raise CriterionFailed((va.reason if not va.member else vb.reason) or "criterion fails")
    return construct_rl2(Rl2Data(1, p1, p2, Q1, Q2, ring))


def berson_poly(ps: Sequence, Qs: Sequence, ring: BaseRing | None = None) -> BiPoly:
    """``F_l = p_l F_{l-2} + Q_l(F_{l-1})`` with ``F_{-1} = x`` and ``F_0 = y``."""
    if len(ps) != len(Qs) or not ps:
        raise ValueError("ps and Qs need the same positive length")
    dom = None
    for Q in Qs:
        if isinstance(Q, BiPoly):
            dom = Q.dom if dom is None or dom.kind == "ring" else dom
    if dom is None:
        dom = _ring(ring, *ps)
    prev, cur = BiPoly.x(dom), BiPoly.y(dom)
    for p, Q in zip(ps, Qs):
        if p == 0:
            raise ValueError("p must be nonzero")
        Q = Q if isinstance(Q, BiPoly) else BiPoly.from_y_coeffs(Q, dom)
        prev, cur = cur, prev.scale(p) + Q.of(cur)
    return cur


def example2_family(d, q1, q2, Q3, Q4, ring: BaseRing | None = None) -> Rl2Data:
    """``Q1 = y + d*Q3`` and ``Q2 = q1 {(d - q2*v) y + d*Q4}`` with ``d*u + q1*v = 1``."""
    ring = _ring(ring, Q3, Q4, d, q1, q2)
    d, q1, q2 = ring.convert(d), ring.convert(q1), ring.convert(q2)
    for a, b, name in ((d, q1, "d, q1"), (d, q2, "d, q2"), (q1, q2, "q1, q2")):
        if a == 0 or b == 0 or not ring.is_unit(ring.gcd(a, b)):
            raise PairwiseCoprimalityFailed(f"gcd({name}) is not a unit")
    Q3, Q4 = as_ring_ypoly(Q3, ring), as_ring_ypoly(Q4, ring)
    for c in Q4.terms.values():
        if not is_nilpotent_mod(c, q2, ring):
            raise NilpotencyFailed("Q4 has a coefficient that is not nilpotent modulo q2")
    _, u, v = ring.gcd_bezout(d, q1)
    y = BiPoly.y(ring)
    Q1 = y + Q3.scale(d)
    Q2 = (y.scale(d - q2 * v) + Q4.scale(d)).scale(q1)
    return Rl2Data(d, q1, q2, Q1, Q2, ring)
