"""Coordinates of (R/pR)[y] and the length-1 criterion.

A polynomial ``P`` over R/pR is a coordinate of (R/pR)[y] exactly when
``P = u*y + r + N(y)`` with ``u`` a unit and every coefficient of ``N``
nilpotent.  Inverses are computed by fixed-point iteration, which converges
after ``e`` rounds because the nilradical of R/pR vanishes in power ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base_rings import BaseRing, QuotElem, QuotientRing, ring_of, is_nilpotent_mod, is_unit_mod
from .bipoly import BiPoly


class NotVa1(ArithmeticError):
    """The polynomial is not a coordinate modulo p."""


@dataclass(frozen=True)
class Va1Verdict:
    member: bool
    unit_coeff: QuotElem
    constant: QuotElem
    nilpotent_tail: BiPoly
    reason: str = ""


def _ring_of_poly(Q: BiPoly, p, ring: BaseRing | None) -> BaseRing:
    if ring is not None:
        return ring
    if Q.dom.kind != "quotient":
        return Q.dom.base
    return ring_of(p)


def as_ring_ypoly(Q, ring: BaseRing) -> BiPoly:
    if isinstance(Q, BiPoly):
        if not Q.is_univariate_y():
            raise ValueError(f"{Q} is not a polynomial in y")
        if Q.dom.kind == "quotient":
            return Q.lift()
        return Q.to_domain(ring) if Q.dom is not ring else Q
    return BiPoly.from_y_coeffs(Q, ring)


def is_va1_mod(Q, p, ring: BaseRing | None = None) -> Va1Verdict:
    ring = _ring_of_poly(Q, p, ring) if isinstance(Q, BiPoly) else (ring or ring_of(p))
    p = ring.convert(p)
    if p == 0:
        raise ZeroDivisionError("zero modulus")
    Q = as_ring_ypoly(Q, ring)
    qr = QuotientRing(ring, p)
    coeffs = [qr.convert(c) for c in Q.y_coeffs()] if Q.terms else []
    while len(coeffs) < 2:
        coeffs.append(qr.zero)
    r, u = coeffs[0], coeffs[1]
    tail = BiPoly({(0, j): c for j, c in enumerate(coeffs) if j >= 2}, qr)
    if not is_unit_mod(u.rep, p, ring):
        return Va1Verdict(False, u, r, tail, "linear coefficient is not a unit")
    for j, c in enumerate(coeffs):
        if j >= 2 and not is_nilpotent_mod(c.rep, p, ring):
            return Va1Verdict(False, u, r, tail, f"coefficient of y^{j} is not nilpotent")
    return Va1Verdict(True, u, r, tail)


def composition_inverse_mod(Q, p, ring: BaseRing | None = None) -> BiPoly:
    """Canonical ``S`` over R with ``S(Q(y)) = Q(S(y)) = y`` modulo p."""
    ring = _ring_of_poly(Q, p, ring) if isinstance(Q, BiPoly) else (ring or ring_of(p))
    p = ring.convert(p)
    Q = as_ring_ypoly(Q, ring)
    v = is_va1_mod(Q, p, ring)
    if not v.member:
        raise NotVa1(f"{Q} is not a coordinate modulo {p}: {v.reason}")
    qr = QuotientRing(ring, p)
    y = BiPoly.y(qr)
    uinv = v.unit_coeff.inverse()
    # Qn = u^-1 (Q - r) = y + Ntil with Ntil nilpotent
    ntil = v.nilpotent_tail.scale(uinv)
    e = ring.nil_exponent(p)
    S = y
    for _ in range(e + 1):
        nxt = y - ntil.of(S)
        if nxt == S:
            break
        S = nxt
    S = S.of((y - v.constant).scale(uinv))
    out = S.lift()
    check = out.of(Q).reduce_mod(p)
    if check != BiPoly.y(qr):
        raise AssertionError("inverse modulo p failed to verify")
    return out


def is_coordinate_B1(p, Q, ring: BaseRing | None = None) -> bool:
    """Whether ``p*x + Q(y)`` is a coordinate of R[x,y]."""
    ring = _ring_of_poly(Q, p, ring) if isinstance(Q, BiPoly) else (ring or ring_of(p))
    if ring.convert(p) == 0:
        raise ValueError("p must be nonzero")
    return is_va1_mod(Q, p, ring).member


def is_tame_B1(p, Q, ring: BaseRing | None = None) -> bool:
    """Whether ``Q = a*y + b`` modulo p, which makes ``(p*x + Q(y), ...)`` tame."""
    ring = _ring_of_poly(Q, p, ring) if isinstance(Q, BiPoly) else (ring or ring_of(p))
    v = is_va1_mod(Q, p, ring)
    if not v.member:
        raise ValueError("is_tame_B1 needs a coordinate")
    return v.nilpotent_tail.is_zero()


def derivative_criterion(Q, p, ring: BaseRing | None = None) -> bool:
    """Q' has unit constant term and nilpotent higher coefficients modulo p.

    Equivalent to membership in VA1(R/pR) only over Q-algebras (Q[z]); over
    Z/n it fails, e.g. y^2 modulo 2.
    """
    ring = _ring_of_poly(Q, p, ring) if isinstance(Q, BiPoly) else (ring or ring_of(p))
    Q = as_ring_ypoly(Q, ring)
    d = Q.partial("y")
    coeffs = d.y_coeffs() if d.terms else []
    c0 = coeffs[0] if coeffs else ring.zero
    if not is_unit_mod(c0, p, ring):
        return False
    return all(is_nilpotent_mod(c, p, ring) for c in coeffs[1:])
