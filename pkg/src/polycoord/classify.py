"""Quadruplets ``(p1, p2, Q1, Q2)`` describing ``F = p2*y + Q2(p1*x + Q1(y))``.

Parameters live in qt(R); only the expansion ``F`` has to be integral.
:func:`reduce` picks the canonical representative of an equivalence class
(two quadruplets are equivalent when their expansions differ by a constant),
and :func:`classify` reports on tameness, mates of length 1 and the
"1+1" decomposition of a coordinate given by a reduced quadruplet.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional

from .base_rings import BaseRing, QZ
from .bipoly import BiPoly
from .construct import NotCoordinate, Rl2Data, construct_rs, verify_rl2_criterion
from .plane_maps import PlaneMap, compose, map_to_json, scalar_to_str, vde_check
from .va1 import is_tame_B1, is_va1_mod


class NotIntegral(ValueError):
    pass


class NotReduced(ValueError):
    pass


def _fconv(ring: BaseRing, c):
    return ring.field.convert(c)


@dataclass(frozen=True)
class Quadruplet:
    p1: object
    p2: object
    Q1: BiPoly
    Q2: BiPoly
    ring: BaseRing

    def __post_init__(self):
        f = self.ring.field
        p1, p2 = f.convert(self.p1), f.convert(self.p2)
        if p1 == 0 or p2 == 0:
            raise ValueError("p1 and p2 must be nonzero")
        Q1, Q2 = self.Q1.to_domain(f), self.Q2.to_domain(f)
        if not (Q1.is_univariate_y() and Q2.is_univariate_y()):
            raise ValueError("Q1 and Q2 must be polynomials in y")
        if Q1.deg_y < 1 or Q2.deg_y < 2:
            raise ValueError("rational length 2 needs deg Q1 >= 1 and deg Q2 >= 2")
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "Q1", Q1)
        object.__setattr__(self, "Q2", Q2)

    def expand_field(self) -> BiPoly:
        f = self.ring.field
        x, y = BiPoly.x(f), BiPoly.y(f)
        return y.scale(self.p2) + self.Q2.of(x.scale(self.p1) + self.Q1)

    def is_reduced(self) -> bool:
        r = self.ring
        if self.Q1.constant_term() != 0 or self.Q2.constant_term() != 0:
            return False
        if not r.is_integral(self.p1) or not self.Q1.is_integral():
            return False
        p1 = r.convert(r.numer(self.p1))
        if r.normalize_unit(p1)[1] != p1:
            return False
        g = r.gcd_many([p1] + [r.convert(r.numer(c)) for c in self.Q1.terms.values()])
        return r.is_unit(g)

    def key(self) -> tuple:
        """Hashable exact identity of the parameters."""
        return (self.p1, self.p2, self.Q1, self.Q2)


def expand(q: Quadruplet) -> BiPoly:
    F = q.expand_field()
    if not F.is_integral():
        raise NotIntegral("p2*y + Q2(p1*x + Q1(y)) has coefficients outside R")
    return F.to_ring()


def reduce_with_shift(q: Quadruplet):
    """``(reduced, r)`` where ``expand(reduced) = expand(q) + r``."""
    r = q.ring
    f = r.field
    y = BiPoly.y(f)
    p1, p2, Q1, Q2 = q.p1, q.p2, q.Q1, q.Q2
    # 1) Q1(0) = 0
    c = Q1.constant_term()
    Q1 = Q1 - c
    Q2 = Q2.of(y + c)
    # 2) Q2(0) = 0
    shift = -Q2.constant_term()
    Q2 = Q2 + shift
    # 3) divide (p1, Q1) by their content; this clears denominators and
    #    makes gcd(p1, Q1) = 1 at the same time
    cont = BiPoly({(0, 0): p1, **Q1.terms}, f).content()
    cont = f.convert(cont)
    inv = f.inverse(cont)
    p1 = p1 * inv
    Q1 = Q1.scale(inv)
    Q2 = Q2.of(y.scale(cont))
    # 4) unit-normalize p1
    u, w = r.normalize_unit(r.convert(r.numer(p1)))
    uinv = f.inverse(f.convert(u))
    Q2 = Q2.of(y.scale(u))
    Q1 = Q1.scale(uinv)
    p1 = f.convert(w)
    out = Quadruplet(p1, p2, Q1, Q2, r)
    return out, shift


def reduce(q: Quadruplet) -> Quadruplet:
    return reduce_with_shift(q)[0]


def jacobian_identity_holds(q: Quadruplet) -> bool:
    """``p1*F_y - Q1'(y)*F_x == p1*p2`` for ``F = expand(q)``."""
    F = expand(q).to_field()
    lhs = F.partial("y").scale(q.p1) - q.Q1.partial("y") * F.partial("x")
    return lhs == BiPoly.const(q.p1 * q.p2, q.ring.field)


def equivalent(a: Quadruplet, b: Quadruplet) -> bool:
    return reduce(a).key() == reduce(b).key()


@dataclass(frozen=True)
class DqDecomposition:
    d: object
    q1: object
    q2: object
    Q2_tilde: BiPoly

    def rl2_data(self, Q1: BiPoly, ring: BaseRing) -> Rl2Data:
        return Rl2Data(self.d, self.q1, self.q2, Q1.to_ring(), self.Q2_tilde, ring)


def dq_decompose(q: Quadruplet) -> DqDecomposition:
    if not q.is_reduced():
        raise NotReduced("dq_decompose needs a reduced quadruplet")
    r = q.ring
    d = r.convert(r.denom(q.p2))
    q2 = r.convert(r.numer(q.p2))
    p1 = r.convert(r.numer(q.p1))
    q1 = r.exquo(p1, d)
    Q2t = q.Q2.scale(d)
    if not Q2t.is_integral():
        raise NotIntegral("d*Q2 is not integral")
    return DqDecomposition(d, q1, q2, Q2t.to_ring())


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


class TameVerdict(str, enum.Enum):
    TAME = "Tame"
    NOT_TAME = "NotTame"
    UNDETERMINED = "Undetermined"


@dataclass
class ClassificationReport:
    F: BiPoly
    mate_length1: bool
    mate: Optional[PlaneMap]
    length_1plus1: bool
    sigma: Optional[PlaneMap]
    tau: Optional[PlaneMap]
    tame: TameVerdict
    tame_reason: str
    tame_witness: Optional[list] = None
    wild_3d_note: Optional[str] = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        def m(s):
            return None if s is None else map_to_json(s)
        dom = self.F.dom
        return {
            "F": str(self.F),
            "mate_length1": self.mate_length1,
            "mate": m(self.mate),
            "length_1plus1": self.length_1plus1,
            "sigma": m(self.sigma),
            "tau": m(self.tau),
            "tame": self.tame.value,
            "tame_reason": self.tame_reason,
            "tame_witness": None if self.tame_witness is None
            else [map_to_json(w) for w in self.tame_witness],
            "wild_3d_note": self.wild_3d_note,
            "details": {k: (str(v) if isinstance(v, BiPoly) else scalar_to_str(v, dom))
                        for k, v in self.details.items()},
        }

    def coherent(self) -> bool:
        if self.tame is TameVerdict.TAME and not self.length_1plus1:
            return False
        if self.mate_length1 and not self.length_1plus1:
            return False
        return True


def tame_word_B1(p, Q: BiPoly, ring: BaseRing) -> Optional[list]:
    """A tame automorphism ``[T, L]`` with ``(T L)(y) = p*x + Q(y)``, if ``Q = a*y + b`` mod p.

    ``T = (x + K(y), y)`` with ``Q = a*y + b + p*K`` and ``L`` affine with
    ``L(y) = p*x + a*y + b`` and determinant 1.
    """
    p = ring.convert(p)
    Q = Q.to_ring()
    if not is_va1_mod(Q, p, ring).member or not is_tame_B1(p, Q, ring):
        return None
    x, y = BiPoly.x(ring), BiPoly.y(ring)
    if ring.is_unit(p):
        a, b = ring.one, ring.zero
        s, t = ring.zero, ring.unit_inverse(p)
        # s*a + t*p = 1
    else:
        a, b = Q.coeff(0, 1), Q.constant_term()
        g, s, t = ring.gcd_bezout(a, p)
        ginv = ring.unit_inverse(g)
        s, t = s * ginv, t * ginv
    K = (Q - y.scale(a) - b).exquo_scalar(p)
    T = PlaneMap(x + K, y)
    L = PlaneMap(x.scale(s) - y.scale(t), x.scale(p) + y.scale(a) + b)
    return [T, L]


def _compose_word(word: list) -> PlaneMap:
    acc = word[0]
    for m in word[1:]:
        acc = compose(acc, m)
    return acc


def classify(q: Quadruplet, budget: int = 1) -> ClassificationReport:
    if not q.is_reduced():
        raise NotReduced("classify needs a reduced quadruplet")
    r = q.ring
    F = expand(q)
    dq = dq_decompose(q)
    data = dq.rl2_data(q.Q1, r)
    ok, _ = verify_rl2_criterion(data)
    if not ok:
        raise NotCoordinate("the expansion is not a coordinate")
    p1 = r.convert(r.numer(q.p1))
    Q1 = q.Q1.to_ring()
    f = r.field
    x = BiPoly.x(r)
    details: dict = {"d": dq.d, "q1": dq.q1, "q2": dq.q2}

    # mate of length 1
    p1p2 = f.convert(q.p1 * q.p2)
    mate = None
    mate_ok = r.is_integral(p1p2) and r.is_unit(r.convert(r.numer(p1p2)))
    if mate_ok:
        u = r.convert(r.numer(p1p2))
        G = (x.scale(p1) + Q1).scale(r.unit_inverse(u))
        mate = PlaneMap(F, G)
        if not vde_check(mate):
            raise AssertionError("mate does not give an automorphism")

    # length "1+1"
    sigma = tau = None
    one_one = is_va1_mod(Q1, p1, r).member
    if one_one:
        ws = construct_rs(p1, Q1, -1, r)
        sigma = ws.sigma
        Q5 = ws.trace["Q2"]
        tau_y = (x.scale(-p1p2) + Q5.to_field().scale(q.p2) + q.Q2)
        if not tau_y.is_integral():
            raise AssertionError("sigma^-1(F) is not integral")
        tau_y = tau_y.to_ring()
        c = tau_y.coeff(1, 0)
        M = tau_y - x.scale(c)
        wt = construct_rs(c, M, 1, r)
        tau = wt.sigma
        if compose(sigma, tau).f2 != F:
            raise AssertionError("sigma tau (y) differs from F")
        details["tau_y"] = tau_y

    # tameness
    witness = None
    if not one_one:
        verdict, reason = TameVerdict.NOT_TAME, "not of length 1+1"
    elif budget <= 0:
        verdict, reason = TameVerdict.UNDETERMINED, "search budget is zero"
    else:
        w1 = tame_word_B1(p1, Q1, r)
        if w1 is None and mate_ok:
            verdict, reason = TameVerdict.NOT_TAME, "the length-1 mate is not tame"
        elif w1 is None:
            verdict, reason = TameVerdict.UNDETERMINED, "p1*x + Q1(y) is not tame"
        else:
            s_t = _compose_word(w1)
            rest = _inverse_tame(w1, r)(F)
            if not rest.is_integral() or rest.deg_x > 1 or any(
                    i == 1 and j > 0 for (i, j) in rest.terms):
                verdict, reason = TameVerdict.UNDETERMINED, "unexpected shape of the second factor"
            else:
                rest = rest.to_ring()
                c = rest.coeff(1, 0)
                w2 = tame_word_B1(c, rest - x.scale(c), r)
                if w2 is None:
                    verdict, reason = TameVerdict.UNDETERMINED, "second length-1 factor is not tame"
                else:
                    rho = compose(s_t, _compose_word(w2))
                    if rho.f2 != F or not vde_check(rho):
                        raise AssertionError("tame witness failed to verify")
                    witness = w1 + w2
                    verdict, reason = TameVerdict.TAME, "tame factorization found"
    note = None
    if r is QZ and verdict is TameVerdict.NOT_TAME:
        note = ("not tame over Q[z]; viewed in Q[x,y,z] this coordinate is wild "
                "(cited result, not re-derived)")
    rep = ClassificationReport(F, mate_ok, mate, one_one, sigma, tau, verdict, reason,
                               witness, note, details)
    if not rep.coherent():
        raise AssertionError("incoherent classification report")
    return rep


def _inverse_tame(word: list, ring: BaseRing) -> PlaneMap:
    """Inverse of ``T L`` from the explicit factors (both have Jacobian 1)."""
    T, L = word
    x, y = BiPoly.x(ring), BiPoly.y(ring)
    # L = (s x - t y, p x + a y + b) with s*a + t*p = 1
    s, mt = L.f1.coeff(1, 0), L.f1.coeff(0, 1)
    p, a, b = L.f2.coeff(1, 0), L.f2.coeff(0, 1), L.f2.constant_term()
    yb = y - b
    Linv = PlaneMap(x.scale(a) + yb.scale(-mt), x.scale(-p) + yb.scale(s))
    K = T.f1 - x
    Tinv = PlaneMap(x - K, y)
    return compose(Linv, Tinv)
