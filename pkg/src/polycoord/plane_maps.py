"""Endomorphisms of R[x,y] given by the images of x and y.

Composition convention: ``compose(s, t)`` is the endomorphism ``F -> s(t(F))``,
so its components are ``t.f1(s.f1, s.f2)`` and ``t.f2(s.f1, s.f2)``.  With
this convention ``compose(M, Triangular(p, Q))`` replaces ``M.f1`` by
``p*M.f1 + Q(M.f2)``, and products like ``t1 * pi * t2 * pi * t3`` are read
left to right.  The image of y under that product is the polynomial
``t1 pi t2 pi t3 (y)``.

A :class:`Word` is a list of factors.  Words produced by
:func:`decompose_over_field` have the normal form
``T1 pi T2 pi ... pi T_{l+1} Tail`` where the ``Ti`` are triangular, ``Tail``
is affine and equals the identity whenever ``l >= 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence, Union

from .base_rings import ZZ, BaseRing, Domain
from .bipoly import NEG_INF, BiPoly, _join


class NotAnAutomorphism(ArithmeticError):
    """Degree reduction got stuck; the map is not invertible over qt(R)."""

    def __init__(self, message: str, degrees=None):
        super().__init__(message)
        self.degrees = degrees


class NonReducedWord(ValueError):
    pass


@dataclass(frozen=True)
class PlaneMap:
    f1: BiPoly
    f2: BiPoly

    def __post_init__(self):
        if self.f1.dom is not self.f2.dom and self.f1.dom != self.f2.dom:
            dom = _join(self.f1.dom, self.f2.dom)
            object.__setattr__(self, "f1", self.f1.to_domain(dom))
            object.__setattr__(self, "f2", self.f2.to_domain(dom))

    @property
    def dom(self) -> Domain:
        return self.f1.dom

    @classmethod
    def identity(cls, dom: Domain = ZZ) -> "PlaneMap":
        return cls(BiPoly.x(dom), BiPoly.y(dom))

    @classmethod
    def swap(cls, dom: Domain = ZZ) -> "PlaneMap":
        return cls(BiPoly.y(dom), BiPoly.x(dom))

    def __call__(self, F: BiPoly) -> BiPoly:
        """Apply the endomorphism to a polynomial: ``F(f1, f2)``."""
        return F.substitute(self.f1, self.f2)

    def __matmul__(self, other: "PlaneMap") -> "PlaneMap":
        return compose(self, other)

    def to_domain(self, dom: Domain) -> "PlaneMap":
        return PlaneMap(self.f1.to_domain(dom), self.f2.to_domain(dom))

    def to_field(self) -> "PlaneMap":
        return PlaneMap(self.f1.to_field(), self.f2.to_field())

    def to_ring(self) -> "PlaneMap":
        return PlaneMap(self.f1.to_ring(), self.f2.to_ring())

    def is_integral(self) -> bool:
        return self.f1.is_integral() and self.f2.is_integral()

    def is_identity(self) -> bool:
        return self.f1 == BiPoly.x(self.dom) and self.f2 == BiPoly.y(self.dom)

    @property
    def degree(self):
        return max(self.f1.total_degree, self.f2.total_degree)

    def __str__(self):
        return f"({self.f1}, {self.f2})"


def compose(s: PlaneMap, t: PlaneMap) -> PlaneMap:
    return PlaneMap(t.f1.substitute(s.f1, s.f2), t.f2.substitute(s.f1, s.f2))


def compose_all(maps: Sequence[PlaneMap], dom: Domain | None = None) -> PlaneMap:
    if not maps:
        return PlaneMap.identity(dom or ZZ)
    acc = maps[0]
    for m in maps[1:]:
        acc = compose(acc, m)
    return acc


def jacobian_det(s: PlaneMap) -> BiPoly:
    return s.f1.partial("x") * s.f2.partial("y") - s.f2.partial("x") * s.f1.partial("y")


# ---------------------------------------------------------------------------
# Factors and words
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Triangular:
    """``(p*x + Q(y), y)``."""

    p: object
    Q: BiPoly

    def __post_init__(self):
        if self.p == 0:
            raise ValueError("Triangular factor needs p != 0")
        if not self.Q.is_univariate_y():
            raise ValueError("Triangular factor needs Q in y only")

    def to_map(self, dom: Domain | None = None) -> PlaneMap:
        dom = dom or self.Q.dom
        Q = self.Q.to_domain(dom) if dom is not self.Q.dom else self.Q
        return PlaneMap(BiPoly.x(dom).scale(self.p) + Q, BiPoly.y(dom))

    def inverse(self) -> "Triangular":
        F = self.Q.to_field()
        inv = F.dom.inverse(F.dom.convert(self.p))
        return Triangular(inv, -F.scale(inv))

    def is_affine(self) -> bool:
        return self.Q.deg_y <= 1


@dataclass(frozen=True)
class Swap:
    def to_map(self, dom: Domain = ZZ) -> PlaneMap:
        return PlaneMap.swap(dom)

    def inverse(self) -> "Swap":
        return self


@dataclass(frozen=True)
class AffineTail:
    """``(a*x + b*y + e, c*x + d*y + f)`` with ``a*d - b*c != 0``."""

    a: object
    b: object
    c: object
    d: object
    e: object
    f: object

    def __post_init__(self):
        if self.a * self.d - self.b * self.c == 0:
            raise ValueError("AffineTail matrix is singular")

    @classmethod
    def identity(cls, dom: Domain = ZZ) -> "AffineTail":
        return cls(dom.one, dom.zero, dom.zero, dom.one, dom.zero, dom.zero)

    @classmethod
    def from_map(cls, m: PlaneMap) -> "AffineTail":
        f1, f2 = m.f1, m.f2
        return cls(f1.coeff(1, 0), f1.coeff(0, 1), f2.coeff(1, 0), f2.coeff(0, 1),
                   f1.coeff(0, 0), f2.coeff(0, 0))

    def to_map(self, dom: Domain = ZZ) -> PlaneMap:
        x, y = BiPoly.x(dom), BiPoly.y(dom)
        return PlaneMap(x.scale(self.a) + y.scale(self.b) + self.e,
                        x.scale(self.c) + y.scale(self.d) + self.f)

    def is_identity(self) -> bool:
        return (self.a == 1 and self.b == 0 and self.c == 0 and self.d == 1
                and self.e == 0 and self.f == 0)

    def inverse(self) -> "AffineTail":
        det = _as_field_scalar(self.a * self.d - self.b * self.c)
        ia, ib, ic, id_ = self.d / det, -self.b / det, -self.c / det, self.a / det
        return AffineTail(ia, ib, ic, id_, -(ia * self.e + ib * self.f),
                          -(ic * self.e + id_ * self.f))


def _as_field_scalar(c):
    from fractions import Fraction
    from .base_rings import RatFunc, UniPoly
    if isinstance(c, UniPoly):
        return RatFunc(c)
    if isinstance(c, int):
        return Fraction(c)
    return c


Factor = Union[Triangular, Swap, AffineTail]


@dataclass(frozen=True)
class Word:
    factors: tuple
    dom: Domain

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def swaps(self) -> int:
        return sum(isinstance(f, Swap) for f in self.factors)

    def triangulars(self) -> list:
        return [f for f in self.factors if isinstance(f, Triangular)]

    def tail(self) -> AffineTail | None:
        if self.factors and isinstance(self.factors[-1], AffineTail):
            return self.factors[-1]
        return None


def recompose(w: Word | Sequence, dom: Domain | None = None) -> PlaneMap:
    if isinstance(w, Word):
        dom = dom or w.dom
        factors = w.factors
    else:
        factors = list(w)
    dom = dom or ZZ
    maps = [f.to_map(dom) for f in factors]
    return compose_all(maps, dom)


def invert_word(w: Word) -> Word:
    return Word(tuple(f.inverse() for f in reversed(w.factors)), w.dom)


# ---------------------------------------------------------------------------
# Normal form.  Internally a word is kept as B0 pi B1 pi ... pi Bl where each
# Bi = (p*x + Q(y), d*y + e) lies in the Borel-type group BA2.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _B:
    p: object
    Q: BiPoly
    d: object
    e: object

    def then(self, o: "_B") -> "_B":
        """``self * o`` in the composition order of this module."""
        dom = self.Q.dom
        shifted = BiPoly.y(dom).scale(self.d) + self.e
        return _B(self.p * o.p, self.Q.scale(o.p) + o.Q.of(shifted),
                  self.d * o.d, o.d * self.e + o.e)

    def tri(self) -> Triangular:
        return Triangular(self.p, self.Q)

    def is_affine(self) -> bool:
        return self.Q.deg_y <= 1

    def to_map(self) -> PlaneMap:
        dom = self.Q.dom
        return PlaneMap(BiPoly.x(dom).scale(self.p) + self.Q,
                        BiPoly.y(dom).scale(self.d) + self.e)


def _b_identity(dom) -> _B:
    return _B(dom.one, BiPoly.zero(dom), dom.one, dom.zero)


def _bruhat(m: PlaneMap, dom) -> list:
    """Split an invertible affine map into ``[B]`` or ``[B1, 'pi', B2]``."""
    t = AffineTail.from_map(m)
    a, b, c, d, e, f = (dom.convert(v) for v in (t.a, t.b, t.c, t.d, t.e, t.f))
    y = BiPoly.y(dom)
    if c == 0:
        return [_B(a, y.scale(b) + e, d, f)]
    b1 = _B(c, y.scale(d), dom.one, dom.zero)
    b2 = _B((b * c - a * d) / c, y.scale(a / c) + e, dom.one, f)
    return [b1, "pi", b2]


def _to_blocks(factors, dom) -> list:
    """Fold factors into an alternating list of ``_B`` blocks and ``'pi'``."""
    out: list = [_b_identity(dom)]

    def push_b(b: _B):
        out[-1] = out[-1].then(b)

    def push_pi():
        if len(out) >= 3 and _is_id_b(out[-1]):
            # pi * id * pi cancels
            out.pop()
            out.pop()
        else:
            out.append("pi")
            out.append(_b_identity(dom))

    for f in factors:
        if isinstance(f, Swap):
            push_pi()
        elif isinstance(f, Triangular):
            push_b(_B(dom.convert(f.p), f.Q.to_domain(dom), dom.one, dom.zero))
        elif isinstance(f, AffineTail):
            for piece in _bruhat(f.to_map(dom), dom):
                if piece == "pi":
                    push_pi()
                else:
                    push_b(piece)
        elif isinstance(f, _B):
            push_b(f)
        else:
            raise TypeError(f"unknown factor {f!r}")
    return out


def _is_id_b(b: _B) -> bool:
    return b.p == 1 and b.Q.is_zero() and b.d == 1 and b.e == 0


def _collapse(blocks: list, dom) -> list:
    """Remove interior affine blocks: ``pi B pi`` is affine when B is."""
    changed = True
    while changed:
        changed = False
        for k in range(2, len(blocks) - 2, 2):
            b = blocks[k]
            if b.is_affine():
                sw = PlaneMap.swap(dom)
                mid = compose(compose(sw, b.to_map()), sw)
                pieces = [blocks[k - 2]] + _bruhat(mid, dom) + [blocks[k + 2]]
                merged = _to_blocks(pieces_to_factors(pieces), dom)
                blocks = blocks[:k - 2] + merged + blocks[k + 3:]
                changed = True
                break
    return blocks


def pieces_to_factors(pieces):
    return [Swap() if p == "pi" else p for p in pieces]


def _normal_form(factors, dom) -> Word:
    blocks = _collapse(_to_blocks(factors, dom), dom)
    y = BiPoly.y(dom)
    # push the y-scalings rightwards: (x, d*y + e) pi = pi (d*x + e, y)
    for k in range(0, len(blocks) - 1, 2):
        b = blocks[k]
        if b.d != 1 or b.e != 0:
            blocks[k] = _B(b.p, b.Q, dom.one, dom.zero)
            dprime = _B(b.d, BiPoly.const(b.e, dom), dom.one, dom.zero)
            blocks[k + 2] = dprime.then(blocks[k + 2])
    last = blocks[-1]
    if len(blocks) == 1 and last.is_affine():
        # no swaps and an affine block: the whole map is the tail
        return Word((AffineTail.from_map(last.to_map()),), dom)
    factors_out: list = []
    if len(blocks) >= 3 and (last.d != 1 or last.e != 0):
        # T (x, d*y + e) = (x, d*y + e) T'' and pi (x, d*y + e) = (d*x + e, y) pi
        inv_d = dom.inverse(last.d)
        arg = (y - last.e).scale(inv_d)
        blocks[-1] = _B(last.p, last.Q.of(arg), dom.one, dom.zero)
        blocks[-3] = blocks[-3].then(_B(last.d, BiPoly.const(last.e, dom), dom.one, dom.zero))
        last = blocks[-1]
    for k, b in enumerate(blocks):
        if b == "pi":
            factors_out.append(Swap())
        else:
            factors_out.append(b.tri())
    tail = AffineTail(dom.one, dom.zero, dom.zero, last.d, dom.zero, last.e)
    factors_out.append(tail)
    return Word(tuple(factors_out), dom)


def normalize_word(w: Word | Sequence, dom: Domain | None = None) -> Word:
    if isinstance(w, Word):
        dom = dom or w.dom
        factors = w.factors
    else:
        factors = list(w)
    field = dom.base.field if dom.kind != "field" else dom
    return _normal_form(factors, field)


# ---------------------------------------------------------------------------
# Decomposition over the fraction field
# ---------------------------------------------------------------------------


def decompose_over_field(s: PlaneMap) -> Word:
    """Factor ``s`` as ``T1 pi T2 ... pi T_{l+1} Tail`` over qt(R).

    Iterated degree reduction: right-composing with ``(x - c*y**k, y)``
    replaces ``f1`` by ``f1 - c*f2**k``, and with ``pi`` swaps components.
    """
    m = s.to_field()
    dom = m.dom
    f1, f2 = m.f1, m.f2
    steps: list = []  # the g_i with s * g_0 * g_1 * ... = affine
    while max(f1.total_degree, f2.total_degree) > 1:
        d1, d2 = f1.total_degree, f2.total_degree
        if d2 > d1:
            f1, f2 = f2, f1
            steps.append(Swap())
            d1, d2 = d2, d1
        if d2 == NEG_INF or d2 < 1 or d1 % d2:
            raise NotAnAutomorphism(f"cannot reduce degrees ({d1}, {d2})", (d1, d2))
        k = d1 // d2
        lf1 = f1.leading_form()
        lf2k = f2.leading_form() ** k
        mono = max(lf2k.terms)
        c = lf1.coeff(*mono) / lf2k.coeff(*mono)
        if lf1 != lf2k.scale(c):
            raise NotAnAutomorphism(f"leading forms do not match at degrees ({d1}, {d2})",
                                    (d1, d2))
        f1 = f1 - (f2 ** k).scale(c)
        steps.append(Triangular(dom.one, BiPoly({(0, k): -c}, dom)))
    if f1.total_degree > 1 or f2.total_degree > 1:
        raise NotAnAutomorphism("degree reduction failed", (f1.total_degree, f2.total_degree))
    a = PlaneMap(f1, f2)
    t = AffineTail.from_map(a)
    if t.a * t.d - t.b * t.c == 0:
        raise NotAnAutomorphism("affine part is singular", (1, 1))
    factors = [AffineTail(*(dom.convert(v) for v in (t.a, t.b, t.c, t.d, t.e, t.f)))]
    factors += [g.inverse() for g in reversed(steps)]
    return _normal_form(factors, dom)


def invert_over_field(s: PlaneMap) -> PlaneMap:
    w = decompose_over_field(s)
    inv = recompose(invert_word(w), w.dom)
    return inv


def vde_check(s: PlaneMap) -> bool:
    """Membership in GA2(R): integral, unit Jacobian at the origin, invertible over qt(R)."""
    if not s.is_integral():
        return False
    base = s.dom.base
    r = s.to_ring() if s.dom.kind != "ring" else s
    j0 = jacobian_det(r).constant_term()
    if j0 == 0 or not base.is_unit(base.convert(j0)):
        return False
    try:
        decompose_over_field(r)
    except NotAnAutomorphism:
        return False
    return True


def rational_length(w: Word | Sequence) -> int:
    factors = w.factors if isinstance(w, Word) else list(w)
    prev = None
    for f in factors:
        if isinstance(f, Triangular) and isinstance(prev, Triangular):
            raise NonReducedWord("adjacent triangular factors")
        prev = f
    return sum(isinstance(f, Swap) for f in factors)


# ---------------------------------------------------------------------------
# Shape predicates
# ---------------------------------------------------------------------------


def _is_unit_coeff(c, dom, z_as_variable: bool) -> bool:
    if c == 0:
        return False
    if dom.kind == "field" and not z_as_variable:
        return True
    base = dom.base
    if dom.kind == "field":
        if not base.is_integral(c):
            return False
        c = base.convert(base.numer(c))
    return base.is_unit(c)


def _free_of_z(c) -> bool:
    from .base_rings import RatFunc, UniPoly
    if isinstance(c, UniPoly):
        return c.is_constant()
    if isinstance(c, RatFunc):
        return c.den == 1 and c.num.is_constant()
    return True


def is_triangular(s: PlaneMap, z_as_variable: bool = False) -> bool:
    """``f1 = u*x + Q(y)`` and ``f2 = v*y + c`` with units u, v.

    With ``z_as_variable`` the test is membership in the triangular group of
    K[x,y,z] for maps fixing z: u, v must be nonzero constants of K, Q may
    involve z, and c may be any polynomial in z.
    """
    f1, f2, dom = s.f1, s.f2, s.dom
    if z_as_variable and not s.is_integral():
        return False
    for (i, j) in f1.terms:
        if i > 1 or (i == 1 and j > 0):
            return False
    for (i, j) in f2.terms:
        if i > 0 or j > 1:
            return False
    u, v = f1.coeff(1, 0), f2.coeff(0, 1)
    return _is_unit_coeff(u, dom, z_as_variable) and _is_unit_coeff(v, dom, z_as_variable)


def is_affine(s: PlaneMap, z_as_variable: bool = False) -> bool:
    for f in (s.f1, s.f2):
        if f.total_degree > 1:
            return False
        if z_as_variable:
            for (i, j), c in f.terms.items():
                if i + j == 1 and not _free_of_z(c):
                    return False
                if i + j == 0 and not _z_degree_le1(c):
                    return False
    t = AffineTail.from_map(s)
    det = t.a * t.d - t.b * t.c
    if z_as_variable:
        return det != 0 and _free_of_z(det)
    return det != 0


def _z_degree_le1(c) -> bool:
    from .base_rings import RatFunc, UniPoly
    if isinstance(c, RatFunc):
        return c.den == 1 and c.num.degree <= 1
    if isinstance(c, UniPoly):
        return c.degree <= 1
    return True


def is_parabolic_3d(s: PlaneMap) -> bool:
    """σ(y) free of x (σ(z) = z is implicit)."""
    return all(i == 0 for i, _ in s.f2.terms)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------


def scalar_to_str(c, dom: Domain) -> str:
    return str(BiPoly.const(c, dom))


def factor_to_json(f, dom: Domain) -> dict:
    if isinstance(f, Swap):
        return {"type": "swap"}
    if isinstance(f, Triangular):
        return {"type": "triangular", "p": scalar_to_str(f.p, dom), "Q": str(f.Q)}
    if isinstance(f, AffineTail):
        s = lambda v: scalar_to_str(v, dom)  # noqa: E731
        return {"type": "affine", "matrix": [[s(f.a), s(f.b)], [s(f.c), s(f.d)]],
                "translation": [s(f.e), s(f.f)]}
    raise TypeError(f"unknown factor {f!r}")


def word_to_json(w: Word) -> list:
    return [factor_to_json(f, w.dom) for f in w.factors]


def word_from_json(data, ring: BaseRing) -> Word:
    from .parsing import parse_scalar, parse_ypoly
    if isinstance(data, str):
        data = json.loads(data)
    dom = ring.field
    out = []
    for rec in data:
        kind = rec.get("type")
        if kind == "swap":
            out.append(Swap())
        elif kind == "triangular":
            p = dom.convert(parse_scalar(rec["p"], ring))
            out.append(Triangular(p, parse_ypoly(rec["Q"], ring).to_domain(dom)))
        elif kind == "affine":
            (a, b), (c, d) = rec["matrix"]
            e, f = rec["translation"]
            out.append(AffineTail(*(dom.convert(parse_scalar(v, ring)) for v in (a, b, c, d, e, f))))
        else:
            raise ValueError(f"unknown factor type {kind!r}")
    return Word(tuple(out), dom)


def map_to_json(s: PlaneMap) -> list:
    return [str(s.f1), str(s.f2)]
