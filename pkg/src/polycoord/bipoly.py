"""Sparse polynomials in x and y.

A :class:`BiPoly` stores ``{(i, j): coefficient}`` for the monomial
``x**i * y**j`` together with the coefficient domain (R, qt(R) or R/pR).
Univariate polynomials in y (the Q's, S, T, U, W of the constructions) are
ordinary BiPoly values with no x.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Mapping

from .base_rings import (
    DomainMismatchError,
    Domain,
    QuotElem,
    QuotientRing,
    RatFunc,
    UniPoly,
    ZZ,
    QZ,
    bigmul,
    render_unipoly,
)

NEG_INF = float("-inf")
"""Degree of the zero polynomial."""


def _join(a: Domain, b: Domain) -> Domain:
    if a is b or a == b:
        return a
    if a.kind == "quotient" or b.kind == "quotient":
        if a.kind == "quotient" and b.kind == "quotient":
            raise DomainMismatchError(f"cannot mix {a.name} and {b.name}")
        q, other = (a, b) if a.kind == "quotient" else (b, a)
        if other.kind != "ring" or other.base is not q.base:
            raise DomainMismatchError(f"cannot mix {a.name} and {b.name}")
        return q
    if a.base is not b.base:
        raise DomainMismatchError(f"cannot mix {a.name} and {b.name}")
    return a.base.field


def _scalar_domain(c, dom: Domain) -> Domain:
    """Domain needed to hold scalar ``c`` alongside values of ``dom``."""
    if isinstance(c, QuotElem):
        return _join(dom, c.qr)
    if dom.kind == "ring" and isinstance(c, (Fraction, RatFunc)):
        if not dom.is_integral(c):
            return dom.field
    return dom


class BiPoly:
    __slots__ = ("terms", "dom", "_hash")

    def __init__(self, terms: Mapping | Iterable = (), dom: Domain = ZZ,
                 _clean: bool = False):
        if _clean:
            t = dict(terms)
        else:
            items = terms.items() if isinstance(terms, Mapping) else terms
            t = {}
            conv = dom.convert
            for k, c in items:
                c = conv(c)
                if c == 0:
                    continue
                k = (int(k[0]), int(k[1]))
                if k[0] < 0 or k[1] < 0:
                    raise ValueError(f"negative exponent {k}")
                if k in t:
                    s = t[k] + c
                    if s == 0:
                        del t[k]
                    else:
                        t[k] = s
                else:
                    t[k] = c
        object.__setattr__(self, "terms", t)
        object.__setattr__(self, "dom", dom)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("BiPoly is immutable")

    # -- constructors ------------------------------------------------------
    @classmethod
    def zero(cls, dom: Domain = ZZ) -> "BiPoly":
        return cls({}, dom, _clean=True)

    @classmethod
    def const(cls, c, dom: Domain = ZZ) -> "BiPoly":
        return cls({(0, 0): c}, dom)

    @classmethod
    def x(cls, dom: Domain = ZZ) -> "BiPoly":
        return cls({(1, 0): 1}, dom)

    @classmethod
    def y(cls, dom: Domain = ZZ) -> "BiPoly":
        return cls({(0, 1): 1}, dom)

    @classmethod
    def from_y_coeffs(cls, coeffs: Iterable, dom: Domain = ZZ) -> "BiPoly":
        """``sum coeffs[j] * y**j``."""
        return cls({(0, j): c for j, c in enumerate(coeffs)}, dom)

    @classmethod
    def from_x_coeffs(cls, coeffs: Iterable, dom: Domain = ZZ) -> "BiPoly":
        return cls({(i, 0): c for i, c in enumerate(coeffs)}, dom)

    # -- queries -----------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, i: int, j: int):
        return self.terms.get((i, j), self.dom.zero)

    @property
    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(i + j for i, j in self.terms)

    @property
    def deg_x(self):
        if not self.terms:
            return NEG_INF
        return max(i for i, _ in self.terms)

    @property
    def deg_y(self):
        if not self.terms:
            return NEG_INF
        return max(j for _, j in self.terms)

    def is_constant(self) -> bool:
        return all(k == (0, 0) for k in self.terms)

    def constant_term(self):
        return self.terms.get((0, 0), self.dom.zero)

    def is_univariate_y(self) -> bool:
        return all(i == 0 for i, _ in self.terms)

    def y_coeffs(self) -> list:
        """Coefficient list in y; requires no x."""
        if not self.is_univariate_y():
            raise ValueError(f"{self} involves x")
        if not self.terms:
            return []
        out = [self.dom.zero] * (self.deg_y + 1)
        for (_, j), c in self.terms.items():
            out[j] = c
        return out

    def x_slices(self) -> dict:
        """``{i: poly in y}`` with ``self = sum x**i * slice_i``."""
        out: dict = {}
        for (i, j), c in self.terms.items():
            out.setdefault(i, {})[(0, j)] = c
        return {i: BiPoly(t, self.dom, _clean=True) for i, t in out.items()}

    def y_slices(self) -> dict:
        """``{j: poly in x}`` with ``self = sum y**j * slice_j``."""
        out: dict = {}
        for (i, j), c in self.terms.items():
            out.setdefault(j, {})[(i, 0)] = c
        return {j: BiPoly(t, self.dom, _clean=True) for j, t in out.items()}

    def homogeneous_part(self, d: int) -> "BiPoly":
        return BiPoly({k: c for k, c in self.terms.items() if k[0] + k[1] == d},
                      self.dom, _clean=True)

    def leading_form(self) -> "BiPoly":
        if not self.terms:
            return self
        return self.homogeneous_part(self.total_degree)

    # -- domain handling -----------------------------------------------------
    def to_domain(self, dom: Domain) -> "BiPoly":
        if dom is self.dom:
            return self
        return BiPoly(self.terms, dom)

    def to_field(self) -> "BiPoly":
        if self.dom.kind == "quotient":
            raise DomainMismatchError("quotient coefficients have no fraction field here")
        return self.to_domain(self.dom.base.field)

    def to_ring(self) -> "BiPoly":
        """Same polynomial over R; raises ArithmeticError if not integral."""
        if self.dom.kind == "quotient":
            return self.lift()
        return self.to_domain(self.dom.base)

    def is_integral(self) -> bool:
        if self.dom.kind == "ring":
            return True
        if self.dom.kind == "quotient":
            return False
        base = self.dom.base
        return all(base.is_integral(c) for c in self.terms.values())

    def lift(self) -> "BiPoly":
        """Canonical representatives of a polynomial over R/pR, as a polynomial over R."""
        if self.dom.kind != "quotient":
            raise DomainMismatchError("lift needs quotient coefficients")
        return BiPoly({k: c.rep for k, c in self.terms.items()}, self.dom.base, _clean=True)

    def map_coeffs(self, f, dom: Domain | None = None) -> "BiPoly":
        return BiPoly({k: f(c) for k, c in self.terms.items()}, dom or self.dom)

    # -- arithmetic ----------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, BiPoly):
            return other
        if isinstance(other, (int, Fraction, UniPoly, RatFunc, QuotElem)):
            dom = _scalar_domain(other, self.dom)
            return BiPoly({(0, 0): other}, dom)
        return None

    def _align(self, other: "BiPoly"):
        dom = _join(self.dom, other.dom)
        return self.to_domain(dom), other.to_domain(dom), dom

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, dom = self._align(o)
        if len(a.terms) < len(b.terms):
            a, b = b, a
        t = dict(a.terms)
        for k, c in b.terms.items():
            if k in t:
                s = t[k] + c
                if s == 0:
                    del t[k]
                else:
                    t[k] = s
            else:
                t[k] = c
        return BiPoly(t, dom, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return BiPoly({k: -c for k, c in self.terms.items()}, self.dom, _clean=True)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "BiPoly":
        dom = _scalar_domain(c, self.dom)
        c = dom.convert(c)
        if c == 0:
            return BiPoly.zero(dom)
        src = self.to_domain(dom)
        if dom.kind == "quotient":
            # zero divisors: products of nonzero residues can vanish
            return BiPoly({k: v * c for k, v in src.terms.items()}, dom)
        return BiPoly({k: v * c for k, v in src.terms.items()}, dom, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, UniPoly, RatFunc, QuotElem)):
            return self.scale(other)
        if not isinstance(other, BiPoly):
            return NotImplemented
        a, b, dom = self._align(other)
        if not a.terms or not b.terms:
            return BiPoly.zero(dom)
        if len(b.terms) == 1:
            ((bk, bc),) = b.terms.items()
            return BiPoly({(i + bk[0], j + bk[1]): c * bc for (i, j), c in a.terms.items()},
                          dom, _clean=(dom.kind != "quotient"))
        if dom.kind != "quotient" and len(a.terms) * len(b.terms) > 24:
            fast = _kronecker_mul(a.terms, b.terms, dom)
            if fast is not None:
                return fast
        t: dict = {}
        for (i1, j1), c1 in a.terms.items():
            for (i2, j2), c2 in b.terms.items():
                k = (i1 + i2, j1 + j2)
                v = c1 * c2
                if k in t:
                    t[k] = t[k] + v
                else:
                    t[k] = v
        return BiPoly({k: v for k, v in t.items() if v != 0}, dom, _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a nonnegative integer")
        result = BiPoly.const(1, self.dom)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c):
        """Division by a nonzero scalar of qt(R) (or a unit of R/pR)."""
        if isinstance(c, BiPoly):
            if not c.is_constant():
                raise ArithmeticError("division by a non-constant polynomial")
            c = c.constant_term()
        if isinstance(c, QuotElem) or self.dom.kind == "quotient":
            inv = self.dom.convert(c).inverse()
            return self.scale(inv)
        if c == 0:
            raise ZeroDivisionError("division by zero")
        base = self.dom.base
        inv = base.field.convert(c)
        inv = base.field.inverse(inv)
        if base.is_integral(inv):
            inv = base.convert(base.numer(inv))
        return self.scale(inv)

    def exquo_scalar(self, c) -> "BiPoly":
        """Exact division by ``c`` staying in the current ring; raises if not exact."""
        if self.dom.kind != "ring":
            return self / c
        base = self.dom.base
        c = base.convert(c)
        if c == 0:
            raise ZeroDivisionError("division by zero")
        if base.is_unit(c):
            return self.scale(base.unit_inverse(c))
        out = {}
        for k, v in self.terms.items():
            q, r = base.divmod_(v, c)
            if r != 0:
                raise ArithmeticError(f"{v} is not divisible by {c}")
            out[k] = q
        return BiPoly(out, self.dom, _clean=True)

    # -- calculus and substitution ------------------------------------------
    def partial(self, var: str) -> "BiPoly":
        if var == "x":
            t = {(i - 1, j): c * i for (i, j), c in self.terms.items() if i}
        elif var == "y":
            t = {(i, j - 1): c * j for (i, j), c in self.terms.items() if j}
        else:
            raise ValueError(f"unknown variable {var!r}")
        return BiPoly({k: v for k, v in t.items() if v != 0}, self.dom, _clean=True)

    def substitute(self, gx: "BiPoly", gy: "BiPoly") -> "BiPoly":
        """``self(gx, gy)``, expanded."""
        gx = self._coerce(gx) if not isinstance(gx, BiPoly) else gx
        gy = self._coerce(gy) if not isinstance(gy, BiPoly) else gy
        dom = _join(_join(self.dom, gx.dom), gy.dom)
        if not self.terms:
            return BiPoly.zero(dom)
        gx, gy = gx.to_domain(dom), gy.to_domain(dom)
        src = self.to_domain(dom)
        slices = src.x_slices()
        # powers of gy are shared across the x-slices
        ymax = src.deg_y
        ypow = [BiPoly.const(1, dom)]
        for _ in range(ymax):
            ypow.append(ypow[-1] * gy)

        def eval_slice(s: BiPoly) -> BiPoly:
            acc = BiPoly.zero(dom)
            for (_, j), c in s.terms.items():
                acc = acc + ypow[j].scale(c)
            return acc

        # Horner in x
        result = BiPoly.zero(dom)
        for i in range(src.deg_x, -1, -1):
            result = result * gx
            if i in slices:
                result = result + eval_slice(slices[i])
        return result

    def __call__(self, gx, gy):
        return self.substitute(gx, gy)

    def of(self, g: "BiPoly") -> "BiPoly":
        """For a polynomial in y alone, ``self(g)``."""
        if not self.is_univariate_y():
            raise ValueError("of() needs a polynomial in y")
        return self.substitute(BiPoly.zero(self.dom), g)

    def evaluate(self, x, y):
        """Scalar value at a point of the coefficient field."""
        acc = 0
        for (i, j), c in self.terms.items():
            acc = acc + c * (x ** i) * (y ** j)
        return acc

    def swap_xy(self) -> "BiPoly":
        return BiPoly({(j, i): c for (i, j), c in self.terms.items()}, self.dom, _clean=True)

    # -- modular and content ---------------------------------------------
    def reduce_mod(self, p) -> "BiPoly":
        if self.dom.kind == "quotient":
            raise DomainMismatchError("already reduced")
        base = self.dom.base
        qr = QuotientRing(base, p)
        src = self if self.dom.kind == "ring" else self.to_ring()
        return BiPoly(src.terms, qr)

    def is_zero_mod(self, p) -> bool:
        return self.reduce_mod(p).is_zero()

    def clear_denominators(self):
        """``(m, G)`` with ``m`` in U(R) minimal and ``G = m*self`` over R."""
        base = self.dom.base
        m = base.lcm_many([base.denom(c) for c in self.terms.values()])
        m = base.convert(m)
        g = self.to_field().scale(m).to_ring()
        return m, g

    def content(self):
        """Content in qt(R): gcd of numerators over lcm of denominators, normalized."""
        base = self.dom.base
        if not self.terms:
            return base.zero
        vals = list(self.terms.values())
        num = base.gcd_many([base.convert(base.numer(c)) for c in vals])
        den = base.lcm_many([base.convert(base.denom(c)) for c in vals])
        out = base.field.convert(num) / base.field.convert(den)
        if base.is_integral(out):
            return base.convert(base.numer(out))
        return out

    # -- comparison and rendering ----------------------------------------
    def __eq__(self, other):
        if isinstance(other, BiPoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction, UniPoly, RatFunc, QuotElem)):
            if other == 0:
                return not self.terms
            return len(self.terms) == 1 and self.terms.get((0, 0)) == other
        return NotImplemented

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash(frozenset(self.terms.items()))
            object.__setattr__(self, "_hash", h)
        return h

    def sorted_terms(self):
        """Terms in graded-lex descending order (x before y)."""
        return sorted(self.terms.items(), key=lambda kc: (-(kc[0][0] + kc[0][1]), -kc[0][0]))

    def __str__(self):
        return render(self)

    def __repr__(self):
        return f"BiPoly({render(self)!s}, {self.dom.name})"


def _int_slots(terms: dict):
    """``({(i, j): [int z-coeffs]}, den)`` or None when denominators involve z."""
    out = {}
    den = 1
    mixed = False
    for k, c in terms.items():
        if isinstance(c, RatFunc):
            if c.den != 1:
                return None
            c = c.num
        if isinstance(c, UniPoly):
            co = c.coeffs
        else:
            co = (c,)
        for a in co:
            if type(a) is not int:
                den = lcm(den, a.denominator)
                mixed = True
        out[k] = co
    if mixed:
        out = {k: [int(a * den) for a in co] for k, co in out.items()}
    return out, den


def _kronecker_mul(ta: dict, tb: dict, dom: Domain):
    """Product of two term maps by packing x, y and z exponents into one integer."""
    pa = _int_slots(ta)
    pb = _int_slots(tb)
    if pa is None or pb is None:
        return None
    (sa, da), (sb, db) = pa, pb
    dxa = max(i for i, _ in sa)
    dya = max(j for _, j in sa)
    dza = max(len(co) for co in sa.values())
    dxb = max(i for i, _ in sb)
    dyb = max(j for _, j in sb)
    dzb = max(len(co) for co in sb.values())
    DY = dya + dyb + 1
    DZ = dza + dzb - 1
    ma = max(abs(a) for co in sa.values() for a in co)
    mb = max(abs(a) for co in sb.values() for a in co)
    count = min(sum(len(co) for co in sa.values()), sum(len(co) for co in sb.values()))
    w = ((ma * mb * count).bit_length() + 9) // 8
    bits = 8 * w

    def pack(slots, dx, dy):
        size = ((dx * DY + dy) * DZ + DZ) * w
        pos, neg = bytearray(size), bytearray(size)
        for (i, j), co in slots.items():
            base = (i * DY + j) * DZ
            for k, a in enumerate(co):
                if a:
                    o = (base + k) * w
                    if a > 0:
                        pos[o:o + w] = a.to_bytes(w, "little")
                    else:
                        neg[o:o + w] = (-a).to_bytes(w, "little")
        return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")

    C = bigmul(pack(sa, dxa, dya), pack(sb, dxb, dyb))
    nslots = ((dxa + dxb) * DY + (dya + dyb)) * DZ + DZ
    half = 1 << (bits - 1)
    bias = half * (((1 << (nslots * bits)) - 1) // ((1 << bits) - 1))
    raw = (C + bias).to_bytes(nslots * w, "little")
    zero_block = half.to_bytes(w, "little") * DZ
    fb = int.from_bytes
    den = da * db
    is_poly = dom.base is QZ
    out = {}
    for i in range(dxa + dxb + 1):
        for j in range(DY):
            base = (i * DY + j) * DZ * w
            chunk = raw[base:base + DZ * w]
            if chunk == zero_block:
                continue
            co = [fb(chunk[o:o + w], "little") - half for o in range(0, DZ * w, w)]
            if den != 1:
                co = [Fraction(a, den) for a in co]
            if is_poly:
                c = UniPoly(co)
                if c.is_zero():
                    continue
            else:
                c = co[0]
                if c == 0:
                    continue
            out[(i, j)] = c
    if dom.kind == "field":
        conv = dom.convert
        out = {k: conv(c) for k, c in out.items()}
    return BiPoly(out, dom, _clean=True)


def _coeff_text(c):
    """Split a coefficient into (sign, body, is_one, is_compound)."""
    if isinstance(c, QuotElem):
        c = c.rep
    if isinstance(c, RatFunc):
        if c.den == 1:
            c = c.num
        else:
            num, sign = c.num, "+"
            nz = [a for a in num.coeffs if a != 0]
            if len(nz) == 1 and nz[0] < 0:
                num, sign = -num, "-"
            ns = str(num) if len(nz) == 1 else f"({num})"
            dn = [a for a in c.den.coeffs if a != 0]
            ds = str(c.den) if len(dn) == 1 else f"({c.den})"
            return sign, f"{ns}/{ds}", False, True
    if isinstance(c, UniPoly):
        if c.is_constant():
            c = c.constant_value()
        else:
            nz = [a for a in c.coeffs if a != 0]
            if len(nz) == 1:
                sign = "-" if nz[0] < 0 else "+"
                body = render_unipoly(-c if sign == "-" else c)
                return sign, body, False, False
            return "+", f"({render_unipoly(c)})", False, True
    c = Fraction(c)
    sign = "-" if c < 0 else "+"
    a = abs(c)
    body = str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"
    return sign, body, a == 1, False


def _mono(i: int, j: int) -> str:
    parts = []
    if i:
        parts.append("x" if i == 1 else f"x^{i}")
    if j:
        parts.append("y" if j == 1 else f"y^{j}")
    return "*".join(parts)


def render(F: BiPoly) -> str:
    """Canonical text, graded-lex descending with explicit ``*``."""
    if not F.terms:
        return "0"
    out = []
    for idx, ((i, j), c) in enumerate(F.sorted_terms()):
        sign, body, is_one, _ = _coeff_text(c)
        mono = _mono(i, j)
        if mono:
            text = mono if is_one else f"{body}*{mono}"
        else:
            text = body
        if idx == 0:
            out.append(("-" if sign == "-" else "") + text)
        else:
            out.append(f" {sign} {text}")
    return "".join(out)


# -- module-level API -------------------------------------------------------


def substitute(F: BiPoly, gx: BiPoly, gy: BiPoly) -> BiPoly:
    return F.substitute(gx, gy)


def partial(F: BiPoly, var: str) -> BiPoly:
    return F.partial(var)


def reduce_mod(F: BiPoly, p) -> BiPoly:
    return F.reduce_mod(p)


def clear_denominators(F: BiPoly):
    return F.clear_denominators()


def is_integral(F: BiPoly) -> bool:
    return F.is_integral()


def ypoly(coeffs: Iterable, dom: Domain = ZZ) -> BiPoly:
    """Polynomial in y from a low-degree-first coefficient list."""
    return BiPoly.from_y_coeffs(coeffs, dom)


def X(dom: Domain = ZZ) -> BiPoly:
    return BiPoly.x(dom)


def Y(dom: Domain = ZZ) -> BiPoly:
    return BiPoly.y(dom)
