"""Exact arithmetic for the two base PIDs: the integers and Q[z].

Ring elements are plain Python ``int`` (for Z) or :class:`UniPoly` (for Q[z]).
Fraction-field elements are :class:`fractions.Fraction` and :class:`RatFunc`.
Residues modulo a nonzero ``p`` are :class:`QuotElem` values attached to a
:class:`QuotientRing`.

Every ring, field and quotient ring is a *domain* object.  Domains carry the
coefficient tag used by :mod:`polycoord.bipoly` and know how to coerce,
render and normalize their elements.
"""

from __future__ import annotations

from fractions import Fraction
from functools import reduce
from math import lcm
from typing import Iterable, Sequence, Union

import gmpy2

Scalar = Union[int, Fraction]


class NotAUnitError(ArithmeticError):
    """Raised when an element that must be invertible is not."""


class DomainMismatchError(TypeError):
    """Raised when values from incompatible coefficient domains are mixed."""


# ---------------------------------------------------------------------------
# Q[z]
# ---------------------------------------------------------------------------


def _norm_scalar(a):
    if type(a) is int:
        return a
    if isinstance(a, Fraction):
        return a.numerator if a.denominator == 1 else a
    if isinstance(a, int):
        return int(a)
    return Fraction(a)


def _as_int_poly(a: Sequence) -> tuple:
    """``(ints, den)`` with ``a == ints / den``."""
    den = 1
    for c in a:
        if type(c) is not int:
            den = lcm(den, c.denominator)
    if den == 1:
        return a, 1
    return [int(c * den) for c in a], den


def _pack(coeffs: Sequence, w: int) -> int:
    pos = b"".join((c if c > 0 else 0).to_bytes(w, "little") for c in coeffs)
    neg = b"".join((-c if c < 0 else 0).to_bytes(w, "little") for c in coeffs)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def bigmul(a: int, b: int) -> int:
    """Product of two integers; GMP takes over once both are large."""
    if a.bit_length() < 20000 or b.bit_length() < 20000:
        return a * b
    return int(gmpy2.mpz(a) * gmpy2.mpz(b))


def _kronecker_mul(a: Sequence, b: Sequence) -> list:
    """Product of coefficient lists by packing into one big integer."""
    ia, da = _as_int_poly(a)
    ib, db = _as_int_poly(b)
    bound = max(map(abs, ia)) * max(map(abs, ib)) * min(len(ia), len(ib))
    w = (bound.bit_length() + 9) // 8  # bytes per slot, one spare bit for sign
    bits = 8 * w
    n = len(ia) + len(ib) - 1
    C = bigmul(_pack(ia, w), _pack(ib, w))
    half = 1 << (bits - 1)
    bias = half * (((1 << (n * bits)) - 1) // ((1 << bits) - 1))
    raw = (C + bias).to_bytes(n * w, "little")
    fb = int.from_bytes
    out = [fb(raw[i:i + w], "little") - half for i in range(0, n * w, w)]
    den = da * db
    if den != 1:
        out = [Fraction(c, den) for c in out]
    return out


def _trim(coeffs: Iterable[Scalar]) -> tuple:
    # integral coefficients are kept as int: int arithmetic is much cheaper
    c = [a if type(a) is int else _norm_scalar(a) for a in coeffs]
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class UniPoly:
    """A polynomial in ``z`` with rational coefficients (low degree first)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        object.__setattr__(self, "coeffs", _trim(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("UniPoly is immutable")

    @classmethod
    def z(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c: Scalar) -> "UniPoly":
        return cls((c,))

    # -- basic queries -----------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree in z; ``-1`` stands for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def constant_value(self) -> Fraction:
        if len(self.coeffs) > 1:
            raise ValueError("not a constant")
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def __call__(self, z):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def monic(self) -> "UniPoly":
        if not self.coeffs:
            return self
        lc = Fraction(self.coeffs[-1])
        return UniPoly(c / lc for c in self.coeffs)

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    # -- arithmetic --------------------------------------------------------
    @staticmethod
    def _lift(other):
        if isinstance(other, UniPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return UniPoly((other,))
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return UniPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return UniPoly()
            return UniPoly(c * other for c in self.coeffs)
        if not isinstance(other, UniPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        if len(a) > 4 and len(b) > 4:
            return UniPoly(_kronecker_mul(a, b))
        out = [0] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative exponent")
        result = UniPoly((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = o.degree
        lc = o.lc
        if len(rem) - 1 < db:
            return UniPoly(), self
        quo = [0] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = Fraction(c, lc) if type(c) is int and type(lc) is int else c / lc
            quo[k - db] = q
            for i, bc in enumerate(o.coeffs):
                rem[k - db + i] -= q * bc
        return UniPoly(quo), UniPoly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return UniPoly(Fraction(c) / other for c in self.coeffs)
        if isinstance(other, UniPoly):
            if other.is_zero():
                raise ZeroDivisionError("division by zero")
            if other.degree == 0:
                return self / other.coeffs[0]
            raise NotAUnitError(
                f"{other} is not a unit of Q[z]; promote to RatFunc explicitly")
        return NotImplemented

    def exquo(self, other) -> "UniPoly":
        """Exact quotient in Q[z]; raises if ``other`` does not divide ``self``."""
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    # -- comparison ----------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return not self.coeffs
            return len(self.coeffs) == 1 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if len(self.coeffs) <= 1:
            return hash(self.coeffs[0] if self.coeffs else 0)
        return hash(("UniPoly",) + self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"UniPoly({self})"

    def __str__(self):
        return render_unipoly(self)


def _fmt_rational(c: Fraction) -> str:
    c = Fraction(c)
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def render_unipoly(p: UniPoly, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for i in range(p.degree, -1, -1):
        c = p.coeffs[i]
        if c == 0:
            continue
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if i == 0:
            body = _fmt_rational(a)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if a == 1 else f"{_fmt_rational(a)}*{mono}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd in Q[z] (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def poly_xgcd(a: UniPoly, b: UniPoly):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` monic (or zero)."""
    r0, r1 = a, b
    s0, s1 = UniPoly((1,)), UniPoly()
    t0, t1 = UniPoly(), UniPoly((1,))
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc = r0.lc
    return r0 / lc, s0 / lc, t0 / lc


class RatFunc:
    """An element of Q(z) kept as ``num/den`` with ``den`` monic and coprime to ``num``."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _normalized: bool = False):
        if isinstance(num, RatFunc):
            if den is None:
                object.__setattr__(self, "num", num.num)
                object.__setattr__(self, "den", num.den)
                return
            other = num / RatFunc(den)
            object.__setattr__(self, "num", other.num)
            object.__setattr__(self, "den", other.den)
            return
        n = UniPoly._lift(num)
        if n is None:
            raise TypeError(f"cannot build RatFunc from {num!r}")
        d = UniPoly((1,)) if den is None else UniPoly._lift(den)
        if d is None:
            raise TypeError(f"cannot build RatFunc from {den!r}")
        if d.is_zero():
            raise ZeroDivisionError("zero denominator")
        if not _normalized and d.degree > 0:
            g = poly_gcd(n, d)
            if g.degree > 0:
                n = n.exquo(g)
                d = d.exquo(g)
        if d.lc != 1:
            lc = d.lc
            n = n / lc
            d = d / lc
        if n.is_zero():
            d = UniPoly((1,))
        object.__setattr__(self, "num", n)
        object.__setattr__(self, "den", d)

    def __setattr__(self, name, value):
        raise AttributeError("RatFunc is immutable")

    @staticmethod
    def _lift(other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, UniPoly)):
            return RatFunc(other)
        return None

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == 1 and o.den == 1:
            return RatFunc(self.num + o.num, _normalized=True)
        if self.den == o.den:
            return RatFunc(self.num + o.num, self.den)
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _normalized=True)

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if self.den == 1 and o.den == 1:
            return RatFunc(self.num * o.num, _normalized=True)
        if o.den == 1 and o.num.is_constant() or self.den == 1 and self.num.is_constant():
            if self.num.is_zero() or o.num.is_zero():
                return RatFunc(0)
            return RatFunc(self.num * o.num, self.den * o.den, _normalized=True)
        # cross-cancel so that only small gcds are needed
        g1, g2 = poly_gcd(self.num, o.den), poly_gcd(o.num, self.den)
        a, d = (self.num, o.den) if g1.degree <= 0 else (self.num.exquo(g1), o.den.exquo(g1))
        c, b = (o.num, self.den) if g2.degree <= 0 else (o.num.exquo(g2), self.den.exquo(g2))
        return RatFunc(a * c, b * d, _normalized=True)

    __rmul__ = __mul__

    def inverse(self) -> "RatFunc":
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num, _normalized=True)

    def __truediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RatFunc(self.num ** n, self.den ** n, _normalized=True)

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, UniPoly)):
            return self.den == 1 and self.num == other
        return NotImplemented

    def __hash__(self):
        if self.den == 1:
            return hash(self.num)
        return hash(("RatFunc", self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        num, sign = self.num, ""
        nz = [a for a in num.coeffs if a != 0]
        if len(nz) == 1 and nz[0] < 0:
            num, sign = -num, "-"
        ns = str(num) if len(nz) == 1 else f"({num})"
        ds = str(self.den) if len([a for a in self.den.coeffs if a != 0]) == 1 else f"({self.den})"
        return f"{sign}{ns}/{ds}"


# ---------------------------------------------------------------------------
# Domains
# ---------------------------------------------------------------------------


class Domain:
    """Common interface of coefficient domains."""

    kind = "ring"  # one of "ring", "field", "quotient"
    name = "?"

    @property
    def base(self) -> "BaseRing":
        raise NotImplementedError

    def convert(self, c):
        raise NotImplementedError

    @property
    def zero(self):
        return self.convert(0)

    @property
    def one(self):
        return self.convert(1)

    def render(self, c) -> str:
        return str(c)

    def __repr__(self):
        return self.name


class BaseRing(Domain):
    """A base PID R (either Z or Q[z])."""

    kind = "ring"

    @property
    def base(self):
        return self

    @property
    def field(self) -> "FractionField":
        return self._field

    # Subclasses implement: convert, is_unit, normalize_unit, divmod_, mod,
    # gcd_bezout, nil_exponent, numer, denom, unit_inverse.

    def exquo(self, a, b):
        q, r = self.divmod_(a, b)
        if r != 0:
            raise ArithmeticError(f"{b} does not divide {a} in {self.name}")
        return q

    def divides(self, b, a) -> bool:
        if b == 0:
            return a == 0
        return self.divmod_(a, b)[1] == 0

    def gcd(self, a, b):
        if a == 0 and b == 0:
            return self.zero
        return self.gcd_bezout(a, b)[0]

    def gcd_many(self, items):
        return reduce(self.gcd, items, self.zero)

    def lcm(self, a, b):
        if a == 0 or b == 0:
            return self.zero
        g = self.gcd(a, b)
        return self.normalize_unit(self.exquo(a * b, g))[1]

    def lcm_many(self, items):
        return reduce(self.lcm, items, self.one)

    def is_integral(self, c) -> bool:
        return self.denom(c) == 1

    def to_ring(self, c):
        if not self.is_integral(c):
            raise ArithmeticError(f"{c} is not in {self.name}")
        return self.convert(self.numer(c))

    def to_field(self, c):
        return self.field.convert(c)

    def quotient(self, p) -> "QuotientRing":
        return QuotientRing(self, p)


class IntegerRing(BaseRing):
    name = "Z"
    tag = "int"

    def __init__(self):
        self._field = RationalField(self)

    def convert(self, c):
        if isinstance(c, bool):
            return int(c)
        if isinstance(c, int):
            return c
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise ArithmeticError(f"{c} is not an integer")
            return c.numerator
        if isinstance(c, UniPoly) and c.is_constant():
            return self.convert(c.constant_value())
        if isinstance(c, RatFunc) and c.den == 1:
            return self.convert(c.num)
        raise DomainMismatchError(f"cannot convert {c!r} to an integer")

    def is_unit(self, a) -> bool:
        return a in (1, -1)

    def unit_inverse(self, u):
        if not self.is_unit(u):
            raise NotAUnitError(f"{u} is not a unit of Z")
        return u

    def normalize_unit(self, r):
        if r == 0:
            raise ValueError("normalize_unit of zero")
        return (1, r) if r > 0 else (-1, -r)

    def divmod_(self, a, b):
        if b == 0:
            raise ZeroDivisionError("division by zero")
        q, r = divmod(a, abs(b))
        return (q if b > 0 else -q), r

    def mod(self, a, p):
        if p == 0:
            raise ZeroDivisionError("zero modulus")
        return a % abs(p)

    def gcd_bezout(self, a, b):
        if a == 0 and b == 0:
            raise ValueError("gcd_bezout of (0, 0)")
        r0, r1, s0, s1, t0, t1 = a, b, 1, 0, 0, 1
        while r1:
            q = r0 // r1
            r0, r1 = r1, r0 - q * r1
            s0, s1 = s1, s0 - q * s1
            t0, t1 = t1, t0 - q * t1
        if r0 < 0:
            r0, s0, t0 = -r0, -s0, -t0
        return r0, s0, t0

    def nil_exponent(self, p) -> int:
        return max(1, abs(p).bit_length())

    def numer(self, c):
        return Fraction(c).numerator

    def denom(self, c):
        return Fraction(c).denominator

    def render(self, c) -> str:
        return str(c)


class RationalPolyRing(BaseRing):
    name = "Q[z]"
    tag = "z"

    def __init__(self):
        self._field = RationalFunctionField(self)

    def convert(self, c):
        if isinstance(c, UniPoly):
            return c
        if isinstance(c, (int, Fraction)):
            return UniPoly((c,))
        if isinstance(c, RatFunc):
            if c.den != 1:
                raise ArithmeticError(f"{c} is not a polynomial in z")
            return c.num
        raise DomainMismatchError(f"cannot convert {c!r} to Q[z]")

    def is_unit(self, a) -> bool:
        a = self.convert(a)
        return a.degree == 0

    def unit_inverse(self, u):
        u = self.convert(u)
        if u.degree != 0:
            raise NotAUnitError(f"{u} is not a unit of Q[z]")
        return UniPoly((1 / Fraction(u.coeffs[0]),))

    def normalize_unit(self, r):
        r = self.convert(r)
        if r.is_zero():
            raise ValueError("normalize_unit of zero")
        return UniPoly((r.lc,)), r.monic()

    def divmod_(self, a, b):
        return divmod(self.convert(a), self.convert(b))

    def mod(self, a, p):
        p = self.convert(p)
        if p.is_zero():
            raise ZeroDivisionError("zero modulus")
        return self.convert(a) % p

    def gcd_bezout(self, a, b):
        a, b = self.convert(a), self.convert(b)
        if a.is_zero() and b.is_zero():
            raise ValueError("gcd_bezout of (0, 0)")
        return poly_xgcd(a, b)

    def nil_exponent(self, p) -> int:
        return max(1, self.convert(p).degree)

    def numer(self, c):
        return RatFunc(c).num

    def denom(self, c):
        return RatFunc(c).den

    def render(self, c) -> str:
        s = str(c)
        return s


class FractionField(Domain):
    kind = "field"

    def __init__(self, ring: BaseRing):
        self._ring = ring

    @property
    def base(self):
        return self._ring

    @property
    def name(self):
        return f"qt({self._ring.name})"


class RationalField(FractionField):
    def convert(self, c):
        if isinstance(c, (int, Fraction)):
            return Fraction(c)
        return Fraction(self._ring.convert(c))

    def inverse(self, c):
        return 1 / Fraction(c)


class RationalFunctionField(FractionField):
    def convert(self, c):
        if isinstance(c, RatFunc):
            return c
        return RatFunc(c)

    def inverse(self, c):
        return RatFunc(c).inverse()


ZZ = IntegerRing()
QQ = ZZ.field
QZ = RationalPolyRing()
QZF = QZ.field
Z = UniPoly.z()


# ---------------------------------------------------------------------------
# Quotient rings R/pR
# ---------------------------------------------------------------------------


class QuotientRing(Domain):
    kind = "quotient"

    def __init__(self, ring: BaseRing, p):
        p = ring.convert(p)
        if p == 0:
            raise ZeroDivisionError("zero modulus")
        self.ring = ring
        self.modulus = ring.normalize_unit(p)[1]

    @property
    def base(self):
        return self.ring

    @property
    def name(self):
        return f"{self.ring.name}/({self.modulus})"

    def __eq__(self, other):
        return (isinstance(other, QuotientRing) and other.ring is self.ring
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash((self.ring.name, self.modulus))

    def reduce(self, a):
        return self.ring.mod(self.ring.convert(a), self.modulus)

    def convert(self, c):
        if isinstance(c, QuotElem):
            if c.qr != self:
                raise DomainMismatchError(f"residue of {c.qr.name} used in {self.name}")
            return c
        if isinstance(c, (Fraction, RatFunc)):
            # a fraction whose denominator is a unit mod p has a residue
            num = self.reduce(self.ring.numer(c))
            den = QuotElem(self.reduce(self.ring.denom(c)), self)
            return QuotElem(num, self) * den.inverse()
        return QuotElem(self.reduce(c), self)

    def render(self, c) -> str:
        return str(c.rep)


class QuotElem:
    """Residue class of a ring element modulo ``qr.modulus``."""

    __slots__ = ("rep", "qr")

    def __init__(self, rep, qr: QuotientRing):
        object.__setattr__(self, "rep", rep)
        object.__setattr__(self, "qr", qr)

    def __setattr__(self, name, value):
        raise AttributeError("QuotElem is immutable")

    def _other(self, other):
        if isinstance(other, QuotElem):
            if other.qr != self.qr:
                raise DomainMismatchError("residues modulo different ideals")
            return other
        if isinstance(other, (int, Fraction, UniPoly)):
            return self.qr.convert(other)
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuotElem(self.qr.reduce(self.rep + o.rep), self.qr)

    __radd__ = __add__

    def __neg__(self):
        return QuotElem(self.qr.reduce(-self.rep), self.qr)

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return QuotElem(self.qr.reduce(self.rep * o.rep), self.qr)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = self.qr.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def is_unit(self) -> bool:
        return is_unit_mod(self.rep, self.qr.modulus, self.qr.ring)

    def is_nilpotent(self) -> bool:
        return is_nilpotent_mod(self.rep, self.qr.modulus, self.qr.ring)

    def inverse(self) -> "QuotElem":
        ring = self.qr.ring
        g, s, _ = ring.gcd_bezout(self.rep, self.qr.modulus)
        if not ring.is_unit(g):
            raise NotAUnitError(f"{self.rep} is not invertible modulo {self.qr.modulus}")
        return QuotElem(self.qr.reduce(s * ring.unit_inverse(g)), self.qr)

    def __truediv__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __eq__(self, other):
        if isinstance(other, QuotElem):
            return self.qr == other.qr and self.rep == other.rep
        if isinstance(other, (int, Fraction, UniPoly)):
            try:
                return self.rep == self.qr.convert(other).rep
            except (ArithmeticError, DomainMismatchError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash(self.rep)

    def __bool__(self):
        return self.rep != 0

    def __repr__(self):
        return f"QuotElem({self.rep} mod {self.qr.modulus})"

    def __str__(self):
        return str(self.rep)


# ---------------------------------------------------------------------------
# Module-level operations
# ---------------------------------------------------------------------------


def ring_of(*values) -> BaseRing:
    """Guess the base ring from element types (Q[z] wins over Z)."""
    for v in values:
        if isinstance(v, (UniPoly, RatFunc)):
            return QZ
        if isinstance(v, QuotElem):
            return v.qr.ring
    return ZZ


def normalize_unit(r, ring: BaseRing | None = None):
    """Split ``r = u * w`` with ``u`` a unit and ``w`` in the canonical set U(R)."""
    ring = ring or ring_of(r)
    return ring.normalize_unit(ring.convert(r))


def gcd_bezout(a, b, ring: BaseRing | None = None):
    """Return ``(g, s, t)`` with ``g = s*a + t*b`` and ``g`` in U(R) or zero."""
    ring = ring or ring_of(a, b)
    return ring.gcd_bezout(ring.convert(a), ring.convert(b))


def is_nilpotent_mod(a, p, ring: BaseRing | None = None) -> bool:
    """Bounded power test: ``a`` is nilpotent mod ``p`` iff ``a**e == 0 mod p``.

    ``e`` is the bit-length of ``|p|`` over Z and ``deg p`` over Q[z]; either
    bounds every prime-power exponent of ``p``.
    """
    ring = ring or ring_of(a, p)
    p = ring.convert(p)
    if p == 0:
        raise ZeroDivisionError("zero modulus")
    e = ring.nil_exponent(p)
    r = ring.mod(ring.convert(a), p)
    acc = ring.one
    for _ in range(e):
        acc = ring.mod(acc * r, p)
        if acc == 0:
            return True
    return False


def is_unit_mod(a, p, ring: BaseRing | None = None) -> bool:
    ring = ring or ring_of(a, p)
    p = ring.convert(p)
    if p == 0:
        raise ZeroDivisionError("zero modulus")
    a = ring.mod(ring.convert(a), p)
    if ring.is_unit(p):
        return True
    if a == 0:
        return False
    return ring.is_unit(ring.gcd(a, p))


def inverse_mod(a, p, ring: BaseRing | None = None):
    """Canonical representative of ``a^-1`` modulo ``p``."""
    ring = ring or ring_of(a, p)
    qr = QuotientRing(ring, p)
    return qr.convert(a).inverse().rep


def coerce_all(values: Sequence, ring: BaseRing) -> list:
    return [ring.convert(v) for v in values]
