"""Text grammar for polynomials in x, y (and z when R = Q[z]).

    poly   := term (('+' | '-') term)*
    term   := ['-'] factor (('*' | '/' | <juxtaposition>) factor)*
    factor := base ('^' nat)?
    base   := nat | 'x' | 'y' | 'z' | '(' poly ')'

Division is only allowed by constants (elements of qt(R)); this is what lets
the canonical rendering of fraction-field coefficients parse back.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .base_rings import QZ, ZZ, BaseRing, UniPoly
from .bipoly import BiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([xyz])|(\*\*|[-+*/^()]))")


class ParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


@dataclass(frozen=True)
class _Tok:
    kind: str  # "num", "var", "op", "end"
    text: str
    pos: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            toks.append(_Tok("num", m.group(1), start))
        elif m.group(2):
            toks.append(_Tok("var", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            toks.append(_Tok("op", op, start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, ring: BaseRing):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring
        self.field = ring.field

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, op: str):
        t = self.take()
        if t.kind != "op" or t.text != op:
            raise ParseError(f"expected {op!r}", t.pos)

    def poly(self) -> BiPoly:
        acc = self.term()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t.text == "+" else acc - rhs
            else:
                return acc

    def _starts_factor(self, t: _Tok) -> bool:
        return t.kind in ("num", "var") or (t.kind == "op" and t.text == "(")

    def term(self) -> BiPoly:
        t = self.peek()
        neg = False
        if t.kind == "op" and t.text == "-":
            self.take()
            neg = True
        elif t.kind == "op" and t.text == "+":
            self.take()
        acc = self.factor()
        while True:
            t = self.peek()
            if t.kind == "op" and t.text == "*":
                self.take()
                acc = acc * self.factor()
            elif t.kind == "op" and t.text == "/":
                self.take()
                d = self.factor()
                if not d.is_constant():
                    raise ParseError("division by a non-constant", t.pos)
                if d.is_zero():
                    raise ParseError("division by zero", t.pos)
                acc = acc.to_field() / d.constant_term()
            elif self._starts_factor(t):
                acc = acc * self.factor()
            else:
                break
        return -acc if neg else acc

    def factor(self) -> BiPoly:
        b = self.base()
        t = self.peek()
        if t.kind == "op" and t.text == "^":
            self.take()
            e = self.take()
            if e.kind != "num":
                raise ParseError("exponent must be a nonnegative integer", e.pos)
            b = b ** int(e.text)
        return b

    def base(self) -> BiPoly:
        t = self.take()
        dom = self.field
        if t.kind == "num":
            return BiPoly.const(int(t.text), dom)
        if t.kind == "var":
            if t.text == "x":
                return BiPoly.x(dom)
            if t.text == "y":
                return BiPoly.y(dom)
            if self.ring is not QZ:
                raise ParseError("variable z needs ring Q[z]", t.pos)
            return BiPoly.const(UniPoly.z(), dom)
        if t.kind == "op" and t.text == "(":
            inner = self.poly()
            self.expect(")")
            return inner
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)


def ring_from_tag(tag: str) -> BaseRing:
    if tag in ("int", "Z", "ZZ"):
        return ZZ
    if tag in ("z", "Q[z]", "QZ"):
        return QZ
    raise ValueError(f"unknown ring tag {tag!r}")


def parse_poly(text: str, ring: BaseRing | str = ZZ, integral: bool = False) -> BiPoly:
    """Parse ``text``; the result is over R when integral, else over qt(R).

    With ``integral=True`` a non-integral result is rejected.
    """
    if isinstance(ring, str):
        ring = ring_from_tag(ring)
    p = _Parser(text, ring)
    if p.peek().kind == "end":
        raise ParseError("empty input", 0)
    out = p.poly()
    t = p.peek()
    if t.kind != "end":
        raise ParseError(f"unexpected {t.text!r}", t.pos)
    if out.is_integral():
        return out.to_domain(ring)
    if integral:
        raise ParseError("coefficients are not in the base ring", 0)
    return out


def parse_scalar(text: str, ring: BaseRing | str = ZZ, integral: bool = False):
    """Parse a constant (no x or y); returns an element of R or qt(R)."""
    if isinstance(ring, str):
        ring = ring_from_tag(ring)
    F = parse_poly(text, ring, integral=integral)
    if not F.is_constant():
        raise ParseError("expected a constant", 0)
    return F.constant_term() if F.terms else F.dom.zero


def parse_ypoly(text: str, ring: BaseRing | str = ZZ, integral: bool = False) -> BiPoly:
    F = parse_poly(text, ring, integral=integral)
    if not F.is_univariate_y():
        raise ParseError("expected a polynomial in y only", 0)
    return F
