import sys
from fractions import Fraction

import hypothesis.strategies as st
from hypothesis import settings

from polycoord.base_rings import QZ, QZF, ZZ, UniPoly
from polycoord.bipoly import BiPoly

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

small_fracs = st.builds(Fraction, st.integers(-6, 6), st.integers(1, 4))


@st.composite
def unipolys(draw, maxdeg=3, nonzero=False):
    cs = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=maxdeg + 1))
    p = UniPoly([Fraction(c) for c in cs])
    if nonzero and p.is_zero():
        p = UniPoly((1,))
    return p


@st.composite
def bipolys(draw, dom=ZZ, maxdeg=3, coeffs=None):
    coeffs = st.integers(-4, 4) if coeffs is None else coeffs
    n = draw(st.integers(0, 4))
    terms = {}
    for _ in range(n):
        i = draw(st.integers(0, maxdeg))
        j = draw(st.integers(0, maxdeg - i))
        c = draw(coeffs)
        if c != 0:
            terms[(i, j)] = dom.convert(c)
    return BiPoly(terms, dom)


def zpolys(maxdeg=3):
    return bipolys(QZ, maxdeg, unipolys(2))


def nagata():
    from polycoord.parsing import parse_poly
    return parse_poly("x - 2y(zx+y^2) - z(zx+y^2)^2", QZ)


__all__ = ["QZ", "QZF", "ZZ", "small_fracs", "unipolys", "bipolys", "zpolys", "nagata"]


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        status, dt, budget, note = results[n]
        limit = f"< {budget:g} s" if budget is not None else "no limit"
        extra = f" ({note})" if note else ""
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {dt:6.2f} s  [{limit}]{extra}")
