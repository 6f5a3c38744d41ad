"""Brute-force oracles and reproducible random instances for tests.

The oracles never use the unit-plus-nilpotent criterion.  ``brute_va1``
decides the existence of a left compositional inverse of bounded degree by
solving the linear system ``sum s_i P^i = y`` over every prime-power factor
of n (min-valuation pivoting over Z/p^k), and ``brute_comp_inverse``
enumerates candidate inverses outright.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import sympy

from .base_rings import QZ, ZZ, BaseRing, UniPoly
from .bipoly import BiPoly
from .classify import Quadruplet
from .construct import Rl2Data, example2_family
from .plane_maps import Swap, Triangular, Word


class BoundsExceeded(ValueError):
    pass


@dataclass(frozen=True)
class SearchSpace:
    modulus: int
    degcap: int
    inv_degcap: int

    def __post_init__(self):
        if not 2 <= self.modulus <= 12 or not 0 <= self.degcap <= 3:
            raise BoundsExceeded("need 2 <= n <= 12 and degcap <= 3")


def inverse_degree_cap(n: int) -> int:
    return 2 * n.bit_length()


def _polymul_mod(a: tuple, b: tuple, n: int) -> tuple:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % n
    return tuple(out)


def _powers(P: tuple, count: int, n: int) -> list:
    pw = [(1,)]
    for _ in range(count - 1):
        pw.append(_polymul_mod(pw[-1], P, n))
    return pw


def _val(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def _solvable_prime_power(A: list, b: list, p: int, k: int) -> bool:
    """Whether ``A s = b`` has a solution modulo ``p^k``."""
    q = p ** k
    A = [[x % q for x in row] for row in A]
    b = [x % q for x in b]
    rows, cols = len(A), len(A[0]) if A else 0
    r = 0
    active = list(range(cols))
    while r < rows and active:
        best = None
        for i in range(r, rows):
            for j in active:
                if A[i][j]:
                    v = _val(A[i][j], p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        A[r], A[i] = A[i], A[r]
        b[r], b[i] = b[i], b[r]
        piv = A[r][j]
        unit = piv // p ** v
        uinv = pow(unit, -1, q)
        for i2 in range(rows):
            if i2 != r and A[i2][j]:
                f = (A[i2][j] // p ** v) * uinv % q
                A[i2] = [(x - f * y) % q for x, y in zip(A[i2], A[r])]
                b[i2] = (b[i2] - f * b[r]) % q
        # column operations clear the rest of the pivot row (unknowns change, b does not)
        for j2 in active:
            if j2 != j and A[r][j2]:
                f = (A[r][j2] // p ** v) * uinv % q
                for i2 in range(rows):
                    A[i2][j2] = (A[i2][j2] - f * A[i2][j]) % q
        if b[r] and _val(b[r], p) < v:
            return False
        active.remove(j)
        r += 1
    return all(x == 0 for x in b[r:])


@lru_cache(maxsize=None)
def _has_left_inverse_pp(P: tuple, p: int, k: int, cap: int) -> bool:
    q = p ** k
    pw = _powers(P, cap + 1, q)
    width = max(len(t) for t in pw)
    A = [[pw[i][m] if m < len(pw[i]) else 0 for i in range(cap + 1)] for m in range(max(width, 2))]
    b = [0] * len(A)
    b[1] = 1
    return _solvable_prime_power(A, b, p, k)


def has_left_inverse(P: tuple, n: int, cap: Optional[int] = None) -> bool:
    """Existence of ``S`` with ``deg S <= cap`` and ``S(P(y)) = y`` modulo n."""
    cap = inverse_degree_cap(n) if cap is None else cap
    for p, k in sympy.factorint(n).items():
        q = p ** k
        if not _has_left_inverse_pp(tuple(c % q for c in P), p, k, cap):
            return False
    return True


def brute_va1(n: int, degcap: int) -> set:
    """Coefficient tuples ``(c0, ..., c_degcap)`` over Z/n with a left inverse."""
    SearchSpace(n, degcap, inverse_degree_cap(n))
    out = set()
    for cs in itertools.product(range(n), repeat=degcap + 1):
        if has_left_inverse(cs, n):
            out.add(cs)
    return out


def brute_comp_inverse(Q, n: int, degcap: int) -> Optional[tuple]:
    """Least ``S`` (lexicographic on ``(s0, s1, ...)``) with ``S(Q(y)) = y`` mod n."""
    if not 2 <= n <= 12 or degcap > 6 or n ** (degcap + 1) > 2_000_000:
        raise BoundsExceeded("search space too large")
    if isinstance(Q, BiPoly):
        Q = tuple(int(c) for c in Q.y_coeffs())
    Q = tuple(c % n for c in Q)
    pw = _powers(Q, degcap + 1, n)
    width = max(2, max(len(t) for t in pw))
    cols = [[t[m] if m < len(t) else 0 for m in range(width)] for t in pw]
    target = [0] * width
    target[1] = 1 % n
    for s in itertools.product(range(n), repeat=degcap + 1):
        acc = [0] * width
        for si, col in zip(s, cols):
            if si:
                for m in range(width):
                    acc[m] += si * col[m]
        if all((a - t) % n == 0 for a, t in zip(acc, target)):
            return s
    return None


# ---------------------------------------------------------------------------
# Random instances
# ---------------------------------------------------------------------------


_INT_POOL = [1, -1, 2, -2, 3, -3, 4, 5, -5, 6, 7, 9, -9, 10, 12, 25]


def _rand_z_elem(rng: random.Random, ring: BaseRing, deg: int = 2, height: int = 3):
    if ring is ZZ:
        return rng.choice(_INT_POOL)
    while True:
        cs = [rng.randint(-height, height) for _ in range(rng.randint(1, deg + 1))]
        u = UniPoly(cs)
        if not u.is_zero():
            return u


def _radical(a, ring: BaseRing):
    if ring is ZZ:
        r = 1
        for p in sympy.factorint(abs(a)):
            r *= p
        return r
    from .equivalence import prime_power_factors
    r = UniPoly((1,))
    for f, _ in prime_power_factors(a, ring):
        r = r * f
    return r


def _rand_ypoly(rng: random.Random, ring: BaseRing, mindeg: int, maxdeg: int, factor=1,
                height: int = 3) -> BiPoly:
    d = rng.randint(mindeg, maxdeg)
    if d == 0:
        return BiPoly.zero(ring)
    while True:
        terms = {}
        for j in range(1, d + 1):
            c = rng.randint(-height, height) if ring is ZZ else _rand_z_elem(rng, ring, 1, height)
            if c != 0:
                terms[(0, j)] = ring.convert(c) * factor
        if terms and max(j for _, j in terms) >= mindeg:
            return BiPoly(terms, ring)


def random_rl2(seed: int, ring: BaseRing = ZZ) -> Rl2Data:
    """Coordinate data from :func:`example2_family` with small random parameters.

    Over Z: d, q1, q2 are drawn from a fixed pool of small integers, Q3 has
    degree <= 2 and height <= 3, Q4 has degree 2..3 with coefficients in
    rad(q2)*[-3, 3].  Over Q[z] the same with z-degree <= 1 coefficients and
    d, q1, q2 of z-degree <= 2.
    """
    rng = random.Random(seed)
    while True:
        d, q1, q2 = (_rand_z_elem(rng, ring) for _ in range(3))
        if not all(ring.is_unit(ring.gcd(a, b)) for a, b in ((d, q1), (d, q2), (q1, q2))):
            continue
        Q3 = _rand_ypoly(rng, ring, 0, 2) if rng.random() < 0.8 else BiPoly.zero(ring)
        Q4 = _rand_ypoly(rng, ring, 2, 3, factor=_radical(q2, ring))
        data = example2_family(d, q1, q2, Q3, Q4, ring)
        if data.Q1.deg_y >= 1 and data.Q2.deg_y >= 2:
            return data


def quadruplet_from_rl2(data: Rl2Data) -> Quadruplet:
    r = data.ring
    f = r.field
    dinv = f.inverse(f.convert(data.d))
    return Quadruplet(f.convert(data.d * data.q1), f.convert(data.q2) * dinv,
                      data.Q1.to_field(), data.Q2.to_field().scale(dinv), r)


def random_quadruplet(seed: int, ring: BaseRing = ZZ) -> Quadruplet:
    return quadruplet_from_rl2(random_rl2(seed, ring))


def perturb(q: Quadruplet, rng: random.Random) -> tuple:
    """An equivalent quadruplet ``(lam*p1, p2, lam*(Q1 + c), Q2(y/lam - c) + r)`` and ``r``."""
    ring = q.ring
    f = ring.field
    while True:
        if ring is ZZ:
            lam = f.convert(rng.choice([1, -1, 2, 3, -4, 5])) / f.convert(rng.choice([1, 2, 3, 7]))
            c = f.convert(rng.randint(-5, 5)) / f.convert(rng.choice([1, 2, 3]))
            r = f.convert(rng.randint(-5, 5))
        else:
            lam = f.convert(_rand_z_elem(rng, ring, 1)) / f.convert(_rand_z_elem(rng, ring, 1))
            c = f.convert(_rand_z_elem(rng, ring, 1)) / f.convert(rng.choice([1, 2, 3]))
            r = f.convert(_rand_z_elem(rng, ring, 1))
        if lam != 0:
            break
    y = BiPoly.y(f)
    Q1 = (q.Q1 + c).scale(lam)
    Q2 = q.Q2.of(y.scale(f.inverse(lam)) - c) + r
    return Quadruplet(q.p1 * lam, q.p2, Q1, Q2, ring), r


def random_word(seed: int, length: int) -> Word:
    """An alternating word ``T1 pi T2 pi ...`` over Q(z) with ``length`` factors.

    Interior triangular factors have y-degree 2..3; p-parameters are nonzero
    ratios of z-polynomials of degree <= 1; Q-coefficients have z-degree <= 3
    and integer height <= 3.
    """
    if length < 1:
        raise ValueError("length must be positive")
    rng = random.Random(seed)
    dom = QZ.field
    n_tri = (length + 1) // 2
    factors = []
    for i in range(n_tri):
        interior = 0 < i and (i < n_tri - 1 or length % 2 == 0)
        lo = 2 if interior else 0
        deg = rng.randint(lo, 3 if interior else 2)
        while True:
            num = UniPoly([rng.randint(-2, 2) for _ in range(2)])
            den = UniPoly([rng.randint(1, 2), rng.randint(0, 1)])
            if not num.is_zero():
                break
        p = dom.convert(num) / dom.convert(den)
        terms = {}
        for j in range(1, deg + 1):
            cs = [rng.randint(-3, 3) for _ in range(rng.randint(1, 4))]
            if any(cs):
                terms[(0, j)] = dom.convert(UniPoly(cs))
        if interior and (0, deg) not in terms:
            terms[(0, deg)] = dom.convert(1)
        factors.append(Triangular(p, BiPoly(terms, dom)))
        if len(factors) < length:
            factors.append(Swap())
    return Word(tuple(factors[:length]), dom)
