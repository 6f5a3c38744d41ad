"""Co-tameness certificates for z-automorphisms of K[x,y,z] (K = Q).

A z-automorphism is stored as a plane map over Q[z].  A certificate is a
chain of replayable steps that ends in a base case which is co-tame by one of
the cited results:

* ``BTri``: triangular and not affine;
* ``BAB``: an explicit product ``b1 a b2`` (triangular, affine, triangular),
  not affine;
* ``BPar``: parabolic (``sigma(y)`` free of x) and not affine;
* ``Derksen``: the map ``(x + y^2, y, z)``.

Steps between ``sigma`` and the base case are conjugation by the translation
``t = (x + 1, y, z)`` (if ``sigma t sigma^-1`` is co-tame then so is
``sigma``) and affine sandwiching (co-tameness is a property of ``A sigma A``).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .base_rings import QZ, UniPoly
from .bipoly import BiPoly
from .construct import construct_rs
from .plane_maps import (
    NotAnAutomorphism,
    PlaneMap,
    Word,
    compose_all,
    decompose_over_field,
    invert_over_field,
    is_affine,
    is_parabolic_3d,
    is_triangular,
    map_to_json,
    normalize_word,
    recompose,
    vde_check,
    word_to_json,
)


class AffineInput(ValueError):
    pass


class NotR2Presentation(ValueError):
    pass


class CertificationFailed(RuntimeError):
    pass


@dataclass(frozen=True)
class ThreeMap:
    """``(f1, f2, z)`` for a plane map over Q[z]."""

    base: PlaneMap

    def __post_init__(self):
        b = self.base
        if b.dom is not QZ:
            if not b.is_integral() or b.dom.base is not QZ:
                raise NotAnAutomorphism("expected a map over Q[z]")
            object.__setattr__(self, "base", b.to_ring())
        if not vde_check(self.base):
            raise NotAnAutomorphism("not an automorphism of Q[z][x,y]")

    def inverse(self) -> PlaneMap:
        return invert_over_field(self.base).to_ring()


def translation() -> PlaneMap:
    return PlaneMap(BiPoly.x(QZ) + 1, BiPoly.y(QZ))


def _as_map(s: Union[ThreeMap, PlaneMap]) -> PlaneMap:
    if isinstance(s, ThreeMap):
        return s.base
    return ThreeMap(s).base


def _inverse(s: PlaneMap) -> PlaneMap:
    return invert_over_field(s).to_ring()


def _conjugate_word(w: Word) -> PlaneMap:
    """``sigma t sigma^-1`` for ``sigma = f1 f2 ... fn``, conjugating inside out."""
    dom = w.dom
    m = PlaneMap(BiPoly.x(dom) + 1, BiPoly.y(dom))
    for f in reversed(w.factors):
        m = compose_all([f.to_map(dom), m, f.inverse().to_map(dom)])
    return m.to_ring()


def conjugate_by_translation(s: Union[ThreeMap, PlaneMap]) -> PlaneMap:
    """``sigma t sigma^-1``."""
    return _conjugate_word(decompose_over_field(_as_map(s)))


def is_conjugate(s: PlaneMap, tau: PlaneMap) -> bool:
    """``tau = sigma t sigma^-1``, checked as ``tau sigma = sigma t``."""
    return compose_all([tau, s]) == PlaneMap(s.f1 + 1, s.f2)


def _btri(m: PlaneMap) -> bool:
    return is_triangular(m, z_as_variable=True) and not is_affine(m, z_as_variable=True)


def _aff(m: PlaneMap) -> bool:
    return is_affine(m, z_as_variable=True)


# ---------------------------------------------------------------------------
# Certificate steps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Sandwich:
    """The next map is ``alpha^-1 sigma beta^-1``; ``alpha``, ``beta`` affine."""

    alpha: PlaneMap
    beta: PlaneMap
    result: PlaneMap
    tag: str = "sandwich"


@dataclass(frozen=True)
class ConjugateByTranslation:
    result: PlaneMap
    tag: str = "conjugate"


@dataclass(frozen=True)
class CaseSplit:
    branch: str
    data: dict = field(default_factory=dict, hash=False, compare=False)
    tag: str = "case"


@dataclass(frozen=True)
class Recurse:
    """The current map has two swaps and a middle factor of this y-degree."""

    measure: int
    word: Word
    tag: str = "recurse"


@dataclass(frozen=True)
class BaseCase:
    axiom: str
    map: PlaneMap
    factors: Optional[tuple] = None
    tag: str = "base"


Step = Union[Sandwich, ConjugateByTranslation, CaseSplit, Recurse, BaseCase]


@dataclass
class CotameCertificate:
    sigma: PlaneMap
    steps: list

    def measures(self) -> list:
        return [s.measure for s in self.steps if isinstance(s, Recurse)]

    def to_json(self) -> dict:
        out = []
        for s in self.steps:
            if isinstance(s, Sandwich):
                out.append({"step": "sandwich", "alpha": map_to_json(s.alpha),
                            "beta": map_to_json(s.beta), "result": map_to_json(s.result)})
            elif isinstance(s, ConjugateByTranslation):
                out.append({"step": "conjugate", "translation": map_to_json(translation()),
                            "result": map_to_json(s.result)})
            elif isinstance(s, CaseSplit):
                out.append({"step": "case", "branch": s.branch,
                            "data": {k: str(v) for k, v in s.data.items()}})
            elif isinstance(s, Recurse):
                out.append({"step": "recurse", "measure": s.measure,
                            "word": word_to_json(s.word)})
            else:
                rec = {"step": "base", "axiom": s.axiom, "map": map_to_json(s.map)}
                if s.factors:
                    rec["factors"] = [map_to_json(f) for f in s.factors]
                out.append(rec)
        return {"sigma": map_to_json(self.sigma), "steps": out}


# ---------------------------------------------------------------------------
# Base cases
# ---------------------------------------------------------------------------


def _derksen() -> PlaneMap:
    y = BiPoly.y(QZ)
    return PlaneMap(BiPoly.x(QZ) + y * y, y)


def _swap() -> PlaneMap:
    return PlaneMap.swap(QZ)


def _bab_factors(s: PlaneMap, p1, Q1: BiPoly) -> Optional[tuple]:
    """``(b1, pi, b2)`` with ``s = b1 pi b2`` when ``p1`` is a nonzero constant."""
    if not isinstance(p1, UniPoly) or not p1.is_constant() or p1 == 0:
        return None
    b1 = PlaneMap(BiPoly.x(QZ).scale(p1) + Q1, BiPoly.y(QZ))
    b2 = compose_all([_swap(), _inverse(b1), s])
    if not is_triangular(b2, z_as_variable=True):
        return None
    return (b1, _swap(), b2)


def _linear_sandwich(s: PlaneMap):
    """Affine ``alpha``, ``beta`` with ``alpha^-1 s beta^-1`` triangular and not affine.

    Applies when ``s(x)`` is linear in x, y with constant coefficients, as for
    length-1 coordinates ``p1*x + b*y + a`` with ``p1`` of degree 1.
    """
    f1 = s.f1
    if f1.total_degree != 1 or f1.constant_term() != 0:
        return None
    a, k = f1.coeff(1, 0), f1.coeff(0, 1)
    for c in (a, k):
        if isinstance(c, UniPoly) and not c.is_constant():
            return None
    x, y = BiPoly.x(QZ), BiPoly.y(QZ)
    # substitution making s(x) a multiple of x
    beta = PlaneMap(x - y.scale(k / a), y) if a != 0 else _swap()
    cand = compose_all([_swap(), s, beta, _swap()])
    if _btri(cand):
        # s = pi cand pi beta^-1
        return _swap(), compose_all([_swap(), _inverse(beta)]), cand, "BTri"
    return None


def _zcoeffs(c) -> list:
    if isinstance(c, UniPoly):
        return list(c.coeffs)
    return [c]


def _fixed_linear_form(s: PlaneMap):
    """Constant ``(a, b) != 0`` with ``s(a*x + b*y) - (a*x + b*y)`` free of x and y."""
    m11, m12 = s.f1.coeff(1, 0), s.f1.coeff(0, 1)
    m21, m22 = s.f2.coeff(1, 0), s.f2.coeff(0, 1)
    # a*(m11 - 1) + b*m21 = 0 and a*m12 + b*(m22 - 1) = 0, coefficientwise in z
    rows = []
    one = QZ.convert(1)
    for u, v in ((QZ.convert(m11) - one, m21), (m12, QZ.convert(m22) - one)):
        cu, cv = _zcoeffs(u), _zcoeffs(v)
        n = max(len(cu), len(cv))
        cu, cv = cu + [0] * (n - len(cu)), cv + [0] * (n - len(cv))
        rows.extend(zip(cu, cv))
    nz = [r for r in rows if r[0] != 0 or r[1] != 0]
    a, b = (nz[0][1], -nz[0][0]) if nz else (0, 1)
    if any(r[0] * a + r[1] * b != 0 for r in nz):
        return None
    return a, b


def _conjugate_to_triangular(s: PlaneMap):
    """Constant linear ``L`` with ``L^-1 s L`` triangular and not affine.

    Covers maps linear in x, y whose coefficients depend on z, such as
    ``(x, y) -> (I + z*N)(x, y)`` with ``N`` nilpotent.
    """
    if s.f1.total_degree > 1 or s.f2.total_degree > 1:
        return None
    ab = _fixed_linear_form(s)
    if ab is None:
        return None
    a, b = ab
    x, y = BiPoly.x(QZ), BiPoly.y(QZ)
    form = x.scale(a) + y.scale(b)
    other = x if b != 0 else y
    for L in (PlaneMap(other, form), PlaneMap(form, other)):
        Linv = _inverse(L)
        cand = compose_all([Linv, s, L])
        if _btri(cand) and compose_all([L, cand, Linv]) == s:
            return L, Linv, cand, "BTri"
    return None


def _length1_data(s: PlaneMap):
    f2 = s.f2
    p1 = f2.coeff(1, 0)
    Q1 = f2 - BiPoly.x(QZ).scale(p1)
    if p1 == 0 or not Q1.is_univariate_y():
        return None
    return p1, Q1


def _certify_length1(s: PlaneMap, steps: list) -> None:
    """Replays the case analysis for ``s(y) = p1*x + Q1(y)``."""
    if _aff(s):
        raise AffineInput("affine maps are not co-tame")
    data = _length1_data(s)
    if data is None:
        raise NotR2Presentation("s(y) is not of the form p1*x + Q1(y)")
    p1, Q1 = data
    degQ = Q1.deg_y
    c = Q1.coeff(0, 2) if degQ <= 2 else None
    tau = conjugate_by_translation(s)
    if degQ >= 3:
        steps.append(CaseSplit("deg_y Q1 >= 3", {"deg_y Q1": degQ}))
    elif isinstance(c, UniPoly) and not c.is_constant():
        steps.append(CaseSplit("quadratic coefficient outside K", {"c": c}))
    else:
        steps.append(CaseSplit("quadratic coefficient in K", {"c": c, "p1": p1}))
    if _btri(tau):
        steps.append(ConjugateByTranslation(tau))
        steps.append(BaseCase("BTri", tau))
        return
    if _btri(s):
        steps.append(BaseCase("BTri", s))
        return
    fac = _bab_factors(s, p1, Q1)
    if fac is not None and not _aff(s):
        steps.append(BaseCase("BAB", s, fac))
        return
    sw = _linear_sandwich(s) or _conjugate_to_triangular(s)
    if sw is not None:
        alpha, beta, inner, axiom = sw
        steps.append(Sandwich(alpha, beta, inner))
        steps.append(BaseCase(axiom, inner))
        return
    if is_parabolic_3d(s):
        steps.append(BaseCase("BPar", s))
        return
    raise CertificationFailed("no base case found for this length-1 map")


def certify_cotame_r1(p1, Q1, u=1) -> CotameCertificate:
    w = construct_rs(p1, Q1, u, QZ)
    s = w.sigma
    if _aff(s):
        raise AffineInput("sigma is affine")
    steps: list = []
    _certify_length1(s, steps)
    return CotameCertificate(s, steps)


# ---------------------------------------------------------------------------
# Rational length 2
# ---------------------------------------------------------------------------


def _middle_degree(w: Word) -> int:
    tris = w.triangulars()
    return tris[1].Q.deg_y if len(tris) >= 2 and not tris[1].Q.is_zero() else 0


def certify_cotame_r2(sigma: Union[ThreeMap, PlaneMap], word: Optional[Word] = None,
                      max_depth: int = 64) -> CotameCertificate:
    s0 = _as_map(sigma)
    if _aff(s0):
        raise AffineInput("sigma is affine")
    steps: list = []
    s = s0
    w = normalize_word(word) if word is not None else decompose_over_field(s)
    if word is not None and recompose(w, w.dom) != s.to_field():
        raise NotR2Presentation("word does not recompose to sigma")
    for _ in range(max_depth):
        l = w.swaps()
        if l > 2:
            raise NotR2Presentation(f"word has {l} swaps")
        if l <= 1:
            if l == 0:
                if not _btri(s):
                    raise CertificationFailed("triangular map is affine")
                steps.append(BaseCase("BTri", s))
            else:
                _certify_length1(s, steps)
            return CotameCertificate(s0, steps)
        steps.append(Recurse(_middle_degree(w), w))
        _tau4_check(w)
        s = _conjugate_word(w)
        steps.append(ConjugateByTranslation(s))
        w = decompose_over_field(s)
    raise CertificationFailed("recursion depth exceeded")


def _tau4_check(w: Word) -> None:
    """``t2 pi (t3 t t3^-1) pi t2^-1`` against the closed form of the middle factor."""
    tail = w.tail()
    if tail is not None and not tail.is_identity():
        return
    t1, t2, t3 = w.triangulars()
    dom = w.dom
    x, y = BiPoly.x(dom), BiPoly.y(dom)
    pi = PlaneMap.swap(dom)
    inner = compose_all([t3.to_map(dom), PlaneMap(x + 1, y), t3.inverse().to_map(dom)])
    got = compose_all([t2.to_map(dom), pi, inner, pi, t2.inverse().to_map(dom)])
    c = dom.inverse(t3.p)
    want = PlaneMap(x + (t2.Q - t2.Q.of(y + c)).scale(dom.inverse(t2.p)), y + c)
    if got != want:
        raise CertificationFailed("middle factor of the conjugate differs from its closed form")


# ---------------------------------------------------------------------------
# Replay
# ---------------------------------------------------------------------------


@dataclass
class Verification:
    ok: bool
    failed_step: Optional[int] = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _check_base(b: BaseCase, cur: PlaneMap) -> str:
    if b.map != cur:
        return "base case map differs from the current map"
    if b.axiom == "BTri":
        return "" if _btri(cur) else "not triangular or affine"
    if b.axiom == "BPar":
        return "" if is_parabolic_3d(cur) and not _aff(cur) else "not parabolic or affine"
    if b.axiom == "Derksen":
        return "" if cur == _derksen() else "not the Derksen map"
    if b.axiom == "BAB":
        if not b.factors or len(b.factors) != 3:
            return "missing factors"
        b1, a, b2 = b.factors
        if not (is_triangular(b1, True) and _aff(a) and is_triangular(b2, True)):
            return "factor shapes do not match"
        if compose_all([b1, a, b2]) != cur or _aff(cur):
            return "factors do not recompose to a non-affine map"
        return ""
    return f"unknown axiom {b.axiom}"


def verify_certificate(cert: CotameCertificate, sigma: Union[ThreeMap, PlaneMap]) -> Verification:
    cur = sigma.base if isinstance(sigma, ThreeMap) else sigma
    if cert.sigma != cur:
        return Verification(False, -1, "certificate is for another map")
    last = None
    for i, st in enumerate(cert.steps):
        try:
            if isinstance(st, ConjugateByTranslation):
                if not is_conjugate(cur, st.result):
                    return Verification(False, i, "conjugation result differs")
                cur = st.result
            elif isinstance(st, Sandwich):
                if not (_aff(st.alpha) and _aff(st.beta)):
                    return Verification(False, i, "sandwich factors are not affine")
                if compose_all([st.alpha, st.result, st.beta]) != cur:
                    return Verification(False, i, "sandwich does not recompose")
                cur = st.result
            elif isinstance(st, Recurse):
                w = decompose_over_field(cur)
                if w.swaps() != 2 or _middle_degree(w) != st.measure:
                    return Verification(False, i, "recursion data differs")
                if last is not None and st.measure >= last:
                    return Verification(False, i, "measure does not decrease")
                last = st.measure
            elif isinstance(st, CaseSplit):
                continue
            elif isinstance(st, BaseCase):
                why = _check_base(st, cur)
                if why:
                    return Verification(False, i, why)
                if i != len(cert.steps) - 1:
                    return Verification(False, i, "steps after the base case")
                return Verification(True)
        except (NotAnAutomorphism, ArithmeticError) as e:
            return Verification(False, i, str(e))
    return Verification(False, len(cert.steps), "no base case")


def sandwich_certificate(cert: CotameCertificate, alpha: PlaneMap, beta: PlaneMap) -> CotameCertificate:
    """Certificate for ``alpha sigma beta`` built from one for ``sigma``."""
    s = compose_all([alpha, cert.sigma, beta])
    return CotameCertificate(s, [Sandwich(alpha, beta, cert.sigma)] + list(cert.steps))
