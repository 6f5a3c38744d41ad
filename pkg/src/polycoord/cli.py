"""Command-line front-end.

Every subcommand prints one JSON object on stdout (or ``key: value`` lines
with ``--out text``).  Exit codes: 0 decided or constructed, 1 negative
verdict, 2 undetermined, 3 input error (diagnostic JSON on stderr).
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Callable, Optional

from .base_rings import QZ, BaseRing
from .bipoly import BiPoly
from .classify import NotIntegral, Quadruplet, TameVerdict, classify, expand, reduce_with_shift
from .construct import (
    CriterionFailed,
    InvariantViolation,
    NilpotencyFailed,
    NotCoordinate,
    PairwiseCoprimalityFailed,
    Rl2Data,
    construct_rl2,
    construct_rs,
    verify_rl2_criterion,
)
from .cotame import (
    AffineInput,
    CertificationFailed,
    NotR2Presentation,
    certify_cotame_r1,
    certify_cotame_r2,
    conjugate_by_translation,
    verify_certificate,
)
from .equivalence import (
    NotUnit,
    StarFailed,
    StarStarFailed,
    UnsupportedRing,
    check_witness,
    decide_same_p,
    poloni_decide,
    poloni_instance,
)
from .parsing import ParseError, parse_poly, parse_scalar, parse_ypoly, ring_from_tag
from .plane_maps import (
    NotAnAutomorphism,
    PlaneMap,
    compose,
    decompose_over_field,
    invert_over_field,
    map_to_json,
    scalar_to_str,
    word_to_json,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_UNDETERMINED, EXIT_INPUT = 0, 1, 2, 3


class InputError(ValueError):
    pass


class Result:
    def __init__(self, payload: dict, code: int = EXIT_OK):
        self.payload = payload
        self.code = code


# ---------------------------------------------------------------------------
# Input helpers
# ---------------------------------------------------------------------------


def _ring(args) -> BaseRing:
    return ring_from_tag(args.ring)


def _scalar(text: str, ring: BaseRing, integral: bool = True):
    return parse_scalar(text, ring, integral=integral)


def _ypoly(text: str, ring: BaseRing, integral: bool = True) -> BiPoly:
    return parse_ypoly(text, ring, integral=integral)


def parse_map(text: str, ring: BaseRing) -> PlaneMap:
    """``identity``, ``swap`` or two polynomials separated by a comma."""
    t = text.strip()
    dom = ring.field
    if t == "identity":
        return PlaneMap.identity(dom)
    if t == "swap":
        return PlaneMap.swap(dom)
    parts = t.split(",")
    if len(parts) != 2:
        raise InputError("a map is 'identity', 'swap' or 'f1, f2'")
    f1, f2 = (parse_poly(p, ring).to_domain(dom) for p in parts)
    return PlaneMap(f1, f2)


def _maybe_ring(s: PlaneMap) -> PlaneMap:
    return s.to_ring() if s.is_integral() else s


def _quadruplet(args, ring: BaseRing) -> Quadruplet:
    return Quadruplet(_scalar(args.p1, ring, False), _scalar(args.p2, ring, False),
                      _ypoly(args.Q1, ring, False), _ypoly(args.Q2, ring, False), ring)


def _quad_json(q: Quadruplet) -> dict:
    dom = q.ring.field
    return {"p1": scalar_to_str(q.p1, dom), "p2": scalar_to_str(q.p2, dom),
            "Q1": str(q.Q1), "Q2": str(q.Q2)}


def _va1_json(v) -> dict:
    return {"member": v.member, "reason": v.reason}


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_verify_coord(args) -> Result:
    ring = _ring(args)
    data = Rl2Data(_scalar(args.d, ring), _scalar(args.q1, ring), _scalar(args.q2, ring),
                   _ypoly(args.Q1, ring), _ypoly(args.Q2, ring), ring)
    ok, (va, vb) = verify_rl2_criterion(data)
    payload = {"ok": ok, "F": str(data.F()), "mod_q1": _va1_json(va), "mod_q2": _va1_json(vb)}
    return Result(payload, EXIT_OK if ok else EXIT_NEGATIVE)


def _witness_json(w) -> dict:
    out = {"F": str(w.F), "sigma": map_to_json(w.sigma),
           "sigma_inverse": map_to_json(w.sigma_inverse), "verified": w.check()}
    dom = w.F.dom
    for k, v in w.trace.items():
        out[k] = str(v) if isinstance(v, BiPoly) else scalar_to_str(v, dom)
    return out


def cmd_construct_rs(args) -> Result:
    ring = _ring(args)
    try:
        w = construct_rs(_scalar(args.p1, ring), _ypoly(args.Q1, ring), _scalar(args.u, ring), ring)
    except NotCoordinate as e:
        return Result({"ok": False, "reason": str(e)}, EXIT_NEGATIVE)
    return Result({"ok": True, **_witness_json(w)})


def cmd_construct_rl2(args) -> Result:
    ring = _ring(args)
    data = Rl2Data(_scalar(args.d, ring), _scalar(args.q1, ring), _scalar(args.q2, ring),
                   _ypoly(args.Q1, ring), _ypoly(args.Q2, ring), ring)
    try:
        w = construct_rl2(data)
    except CriterionFailed as e:
        return Result({"ok": False, "reason": str(e)}, EXIT_NEGATIVE)
    return Result({"ok": True, **_witness_json(w)})


def cmd_invert(args) -> Result:
    s = parse_map(args.map, _ring(args))
    try:
        inv = invert_over_field(s)
    except NotAnAutomorphism as e:
        return Result({"ok": False, "reason": str(e)}, EXIT_NEGATIVE)
    inv = _maybe_ring(inv)
    return Result({"ok": True, "inverse": map_to_json(inv), "integral": inv.is_integral()})


def cmd_compose(args) -> Result:
    ring = _ring(args)
    c = _maybe_ring(compose(parse_map(args.a, ring), parse_map(args.b, ring)))
    return Result({"map": map_to_json(c), "identity": c.is_identity()})


def cmd_reduce_quad(args) -> Result:
    ring = _ring(args)
    q = _quadruplet(args, ring)
    red, shift = reduce_with_shift(q)
    payload = {"input": _quad_json(q), "reduced": _quad_json(red),
               "shift": scalar_to_str(shift, ring.field)}
    try:
        payload["F"] = str(expand(red))
    except NotIntegral:
        payload["F"] = None
    return Result(payload)


def cmd_classify(args) -> Result:
    ring = _ring(args)
    try:
        rep = classify(_quadruplet(args, ring), budget=args.budget)
    except NotIntegral as e:
        raise InputError(str(e)) from e
    code = {TameVerdict.TAME: EXIT_OK, TameVerdict.NOT_TAME: EXIT_NEGATIVE,
            TameVerdict.UNDETERMINED: EXIT_UNDETERMINED}[rep.tame]
    return Result(rep.to_json(), code)


def cmd_equiv_check(args) -> Result:
    ring = _ring(args)
    try:
        w = check_witness(_scalar(args.p1, ring), _ypoly(args.Q1, ring), _scalar(args.p2, ring),
                          _ypoly(args.Q2, ring), _scalar(args.u, ring), _ypoly(args.Q3, ring), ring)
    except (StarFailed, StarStarFailed, NotUnit) as e:
        return Result({"ok": False, "failed": type(e).__name__, "reason": str(e)}, EXIT_NEGATIVE)
    return Result({"ok": True, "sigma": map_to_json(w.sigma), "source": str(w.source),
                   "target": str(w.target)})


def _same_p_json(res, ring: BaseRing) -> dict:
    out = {"equivalent": res.equivalent, "reason": res.reason,
           "units_tried": [scalar_to_str(u, ring) for u in res.units_tried]}
    if res.witness is not None:
        out["witness"] = {"u": scalar_to_str(res.witness.u, ring), "Q3": str(res.witness.Q3),
                          "sigma": map_to_json(res.witness.sigma)}
    return out


def cmd_equiv_same_p(args) -> Result:
    ring = _ring(args)
    try:
        res = decide_same_p(_scalar(args.p, ring), _ypoly(args.Q1, ring), _ypoly(args.Q2, ring), ring)
    except UnsupportedRing as e:
        return Result({"equivalent": None, "reason": str(e)}, EXIT_UNDETERMINED)
    return Result(_same_p_json(res, ring), EXIT_OK if res.equivalent else EXIT_NEGATIVE)


def cmd_poloni(args) -> Result:
    q1 = parse_ypoly(args.q1, "int", integral=False)
    q2 = parse_ypoly(args.q2, "int", integral=False)
    eq = poloni_decide(q1, q2)
    p, Q1, Q2 = poloni_instance(q1, q2)
    payload = {"equivalent": eq, "p": scalar_to_str(p, QZ), "Q1": str(Q1), "Q2": str(Q2)}
    if args.cross_check:
        res = decide_same_p(p, Q1, Q2, QZ)
        payload["decide_same_p"] = _same_p_json(res, QZ)
        if res.equivalent != eq:
            raise RuntimeError("closed form and general procedure disagree")
    return Result(payload, EXIT_OK if eq else EXIT_NEGATIVE)


def _cert_result(cert, sigma) -> Result:
    v = verify_certificate(cert, sigma)
    payload = {"certificate": cert.to_json(), "measures": cert.measures(),
               "verified": v.ok, "failed_step": v.failed_step, "reason": v.reason}
    return Result(payload, EXIT_OK if v.ok else EXIT_UNDETERMINED)


def cmd_cotame_r1(args) -> Result:
    ring = QZ
    try:
        cert = certify_cotame_r1(_scalar(args.p1, ring), _ypoly(args.Q1, ring), _scalar(args.u, ring))
    except NotCoordinate as e:
        raise InputError(str(e)) from e
    except CertificationFailed as e:
        return Result({"certificate": None, "reason": str(e)}, EXIT_UNDETERMINED)
    res = _cert_result(cert, cert.sigma)
    res.payload["conjugate"] = map_to_json(conjugate_by_translation(cert.sigma))
    return res


def cmd_cotame_r2(args) -> Result:
    sigma = parse_map(args.map, QZ)
    if not sigma.is_integral():
        raise InputError("the map must have coefficients in Q[z]")
    sigma = sigma.to_ring()
    try:
        cert = certify_cotame_r2(sigma)
    except CertificationFailed as e:
        return Result({"certificate": None, "reason": str(e)}, EXIT_UNDETERMINED)
    return _cert_result(cert, sigma)


def cmd_decompose(args) -> Result:
    s = parse_map(args.map, _ring(args))
    try:
        w = decompose_over_field(s)
    except NotAnAutomorphism as e:
        return Result({"ok": False, "reason": str(e)}, EXIT_NEGATIVE)
    return Result({"ok": True, "word": word_to_json(w), "length": len(w), "swaps": w.swaps()})


def cmd_eval(args) -> Result:
    ring = _ring(args)
    F = parse_poly(args.poly, ring)
    if args.map:
        F = parse_map(args.map, ring)(F.to_domain(ring.field))
        if F.is_integral():
            F = F.to_domain(ring)
    payload = {"poly": str(F)}
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise InputError("--x and --y go together")
        x, y = _scalar(args.x, ring, False), _scalar(args.y, ring, False)
        payload["value"] = scalar_to_str(F.evaluate(x, y), ring.field)
    return Result(payload)


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ring", choices=["int", "z"], default="int")
    p.add_argument("--out", choices=["json", "text"], default="json")
    p.add_argument("--budget", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="polycoord",
                 description="Coordinates of R[x,y] for R = Z or Q[z].")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name: str, fn: Callable, help_: str, *opts: tuple) -> None:
        p = sub.add_parser(name, help=help_)
        _common(p)
        for flag, kw in opts:
            p.add_argument(flag, **kw)
        p.set_defaults(func=fn)

    req = {"required": True}
    rl2 = (("--d", {"default": "1"}), ("--q1", req), ("--q2", req), ("--Q1", req), ("--Q2", req))
    quad = (("--p1", req), ("--p2", req), ("--Q1", req), ("--Q2", req))
    add("verify-coord", cmd_verify_coord, "check the rational-length-2 criterion", *rl2)
    add("construct-rs", cmd_construct_rs, "automorphism with second component p1*x+Q1(y)",
        ("--p1", req), ("--Q1", req), ("--u", {"default": "1"}))
    add("construct-rl2", cmd_construct_rl2, "automorphism for rational-length-2 data", *rl2)
    add("invert", cmd_invert, "inverse of a plane map", ("--map", req))
    add("compose", cmd_compose, "composition a o b", ("--a", req), ("--b", req))
    add("reduce-quad", cmd_reduce_quad, "reduced form of a quadruplet", *quad)
    add("classify", cmd_classify, "classification report of a quadruplet", *quad)
    add("equiv-check", cmd_equiv_check, "check an equivalence witness",
        ("--p1", req), ("--Q1", req), ("--p2", req), ("--Q2", req), ("--u", req), ("--Q3", req))
    add("equiv-same-p", cmd_equiv_same_p, "decide equivalence of p*x+Q1(y) and p*x+Q2(y)",
        ("--p", req), ("--Q1", req), ("--Q2", req))
    add("poloni", cmd_poloni, "closed-form equivalence test for the z^2 family",
        ("--q1", req), ("--q2", req), ("--cross-check", {"action": "store_true"}))
    add("cotame-r1", cmd_cotame_r1, "co-tameness certificate for a length-1 map over Q[z]",
        ("--p1", req), ("--Q1", req), ("--u", {"default": "1"}))
    add("cotame-r2", cmd_cotame_r2, "co-tameness certificate for a map over Q[z]", ("--map", req))
    add("decompose", cmd_decompose, "triangular/swap word over the fraction field", ("--map", req))
    add("eval", cmd_eval, "normalize, substitute or evaluate a polynomial",
        ("--poly", req), ("--map", {"default": None}), ("--x", {"default": None}),
        ("--y", {"default": None}))
    return ap


def _emit(payload: dict, fmt: str, stream) -> None:
    if fmt == "text":
        for k, v in payload.items():
            stream.write(f"{k}: {v if isinstance(v, str) else json.dumps(v)}\n")
    else:
        stream.write(json.dumps(payload) + "\n")


_INPUT_ERRORS = (ParseError, InputError, InvariantViolation, PairwiseCoprimalityFailed,
                 NilpotencyFailed, AffineInput, NotR2Presentation, NotAnAutomorphism, ValueError)


def _attach_negative_values(argv: list) -> list:
    """Turn ``--flag -expr`` into ``--flag=-expr`` so values may start with '-'."""
    out, i = [], 0
    while i < len(argv):
        a = argv[i]
        if (a.startswith("--") and "=" not in a and i + 1 < len(argv)
                and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--")
                and argv[i + 1] != "-h"):
            out.append(f"{a}={argv[i + 1]}")
            i += 2
        else:
            out.append(a)
            i += 1
    return out


def run(argv: Optional[list] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = ap.parse_args(argv)
        res = args.func(args)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INPUT
    except _INPUT_ERRORS as e:
        diag = {"error": type(e).__name__, "message": str(e)}
        if isinstance(e, ParseError):
            diag["position"] = e.pos
        stderr.write(json.dumps(diag) + "\n")
        return EXIT_INPUT
    _emit(res.payload, args.out, stdout)
    return res.code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
