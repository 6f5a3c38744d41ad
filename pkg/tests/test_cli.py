import io
import json
import subprocess
import sys

import pytest
from hypothesis import given
import hypothesis.strategies as st

from polycoord.base_rings import QZ, ZZ
from polycoord.bipoly import BiPoly
from polycoord.cli import parse_map, run
from polycoord.construct import construct_rs
from polycoord.parsing import parse_poly
from polycoord.plane_maps import PlaneMap, Swap, Triangular, word_to_json
from conftest import nagata

NAGATA = "x - 2y(zx+y^2) - z(zx+y^2)^2"

KEYS = {
    "verify-coord": {"ok", "F", "mod_q1", "mod_q2"},
    "construct-rs": {"ok", "F", "sigma", "sigma_inverse", "verified", "Q2", "u"},
    "construct-rl2": {"ok", "F", "sigma", "sigma_inverse", "verified"},
    "invert": {"ok", "inverse", "integral"},
    "compose": {"map", "identity"},
    "reduce-quad": {"input", "reduced", "shift", "F"},
    "classify": {"F", "mate_length1", "mate", "length_1plus1", "sigma", "tau", "tame",
                 "tame_reason", "tame_witness", "wild_3d_note", "details"},
    "equiv-check": {"ok", "sigma", "source", "target"},
    "equiv-same-p": {"equivalent", "reason", "units_tried"},
    "poloni": {"equivalent", "p", "Q1", "Q2"},
    "cotame-r1": {"certificate", "measures", "verified", "failed_step", "reason", "conjugate"},
    "cotame-r2": {"certificate", "measures", "verified", "failed_step", "reason"},
    "decompose": {"ok", "word", "length", "swaps"},
    "eval": {"poly"},
}


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    payload = json.loads(out.getvalue()) if out.getvalue() else None
    diag = json.loads(err.getvalue()) if err.getvalue() else None
    return code, payload, diag


def check_keys(cmd, payload):
    assert KEYS[cmd] <= set(payload)


def test_verify_coord_kz_instance():
    code, js, _ = call("verify-coord", "--ring", "z", "--d", "z^2", "--q1", "(z-1)^2",
                       "--q2", "(z-2)^2", "--Q1", "y+z^2 y^2",
                       "--Q2", "(z-1)^2((-2z^3+8z^2-4z-4)y+z^2(z-2)y^2)")
    assert code == 0 and js["ok"] is True
    check_keys("verify-coord", js)
    assert js["mod_q1"]["member"] and js["mod_q2"]["member"]


def test_verify_coord_negative():
    code, js, _ = call("verify-coord", "--d", "1", "--q1", "4", "--q2", "1",
                       "--Q1", "y+y^2", "--Q2", "y^2")
    assert code == 1 and js["ok"] is False


def test_poloni_examples():
    code, js, _ = call("poloni", "--q1", "y^2", "--q2", "0")
    assert code == 1 and js["equivalent"] is False
    check_keys("poloni", js)
    code, js, _ = call("poloni", "--q1", "y^3", "--q2", "-y^3", "--cross-check")
    assert code == 0 and js["equivalent"] and js["decide_same_p"]["equivalent"]


def test_compose_identity():
    code, js, _ = call("compose", "--a", "identity", "--b", "identity")
    assert code == 0 and js == {"map": ["x", "y"], "identity": True}


def test_construct_rs_round_trips_through_json():
    code, js, _ = call("construct-rs", "--ring", "z", "--p1", "z^2", "--Q1", "y+zy^2", "--u", "-1")
    assert code == 0
    check_keys("construct-rs", js)
    w = construct_rs(parse_poly("z^2", QZ).constant_term(), parse_poly("y+zy^2", QZ), -1)
    assert PlaneMap(*(parse_poly(t, QZ) for t in js["sigma"])) == w.sigma
    assert parse_poly(js["sigma"][0], QZ) == nagata()
    assert parse_map(", ".join(js["sigma_inverse"]), QZ).to_ring() == w.sigma_inverse


def test_construct_rs_not_coordinate():
    code, js, _ = call("construct-rs", "--p1", "4", "--Q1", "y^2")
    assert code == 1 and js["ok"] is False


def test_construct_rl2_z_instance():
    code, js, _ = call("construct-rl2", "--d", "3", "--q1", "5", "--q2", "2",
                       "--Q1", "y+6y^2", "--Q2", "25y+30y^2")
    assert code == 0 and js["verified"]
    check_keys("construct-rl2", js)


def test_invert_and_decompose():
    code, js, _ = call("invert", "--ring", "z", "--map", f"z^2x+y+zy^2, {NAGATA}")
    assert code == 0 and js["integral"]
    code, js, _ = call("decompose", "--ring", "z", "--map", f"z^2x+y+zy^2, {NAGATA}")
    assert code == 0 and js["swaps"] == 2
    check_keys("decompose", js)
    code, js, _ = call("decompose", "--map", "x^2, y")
    assert code == 1 and js["ok"] is False


def test_reduce_and_classify():
    code, js, _ = call("reduce-quad", "--p1", "15", "--p2", "2/3", "--Q1", "y+6y^2",
                       "--Q2", "(25y+30y^2)/3")
    assert code == 0
    check_keys("reduce-quad", js)
    code, js, _ = call("classify", "--p1", "1", "--p2", "1", "--Q1", "y", "--Q2", "y^2")
    assert code == 0 and js["tame"] == "Tame"
    check_keys("classify", js)
    code, js, _ = call("classify", "--ring", "z", "--p1", "z^2", "--p2", "-1/z^2",
                       "--Q1", "y+zy^2", "--Q2", "(y-zy^2)/z^2")
    assert code == 1 and js["tame"] == "NotTame" and js["wild_3d_note"]
    code, js, _ = call("classify", "--budget", "0", "--p1", "1", "--p2", "1",
                       "--Q1", "y", "--Q2", "y^2")
    assert code == 2 and js["tame"] == "Undetermined"


def test_equivalence_commands():
    base = ["--ring", "z", "--p1", "z^2", "--Q1", "-y^2-zy^3", "--p2", "z^2", "--Q2", "-y^2+zy^3"]
    code, js, _ = call("equiv-check", *base, "--u", "1", "--Q3", "zy")
    assert code == 0 and js["ok"]
    check_keys("equiv-check", js)
    code, js, _ = call("equiv-check", "--ring", "z", "--p1", "z^2", "--Q1", "-y^2-zy^2",
                       "--p2", "z^2", "--Q2", "-y^2", "--u", "1", "--Q3", "0")
    assert code == 1 and js["failed"] == "StarStarFailed"
    code, js, _ = call("equiv-same-p", "--ring", "z", "--p", "z^2", "--Q1", "-y^2-zy^3",
                       "--Q2", "-y^2+zy^3")
    assert code == 0 and js["witness"]["u"] in ("1", "-1")
    check_keys("equiv-same-p", js)


def test_cotame_commands():
    code, js, _ = call("cotame-r1", "--p1", "z^2", "--Q1", "y+zy^2", "--u", "-1")
    assert code == 0 and js["verified"]
    assert js["conjugate"] == ["x + 2*z*y + (-z^3 + 1)", "y - z^2"]
    check_keys("cotame-r1", js)
    code, js, _ = call("cotame-r2", "--map", f"z^2x+y+zy^2, {NAGATA}")
    assert code == 0 and js["measures"] == [2]
    check_keys("cotame-r2", js)


def test_eval():
    code, js, _ = call("eval", "--poly", "x+y^2", "--map", "y, x", "--x", "2", "--y", "3")
    assert code == 0 and js == {"poly": "x^2 + y", "value": "7"}
    code, js, _ = call("eval", "--ring", "z", "--poly", NAGATA)
    assert parse_poly(js["poly"], QZ) == nagata()


def test_input_errors():
    code, js, diag = call("eval", "--poly", "x+*y")
    assert code == 3 and js is None
    assert diag["error"] == "ParseError" and diag["position"] == 2
    code, _, diag = call("eval", "--poly", "zx")
    assert code == 3
    code, _, diag = call("classify", "--p1", "1")
    assert code == 3 and diag["error"] == "InputError"
    code, _, diag = call("compose", "--a", "x", "--b", "identity")
    assert code == 3
    code, _, diag = call("cotame-r2", "--map", "x^2, y")
    assert code == 3 and diag["error"] == "NotAnAutomorphism"


def test_text_output():
    out, err = io.StringIO(), io.StringIO()
    assert run(["poloni", "--q1", "y^2", "--q2", "0", "--out", "text"], out, err) == 1
    assert out.getvalue().splitlines()[0] == "equivalent: false"


def test_deterministic_output():
    argv = ["cotame-r1", "--p1", "z^2", "--Q1", "y+zy^2", "--u", "-1"]
    assert call(*argv) == call(*argv)


@given(st.integers(0, 500))
def test_word_json_strings_parse_back(seed):
    from polycoord.oracles import random_word
    for f, rec in zip(random_word(seed, 3).factors, word_to_json(random_word(seed, 3))):
        if isinstance(f, Triangular):
            assert parse_poly(rec["Q"], QZ).to_field() == f.Q
            assert parse_poly(rec["p"], QZ).to_field() == BiPoly.const(f.p, QZ.field)
        else:
            assert isinstance(f, Swap) and rec == {"type": "swap"}


def test_console_script():
    r = subprocess.run([sys.executable, "-m", "polycoord.cli", "compose", "--a", "swap",
                        "--b", "swap"], capture_output=True, text=True)
    assert r.returncode == 0 and json.loads(r.stdout)["identity"] is True


@pytest.mark.parametrize("text", ["y + 6y^2", "0", NAGATA])
def test_parse_examples(text):
    ring = QZ if "z" in text else ZZ
    assert parse_poly(str(parse_poly(text, ring)), ring) == parse_poly(text, ring)
