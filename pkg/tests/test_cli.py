import io
import json

import pytest

from spinstrata.cli import run
from spinstrata.origami import Origami, singularity_profile

from .oracles import census_oracle, profile_by_angles


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_census_small():
    code, out = call_json("census", "--genus", "2", "--r", "2")
    assert code == 0
    assert out == {"total": 16, "even": 10, "odd": 6}
    assert (out["total"], out["even"], out["odd"]) == census_oracle(2, 2)


def test_census_odd_r_has_no_split():
    code, out = call_json("census", "--genus", "3", "--r", "3")
    assert code == 0 and out == {"total": 3**6}


def test_prototype_profile():
    code, out = call_json("prototype", "--kappa", "2,2", "--spin", "even")
    assert code == 0
    o = Origami.from_json(out["origami"])
    assert singularity_profile(o) == [2, 2]
    assert profile_by_angles(o.h, o.v) == [2, 2]
    assert out["arf"] == 0


def test_prototype_dot():
    code, text = call("prototype", "--kappa", "2,2", "--spin", "odd", "--out", "dot")
    assert code == 0
    assert text.startswith("graph curves {")
    assert '"a1" -- "a1\'";' in text


def test_euclid_five_seven():
    code, out = call_json("euclid", "--kappa", "5,7")
    assert code == 0
    assert out["final_r"] == 1
    assert out["verification"]["ok"]
    assert out["stages"][0]["Q"] == [1, 2, 2]


def test_orbit_and_arf():
    code, out = call_json("orbit", "--genus", "4", "--r", "2")
    assert code == 0 and out["orbits"] == [136, 120]
    code, out = call_json("arf", "--kappa", "2,4", "--spin", "odd")
    assert code == 0 and out["arf"] == 1 and out["parity"] == "odd"


def test_salter_check_flags():
    code, out = call_json("salter-check", "--kappa", "2,2,2,2", "--spin", "odd")
    assert code == 0 and out["ok"]
    code, out = call_json("salter-check", "--kappa", "2,2,2,2", "--spin", "odd", "--no-extra")
    assert code == 0 and not out["ok"]
    assert not out["conditions"]["cut_filling"]["ok"]


def test_verify_and_shear():
    code, out = call_json("verify", "--kappa", "1,1,4", "--seed", "3", "--samples", "40")
    assert code == 0 and out["ok"]
    assert out["twist_linearity"] == {"samples": 40, "passed": 40}
    code, out = call_json("shear", "--kappa", "2,2", "--spin", "even")
    assert code == 0 and out["ok"]


@pytest.mark.parametrize(
    "argv,kind",
    [
        (["census", "--kappa", "3,3"], "unsupported-case"),
        (["census", "--kappa", "2,3"], "invalid-input"),
        (["prototype", "--kappa", "2,2"], "invalid-input"),
        (["prototype", "--kappa", "3,3", "--spin", "odd"], "invalid-input"),
        (["prototype", "--kappa", "x,2"], "invalid-input"),
        (["prototype", "--kappa", "2,2", "--spin", "even", "--bogus"], "invalid-input"),
        (["frobnicate"], "invalid-input"),
        ([], "invalid-input"),
        (["census", "--genus", "3"], "invalid-input"),
        (["euclid", "--kappa", "3,3"], "unsupported-case"),
        (["salter-check", "--kappa", "2,4", "--spin", "odd"], "unsupported-case"),
        (["prototype", "--kappa", "2,2", "--genus", "4", "--spin", "even"], "invalid-input"),
        (["orbit", "--genus", "4", "--r", "4"], "invalid-input"),
        (["census", "--genus", "6", "--r", "10", "--cap", "100"], "cap-exceeded"),
    ],
)
def test_errors_exit_two(argv, kind):
    code, out = call_json(*argv)
    assert code == 2
    assert out["error"] == kind
    assert out["message"]


def test_hyperelliptic_message():
    _, out = call_json("census", "--kappa", "3,3")
    assert "hyperelliptic" in out["message"]


def test_determinism():
    argv = ["verify", "--kappa", "2,4", "--spin", "even", "--seed", "9", "--samples", "30"]
    assert call(*argv) == call(*argv)
    assert call("euclid", "--kappa", "2,6,6", "--spin", "even") == call(
        "euclid", "--kappa", "2,6,6", "--spin", "even", "--threads", "4"
    )


def test_origami_file_round_trip(tmp_path):
    _, text = call("prototype", "--kappa", "2,4", "--spin", "odd")
    path = tmp_path / "proto.json"
    path.write_text(text)
    for cmd in ("prototype", "arf", "shear", "salter-check", "verify"):
        argv = [cmd, "--origami-file", str(path)]
        if cmd == "verify":
            argv += ["--samples", "10"]
        code, out = call(*argv)
        if cmd == "salter-check":
            # genus 4 with r = 2 sits outside the checklist range
            assert code == 2 and json.loads(out)["error"] == "unsupported-case"
        else:
            assert code == 0, out
    bare = tmp_path / "bare.json"
    bare.write_text(json.dumps(json.loads(text)["origami"]))
    code, out = call_json("shear", "--origami-file", str(bare))
    assert code == 0 and out["ok"]
    code, out = call_json("arf", "--origami-file", str(tmp_path / "missing.json"))
    assert code == 2


def test_tampered_origami_file_is_rejected(tmp_path):
    _, out = call_json("prototype", "--kappa", "2,4", "--spin", "odd")
    _, other = call_json("prototype", "--kappa", "2,4", "--spin", "even")
    out["origami"] = other["origami"]
    path = tmp_path / "p.json"
    path.write_text(json.dumps(out))
    code, err = call_json("arf", "--origami-file", str(path))
    assert code == 2 and err["error"] == "invalid-input"
