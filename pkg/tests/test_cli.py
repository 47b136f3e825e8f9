import json
import subprocess
import sys

import pytest

from frobexp import oneparam
from frobexp.cli import main
from frobexp.jsonio import dumps
from frobexp.report import Report

F5 = {"p": 5, "k": 1, "poly": []}


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_exp_j3(capsys, tmp_path):
    j3 = write(tmp_path, "J3.json", {"n": 3, "rows": [[0, 1, 0], [0, 0, 1], [0, 0, 0]]})
    code, out, _ = run(capsys, "exp", "--p", "5", "--in", j3)
    assert code == 0
    assert json.loads(out) == {"field": F5, "n": 3, "rows": [[1, 1, 3], [0, 1, 1], [0, 0, 1]]}
    assert out == dumps(json.loads(out))


def test_log_identity(capsys, tmp_path):
    eye = write(tmp_path, "identity.json", {"field": F5, "n": 2, "rows": [[1, 0], [0, 1]]})
    code, out, _ = run(capsys, "log", "--in", eye)
    assert code == 0 and json.loads(out)["rows"] == [[0, 0], [0, 0]]


def test_exp_rejects_non_nilpotent(capsys, tmp_path):
    bad = write(tmp_path, "nonnilpotent.json", {"field": F5, "n": 2, "rows": [[1, 1], [0, 1]]})
    code, out, err = run(capsys, "exp", "--in", bad)
    assert code == 2 and out == ""
    assert "x^p = 0" in err


def test_usage_errors_exit_2(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "bijection", "--p", "3", "--n", "3", "--r", "2"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "exp", "--in", str(tmp_path / "missing.json"))
    assert code == 2 and "cannot read" in err
    garbage = tmp_path / "garbage.json"
    garbage.write_text("{not json")
    assert run(capsys, "exp", "--in", str(garbage))[0] == 2
    assert run(capsys, "exp", "--in", write(tmp_path, "nofield.json", {"rows": [[0]]}))[0] == 2
    assert run(capsys, "primes", "good", "--type", "H3", "--p", "5")[0] == 2


def test_lift_decompose_round_trip(capsys, tmp_path):
    tup = {"p": 3, "r": 2, "n": 2, "layers": [[[0, 1], [0, 0]], [[0, 1], [0, 0]]]}
    src = write(tmp_path, "tuple.json", tup)
    phi_path = str(tmp_path / "phi.json")
    assert run(capsys, "lift", "--in", src, "--out", phi_path)[0] == 0
    phi = json.loads(open(phi_path).read())
    e12 = phi["phi"]["rows"][0][1]["coeffs"]
    assert e12 == [0, 1, 0, 1, 0, 0, 0, 0, 0]
    back_path = str(tmp_path / "back.json")
    assert run(capsys, "decompose", "--in", phi_path, "--out", back_path)[0] == 0
    back = json.loads(open(back_path).read())
    assert [layer["rows"] for layer in back["layers"]] == tup["layers"]
    # second round trip is byte identical
    phi2 = str(tmp_path / "phi2.json")
    run(capsys, "lift", "--in", back_path, "--out", phi2)
    assert open(phi2).read() == open(phi_path).read()


def test_decompose_rejects_non_homomorphism(capsys, tmp_path):
    def tp(coeffs):
        return {"p": 5, "r": 1, "coeffs": coeffs}

    zero, one, t = tp([0] * 5), tp([1, 0, 0, 0, 0]), tp([0, 1, 0, 0, 0])
    rows = [[one, t, zero], [zero, one, t], [zero, zero, one]]
    bad = write(tmp_path, "bad.json", {"p": 5, "r": 1, "n": 3, "phi": {"n": 3, "field": F5, "rows": rows}})
    assert run(capsys, "decompose", "--in", bad)[0] == 2


def test_verify_suites(capsys):
    code, out, _ = run(capsys, "verify", "bijection", "--p", "3", "--n", "3", "--r", "2", "--samples", "200", "--seed", "7")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["checks"]["round_trip"]["evaluated"] == 200
    code, out, _ = run(capsys, "verify", "sl2-example", "--p", "3")
    assert code == 0 and json.loads(out)["checks"]["d_phi3_u1_minus_d_phi1_u1_is_X"]["passed"]
    code, out, _ = run(capsys, "verify", "dist", "--p", "3", "--r", "3")
    assert code == 0 and json.loads(out)["checks"]["padic_identity"]["evaluated"] == 27
    for argv in (
        ["verify", "axioms", "--p", "3", "--n", "2", "--seed", "1", "--samples", "5"],
        ["verify", "bch", "--p", "5", "--blocks", "1,1,1", "--blocks-j", "2,1", "--seed", "1", "--samples", "10"],
        ["verify", "sl-n", "--p", "5", "--n", "3", "--seed", "1", "--samples", "5"],
        ["verify", "saturation", "--p", "5", "--n", "3", "--seed", "1", "--samples", "5"],
    ):
        code, out, _ = run(capsys, *argv)
        assert code == 0 and json.loads(out)["passed"], argv


def test_verify_bch_domain_error(capsys):
    assert run(capsys, "verify", "bch", "--p", "3", "--blocks", "1,1,1,1", "--seed", "0")[0] == 2


def test_heisenberg_commands(capsys):
    code, out, _ = run(capsys, "heisenberg", "report", "--p", "3", "--r", "2")
    rep = json.loads(out)
    assert code == 0 and (rep["hom_count"], rep["tuple_count"], rep["mismatch"]) == (27, 81, True)
    code, out, _ = run(capsys, "heisenberg", "enumerate", "--p", "3", "--r", "1")
    assert json.loads(out)["count"] == 9
    code, out, _ = run(capsys, "heisenberg", "family", "--p", "5", "--r", "2")
    assert code == 0 and json.loads(out)["family_size"] == 125
    assert run(capsys, "heisenberg", "enumerate", "--p", "3", "--r", "3")[0] == 2


def test_primes_commands(capsys):
    code, out, _ = run(capsys, "primes", "pretty-good", "--datum", "SL3", "--p", "3")
    assert code == 0 and json.loads(out)["pretty_good"] is False
    code, out, _ = run(capsys, "primes", "good", "--type", "G2", "--p", "5")
    assert json.loads(out)["good"] is True


def test_saturate_commands(capsys, tmp_path):
    g = write(tmp_path, "g.json", {"field": F5, "n": 2, "rows": [[1, 1], [0, 1]]})
    code, out, _ = run(capsys, "saturate", "--in", g)
    res = json.loads(out)
    assert code == 0 and res["verification"] == {"homomorphism": True, "phi_at_1_is_g": True}
    assert res["phi"]["rows"][0][1]["coeffs"] == [0, 1, 0, 0, 0]
    g3 = write(tmp_path, "g3.json", {"field": F5, "n": 3, "rows": [[1, 1, 0], [0, 1, 1], [0, 0, 1]]})
    res = json.loads(run(capsys, "saturate", "--in", g3)[1])
    # log(g) = E12 + E23 + 2 E13, so the t-coefficient of entry (1,3) is 2 and the t^2 one is 1/2 * 1 = 3
    assert res["phi"]["rows"][0][2]["coeffs"][:3] == [0, 2, 3]
    bad = write(tmp_path, "bad.json", {"field": F5, "n": 2, "rows": [[2, 0], [0, 1]]})
    assert run(capsys, "saturate", "--in", bad)[0] == 2


def test_failed_verification_exits_1(capsys, monkeypatch):
    def broken(p):
        rep = Report("sl2-example", {"p": p})
        rep.check("forced", False)
        return rep

    monkeypatch.setattr(oneparam, "sl2_example_check", broken)
    code, out, _ = run(capsys, "verify", "sl2-example", "--p", "3")
    assert code == 1 and json.loads(out)["passed"] is False


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "frobexp", "primes", "good", "--type", "B2", "--p", "2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout == '{"good":false,"p":2,"type":["B2"]}\n'
