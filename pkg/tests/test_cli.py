import json
import subprocess
import sys

import pytest

from hypercorr.cli import main
from hypercorr.cube import SetFamily
from hypercorr.families import majority, principal, tribes, TribesParams
from hypercorr.inequalities import evaluate
from hypercorr.serialize import (
    dumps,
    family_from_json,
    family_to_json,
    load_families,
    rational_from_json,
    to_jsonable,
)


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("F", [majority(3), principal(4, 2), tribes(TribesParams(2, 2))[0],
                               SetFamily.full(3), SetFamily.empty(2)])
@pytest.mark.parametrize("enc", ["tt", "family", "generators"])
def test_encoding_roundtrip(F, enc):
    if enc == "generators" and not F.is_increasing:
        pytest.skip("generator encoding is for increasing families")
    G = family_from_json(json.loads(json.dumps(family_to_json(F, enc))))
    assert G == F and G.digest() == F.digest()


def test_encodings_agree_on_digest():
    objs = [{"n": 3, "family": [[1, 2], [1, 3], [2, 3], [1, 2, 3]]},
            {"n": 3, "generators": [[1, 2], [1, 3], [2, 3]], "closure": "up"},
            {"n": 3, "tt": majority(3).hex()}]
    assert len({family_from_json(o).digest() for o in objs}) == 1
    down = family_from_json({"n": 3, "generators": [[1]], "closure": "down"})
    assert down == SetFamily.from_masks(3, [0, 1])


@pytest.mark.parametrize("obj", [
    {"n": 3},
    {"n": 3, "family": [[4]]},
    {"n": 3, "family": [[0]]},
    {"n": 3, "tt": "f"},
    {"n": 2, "tt": "1f"},
    {"n": 3, "family": [], "tt": "00"},
    {"n": 3, "generators": [[1]]},
    {"family": []},
])
def test_malformed_family_rejected(obj):
    with pytest.raises(ValueError):
        family_from_json(obj)


def test_rational_json():
    from fractions import Fraction
    for q in (Fraction(3, 32), Fraction(-5, 7), Fraction(0), Fraction(7)):
        assert rational_from_json(json.loads(json.dumps(to_jsonable(q)))) == q
    assert to_jsonable(Fraction(3, 32))["den_pow2"] == 5


def test_check_matches_library(tmp_path, capsys):
    a = write(tmp_path, "a.json", family_to_json(majority(3)))
    b = write(tmp_path, "b.json", family_to_json(principal(3, 1)))
    code, out, _ = run(["check", "--ineq", "chvatal_equiv", "--A", a, "--B", b], capsys)
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "check"
    assert doc["result"] == to_jsonable(evaluate("chvatal_equiv", majority(3), principal(3, 1)))
    assert set(doc["metadata"]) == {"argv", "seed", "version", "timing_s"}


def test_check_output_file(tmp_path, capsys):
    a = write(tmp_path, "a.json", family_to_json(majority(3)))
    out = tmp_path / "r.json"
    code, stdout, _ = run(["check", "--ineq", "harper", "--A", a, "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert json.loads(out.read_text())["result"]["holds"] is True


def test_class_violation_exit_1(tmp_path, capsys):
    a = write(tmp_path, "a.json", family_to_json(majority(3)))
    b = write(tmp_path, "b.json", family_to_json(principal(3, 1) & principal(3, 2)))
    code, _, err = run(["check", "--ineq", "chvatal_equiv", "--A", a, "--B", b], capsys)
    assert code == 1 and err.strip() == "class violation: B not antipodal"


def test_malformed_inputs_exit_1(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", {"n": 3, "tt": "zz"})
    assert run(["check", "--ineq", "harper", "--A", bad], capsys)[0] == 1
    assert run(["check", "--ineq", "harper", "--A", str(tmp_path / "missing.json")], capsys)[0] == 1
    a3 = write(tmp_path, "a3.json", family_to_json(majority(3)))
    b4 = write(tmp_path, "b4.json", family_to_json(principal(4, 1)))
    assert run(["check", "--ineq", "harris", "--A", a3, "--B", b4], capsys)[0] == 1
    with pytest.raises(SystemExit) as exc:
        main(["check", "--ineq", "no_such_row", "--A", a3])
    assert exc.value.code == 1


def test_hard_failure_exit_2(tmp_path, capsys):
    A = SetFamily.up_closure(3, [0b011, 0b101])
    B = SetFamily.from_masks(3, [0b111])
    a = write(tmp_path, "a.json", family_to_json(A))
    b = write(tmp_path, "b.json", family_to_json(B))
    code, out, _ = run(["check", "--ineq", "gil_dual", "--A", a, "--B", b], capsys)
    assert code == 2 and json.loads(out)["result"]["holds"] is False


def test_resource_limit_exit_3(capsys):
    assert run(["enumerate", "--n", "7", "--count-only"], capsys)[0] == 3
    assert run(["scan", "--n", "7", "--A-class", "increasing", "--B-class", "increasing",
                "--ineq", "harris"], capsys)[0] == 3


def test_enumerate(capsys):
    code, out, _ = run(["enumerate", "--n", "5", "--count-only"], capsys)
    assert code == 0 and out.strip() == "7581"
    code, out, _ = run(["enumerate", "--n", "4", "--class", "maximal-intersecting"], capsys)
    doc = json.loads(out)["result"]
    assert doc["count"] == 12
    fams = [family_from_json({"n": 4, **f}) for f in doc["families"]]
    assert all(F.is_intersecting and F.is_balanced for F in fams)


def test_scan_deterministic(capsys):
    argv = ["scan", "--n", "5", "--A-class", "increasing", "--B-class", "maximal-intersecting",
            "--ineq", "chvatal_equiv", "--budget", "200", "--seed", "4"]
    c1, o1, _ = run(argv, capsys)
    c2, o2, _ = run(argv + ["--jobs", "2"], capsys)
    assert c1 == c2 == 0
    r1, r2 = json.loads(o1)["result"], json.loads(o2)["result"]
    assert r1 == r2 and r1["best"]["num"] == "0"
    assert json.loads(o1)["metadata"]["seed"] == 4


def test_scan_exhaustive_hard_failure_exit_2(capsys):
    code, out, _ = run(["scan", "--n", "3", "--A-class", "increasing", "--B-class", "increasing",
                        "--ineq", "gil_dual"], capsys)
    assert code == 2 and json.loads(out)["result"]["hard_failures"] == 20


def test_flow(tmp_path, capsys):
    f = write(tmp_path, "f.json", family_to_json(majority(5)))
    for scheme in ("max", "average"):
        code, out, _ = run(["flow", "--family", f, "--scheme", scheme, "--kleitman"], capsys)
        res = json.loads(out)["result"]
        assert code == 0 and res["feasible"] is True and res["kleitman"]["feasible"] is True
    notmax = write(tmp_path, "g.json", family_to_json(principal(3, 1) & principal(3, 2)))
    assert run(["flow", "--family", notmax], capsys)[0] == 1


def test_tribes(tmp_path, capsys):
    code, out, _ = run(["tribes", "--r", "2", "--m", "2", "--exact"], capsys)
    res = json.loads(out)["result"]
    assert code == 0 and rational_from_json(res["ratio_balanced"]) == pytest.approx(136 / 189)
    assert res["cor_AB"] == {"num": "17", "den_pow2": 8, "float": 17 / 256}
    csv_path = tmp_path / "sweep.csv"
    code, out, _ = run(["tribes", "--r", "3", "--sweep", "3,4,5", "--csv", str(csv_path)], capsys)
    assert code == 0 and len(json.loads(out)["result"]) == 3
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("r,m,mode") and len(lines) == 4


def test_avg(tmp_path, capsys):
    dicts = [family_to_json(principal(3, i)) for i in (1, 2, 3)]
    p = write(tmp_path, "ens.json", {"families": dicts})
    assert len(load_families(p)) == 3
    code, out, _ = run(["avg", "--families", p, "--ineq", "avg_chvatal", "--t", "1/2"], capsys)
    assert code == 0 and json.loads(out)["result"]["holds"] is True
    code, out, _ = run(["avg", "--families", p, "--ineq", "avg_dream"], capsys)
    assert code == 0


def test_console_script_module():
    proc = subprocess.run([sys.executable, "-m", "hypercorr.cli", "enumerate", "--n", "3",
                           "--count-only"], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.strip() == "20"


def test_report_dumps_sorted():
    doc = to_jsonable(evaluate("harris", majority(3), majority(3)))
    assert dumps(doc) == json.dumps(doc, indent=2, sort_keys=True)
