import csv
import io
import json
from fractions import Fraction

import pytest

from sympinv import cli
from sympinv.forms import parse_form
from sympinv.matrix import SkewMatrix, standard_j
from sympinv.orbit4 import WitnessCertificate, classify
from sympinv.symplectic import SymplecticMatrix, act, random_symplectic

EXAMPLE_FORM = "f1 = x1^2 + y1^2 + t + 1\nf2 = x2^2 + y2^2 + t + 1\n"


@pytest.fixture
def files(tmp_path):
    def write(name, content):
        path = tmp_path / name
        path.write_text(content if isinstance(content, str) else json.dumps(content), encoding="utf-8")
        return str(path)

    return write


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    return code, (json.loads(out) if out else None), err


def test_invariants_of_j(capsys, files):
    code, out, _ = run_json(capsys, "invariants", files("j.json", {"n": 2, "standard": True}))
    assert code == 0
    assert out == {"n": 2, "pfaffian": "1", "sum": "2", "invariants": ["1", "2"]}


def test_invariants_of_pairs(capsys, files):
    path = files("d.json", SkewMatrix.pairs(2, 3).to_json())
    code, out, _ = run_json(capsys, "invariants", path)
    assert out["invariants"] == ["6", "5"]


def test_pfaffian(capsys, files):
    path = files("m.json", SkewMatrix.from_abcdef(2, 3, 5, 7, 11, 13).to_json())
    assert run_json(capsys, "pfaffian", path)[1] == {"n": 2, "pfaffian": "28"}


def test_float_mode_output(capsys, files):
    path = files("m.json", {"n": 1, "upper": [0.5]})
    code, out, _ = run_json(capsys, "invariants", "--mode", "float", path)
    assert code == 0
    assert out["pfaffian"] == 0.5


@pytest.mark.parametrize(
    "content",
    ["{not json", json.dumps({"n": 2, "upper": [1, 2]}), json.dumps({"n": 2, "upper": ["x"] * 6}), json.dumps([1]), json.dumps({"upper": [1]})],
)
def test_parse_errors_exit_2(capsys, files, content):
    code, out, err = run(capsys, "invariants", files("bad.json", content))
    assert code == 2
    assert err.startswith("error:")
    assert out == ""


def test_missing_file_exit_2(capsys, tmp_path):
    assert run(capsys, "invariants", tmp_path / "nope.json")[0] == 2


def test_dimension_limit_exit_3(capsys, files):
    assert run(capsys, "invariants", files("big.json", {"n": 7, "standard": True}))[0] == 3
    assert run(capsys, "classify", files("j3.json", {"n": 3, "standard": True}))[0] == 3


def test_classify(capsys, files):
    code, out, _ = run_json(capsys, "classify", files("m.json", standard_j(2).scaled(-3).to_json()))
    assert (code, out) == (0, {"family": "JMinus", "p": "9"})
    code, out, _ = run_json(capsys, "classify", files("d.json", SkewMatrix.pairs(2, 3).to_json()))
    assert out == {"family": "APlus", "p": "6", "q": "5"}


def test_classify_degenerate_exit_4(capsys, files):
    path = files("s.json", SkewMatrix.from_abcdef(1, 0, 0, 0, 0, 0).to_json())
    code, _, err = run(capsys, "classify", path)
    assert code == 4
    assert "degenerate" in err


def test_witness_round_trip(capsys, files):
    a = SkewMatrix.from_abcdef(1, 2, 3, 4, 5, 6)
    b = act(random_symplectic(2, 9), a)
    code, out, _ = run_json(capsys, "witness", files("a.json", a.to_json()), files("b.json", b.to_json()))
    assert code == 0
    assert out["verified"] is True
    assert out["mode"] == "rational"
    assert len(out["witness"]) == 4 and all(len(r) == 4 for r in out["witness"])
    cert = WitnessCertificate.from_json(out)
    assert cert.verified
    assert act(cert.witness, b) == a


def test_witness_identity_for_multiple_of_j(capsys, files):
    path = files("j2.json", standard_j(2).scaled(2).to_json())
    code, out, _ = run_json(capsys, "witness", path, path)
    assert code == 0
    assert out["witness"] == [["1" if i == j else "0" for j in range(4)] for i in range(4)]


def test_witness_diagonal_forms_exact(capsys, files):
    a = files("a.json", SkewMatrix.pairs(2, 3).to_json())
    b = files("b.json", SkewMatrix.pairs(3, 2).to_json())
    code, out, _ = run_json(capsys, "witness", a, b)
    assert code == 0
    assert (out["mode"], out["verified"]) == ("rational", True)


def test_witness_different_orbit_exit_5(capsys, files):
    a = files("a.json", SkewMatrix.pairs(2, 3).to_json())
    b = files("b.json", SkewMatrix.pairs(6, 1).to_json())
    code, out, err = run(capsys, "witness", a, b)
    assert code == 5
    assert "sum function 5 ≠ 7" in err
    assert out == ""


def test_verify(capsys, files):
    good = files("p.json", random_symplectic(2, 3).to_json())
    assert run_json(capsys, "verify", good)[1] == {"symplectic": True}
    bad = files("q.json", {"rows": [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]})
    assert run_json(capsys, "verify", bad)[1] == {"symplectic": False}
    odd = files("r.json", {"rows": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]})
    assert run(capsys, "verify", odd)[0] == 3


def test_act_with_given_matrix(capsys, files):
    a = SkewMatrix.from_abcdef(1, 0, 0, 2, 0, 3)
    p = random_symplectic(2, 1)
    code, out, _ = run_json(capsys, "act", files("a.json", a.to_json()), "--P", files("p.json", p.to_json()))
    assert code == 0
    assert SkewMatrix.from_json(out) == act(p, a)


def test_act_random_is_reproducible(capsys, files):
    a = files("a.json", SkewMatrix.from_abcdef(1, 2, 3, 4, 5, 6).to_json())
    first = run(capsys, "act", "--seed", 42, a)[1]
    second = run(capsys, "act", "--seed", 42, a)[1]
    other = run(capsys, "act", "--seed", 43, a)[1]
    assert first == second
    assert first != other
    data = json.loads(first)
    p = SymplecticMatrix(tuple(tuple(Fraction(x) for x in r) for r in data["P"]))
    assert SkewMatrix.from_json(data) == act(p, SkewMatrix.from_json(json.loads(open(a).read())))


def test_act_rejects_non_symplectic(capsys, files):
    a = files("a.json", standard_j(2).to_json())
    bad = files("q.json", {"rows": [[2, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]})
    assert run(capsys, "act", a, "--P", bad)[0] == 1


def test_output_to_file_round_trips(capsys, files, tmp_path):
    a = SkewMatrix.from_abcdef(1, 2, 3, 4, 5, 6)
    target = tmp_path / "out.json"
    assert run(capsys, "act", "--seed", 5, "--out", target, files("a.json", a.to_json()))[0] == 0
    moved = SkewMatrix.from_json(json.loads(target.read_text()))
    code, out, _ = run_json(capsys, "classify", target)
    assert out == classify(a).to_json()
    code, out, _ = run_json(capsys, "witness", files("a2.json", a.to_json()), str(target))
    assert out["verified"] and SkewMatrix.from_json(out["target"]) == moved


def test_byte_identical_outputs(capsys, files):
    a = files("a.json", SkewMatrix.from_abcdef(1, 2, 3, 4, 5, 6).to_json())
    b = str(files("b.json", act(random_symplectic(2, 2), SkewMatrix.from_abcdef(1, 2, 3, 4, 5, 6)).to_json()))
    assert run(capsys, "witness", a, b) == run(capsys, "witness", a, b)
    assert run(capsys, "geometry", "sample", "--p", 6, "--q", 5, "--count", 50, "--seed", 3) == run(
        capsys, "geometry", "sample", "--p", 6, "--q", 5, "--count", 50, "--seed", 3
    )


@pytest.mark.parametrize("p, q", [("6", "5"), ("-6", "-1"), ("3", "1")])
def test_geometry_sample_csv(capsys, p, q):
    code, out, _ = run(capsys, "geometry", "sample", "--p", p, "--q", q, "--count", 200, "--seed", 1)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 200
    for row in rows:
        m = SkewMatrix.from_abcdef(*(float(row[k]) for k in "abcdef"))
        label = classify(m)
        scale = max(1.0, *(abs(x) for x in m.abcdef())) ** 2
        assert label.p == pytest.approx(float(Fraction(p)), abs=1e-9 * scale)
        assert label.q == pytest.approx(float(Fraction(q)), abs=1e-9)


def test_geometry_boundary_case_rejected(capsys):
    assert run(capsys, "geometry", "sample", "--p", 4, "--q", 4)[0] == 2


def test_forms_invariants(capsys, files):
    path = files("ex.form", EXAMPLE_FORM)
    code, out, _ = run_json(capsys, "forms", "invariants", "--form", path, "--box=-10,10", "--res", 11)
    assert code == 0
    assert out["inf_m"]["value"] == 1.0
    assert out["approximation"] == "grid"


def test_forms_compare_gap_exit_6(capsys, files):
    path = files("ex.form", EXAMPLE_FORM)
    code, out, _ = run_json(
        capsys, "forms", "compare", "--form", path, "--t", 1, "--t", 0, "--box=-10,10", "--res", 11
    )
    assert code == 6
    assert out["gap_found"] is True
    assert out["gaps"]["inf_m"] == pytest.approx(1.0, abs=1e-9)


def test_forms_compare_same_file_exit_0(capsys, files):
    path = files("ex.form", EXAMPLE_FORM)
    code, out, _ = run_json(capsys, "forms", "compare", "--form", path, "--form", path, "--box=-2,2", "--res", 5)
    assert code == 0
    assert out["gap_found"] is False


def test_forms_vanishing_exit_7(capsys, files):
    path = files("v.form", "f1 = x1\nf2 = 1\n")
    code, _, err = run(capsys, "forms", "invariants", "--form", path, "--box=-1,1", "--res", 3)
    assert code == 7
    assert "f1" in err


def test_forms_parse_error_exit_2(capsys, files):
    path = files("bad.form", "f1 = x1 + * 2\n")
    assert run(capsys, "forms", "invariants", "--form", path, "--box=-1,1", "--res", 3)[0] == 2
    split = files("split.form", "f1 = x2\n")
    assert run(capsys, "forms", "invariants", "--form", split, "--box=-1,1", "--res", 3)[0] == 2
    good = files("good.form", EXAMPLE_FORM)
    assert run(capsys, "forms", "invariants", "--form", good, "--box", "oops", "--res", 3)[0] == 2


def test_form_file_round_trip():
    form = parse_form(EXAMPLE_FORM)
    assert parse_form(form.to_source()) == form


def test_bad_epsilon(capsys, files):
    assert run(capsys, "invariants", "--epsilon", "0", files("j.json", {"n": 1, "standard": True}))[0] == 2


def test_usage_error_is_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["nonsense"])
    assert info.value.code == 2
