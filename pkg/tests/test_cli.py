import json
import subprocess
import sys

import pytest

from ipw import example_path
from ipw.cli import main


def run(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, text, name="p.ipw"):
    path = tmp_path / name
    path.write_text(text)
    return path


def test_validate_ok(capsys):
    code, out, _ = run(capsys, "validate", example_path("so3_origin"))
    assert code == 0 and json.loads(out)["status"] == "ok"


def test_validate_not_submanifold(tmp_path, capsys):
    f = write(tmp_path, "[manifold]\ncoordinates = x1, y1\n[submanifold]\nnormal = y1\n"
                        "[poisson]\nx1,y1 = 1\n")
    code, out, _ = run(capsys, "validate", f)
    body = json.loads(out)
    assert code == 3 and body["error"]["offending"] == ["x1,y1"]


def test_validate_parse_error(tmp_path, capsys):
    f = write(tmp_path, "[manifold]\ncoordinates = x1, x2\n[poisson]\n1,2 = x1 +\n")
    code, out, _ = run(capsys, "validate", f)
    err = json.loads(out)["error"]
    assert code == 1 and err["kind"] == "parse" and err["position"] == 4


def test_validate_not_poisson(tmp_path, capsys):
    f = write(tmp_path, "[manifold]\ncoordinates = x1, x2, x3\n[poisson]\n"
                        "x1,x2 = x3\nx2,x3 = x3\nx1,x3 = x2\n")
    code, _, err = run(capsys, "--format", "text", "validate", f)
    assert code == 2 and "not_poisson" in err


@pytest.mark.parametrize("text", [
    "[manifold]\ncoordinates = x1, x2\n[poisson]\nx2,x1 = 1\n",
    "[manifold]\ncoordinates = x1, x1\n",
    "[manifold]\ndim = 3\ncoordinates = x1, x2\n",
    "[manifold]\ncoordinates = x1\n[submanifold]\nnormal = z\n",
    "[manifold]\ncoordinates = x1, x2\n[options]\nw_max = -1\n",
    "no sections at all",
])
def test_malformed_files(tmp_path, capsys, text):
    code, _, _ = run(capsys, "validate", write(tmp_path, text))
    assert code == 1


def test_missing_file(tmp_path, capsys):
    code, out, _ = run(capsys, "validate", tmp_path / "absent.ipw")
    assert code == 1 and json.loads(out)["error"]["kind"] == "io"


def test_extract_kappa(capsys):
    code, out, _ = run(capsys, "extract", example_path("rank1_curvature"))
    body = json.loads(out)
    assert code == 0
    assert body["data"]["kappa"] == {"x1,x2": {"y1": "1"}}
    assert body["data"]["psi"] == {"x1,x2": "1"}
    assert list(body) == ["input_echo", "data", "pt", "bracket", "cohomology", "verdict"]


def test_verify_pt(capsys):
    code, out, _ = run(capsys, "verify-pt", example_path("rank1_connection"))
    pt = json.loads(out)["pt"]
    assert code == 0 and pt["pt1"] and pt["pt2"] and pt["pt3"]
    assert json.loads(out)["data"]["gamma"] == {"x1,y1": {"y1": "1"}}


def test_bracket(capsys):
    code, out, _ = run(capsys, "bracket", example_path("rank1_curvature"), "x1", "x2")
    assert code == 0 and json.loads(out)["bracket"]["result"] == "1 + y1"
    code, out, _ = run(capsys, "--format", "text", "bracket", example_path("rank1_curvature"),
                       "x1", "x2")
    assert out.strip().endswith("{x1, x2} = 1 + y1")
    code, _, _ = run(capsys, "bracket", example_path("rank1_curvature"), "y1^2", "x2")
    assert code == 1


def test_cohomology_and_theorem1(capsys):
    code, out, _ = run(capsys, "cohomology", example_path("abelian2_point"), "--max-weight", "1")
    body = json.loads(out)
    assert code == 0 and body["cohomology"]["per_weight"]["0"]["h1_direct"]["quotient"] == 4
    code, out, _ = run(capsys, "theorem1", example_path("so3_origin"), "--max-weight", "3")
    verdict = json.loads(out)["verdict"]["verdict"]
    assert code == 0
    assert verdict == "trivial: conditions (i)(ii)(iii) hold; H1 = 0 (verified directly)"
    code, out, _ = run(capsys, "theorem1", example_path("so3_origin"), "--format", "text")
    assert "verdict: trivial" in out


def test_internal_inconsistency_exit_code(capsys, monkeypatch):
    from ipw import cli, cohomology

    def boom(data, w):
        raise cohomology.TheoremViolation("criterion passed but H1 is nonzero")

    monkeypatch.setattr(cli, "theorem1_check", boom)
    code, out, _ = run(capsys, "theorem1", example_path("so3_origin"), "--max-weight", "0")
    assert code == 4 and json.loads(out)["error"]["kind"] == "internal"


def test_console_script_is_byte_stable():
    cmd = [sys.executable, "-m", "ipw.cli", "theorem1", str(example_path("sl2_origin")),
           "--max-weight", "2", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a
