import json

import pytest

from symcubic.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_legal_type_b(capsys):
    code, out, _ = run(capsys, "legal", "5/48", "7/48")
    assert code == 0 and out.strip() == "legal, type B, period 4"


def test_legal_with_witness(capsys):
    code, out, _ = run(capsys, "legal", "1/48", "2/48")
    assert code == 1
    assert out.strip().startswith("illegal") and "witness" in out


def test_legal_json(capsys):
    code, out, _ = run(capsys, "--format", "json", "legal", "5/48", "7/48")
    assert code == 0 and json.loads(out)["type"] == "B"
    code, out, _ = run(capsys, "legal", "1/48", "2/48", "--format", "json")
    data = json.loads(out)
    assert code == 1 and data["legal"] is False and len(data["witness"]) == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "5/48", "7/48")
    assert code == 0 and out.strip() == "legal, type B, periodic major {7/16, 13/16}, gap period 4"
    code, out, _ = run(capsys, "classify", "7/78", "4/39")
    assert out.strip().startswith("legal, type D") and "gap period 3" in out


def test_classify_illegal_exits_1(capsys):
    code, _, _ = run(capsys, "classify", "1/48", "2/48")
    assert code == 1


def test_usage_errors(capsys):
    assert run(capsys, "legal", "5/48")[0] == 2
    assert run(capsys, "legal", "a", "b")[0] == 2
    assert run(capsys, "nosuch")[0] == 2
    assert run(capsys, "atlas", "--max-period", "3", "--bogus")[0] == 2
    assert run(capsys, "ray")[0] == 2
    assert run(capsys, "verify-landing", "5/48")[0] == 2
    assert run(capsys, "root", "1/6", "1/3")[0] == 2


def test_atlas_out(capsys, tmp_path):
    path = tmp_path / "a.json"
    code, out, _ = run(capsys, "atlas", "--max-period", "4", "--out", str(path))
    assert code == 0 and out.startswith("80 comajors")
    data = json.loads(path.read_text())
    from symcubic.comajor import Atlas, enumerate_comajors
    assert Atlas.from_json(data) == enumerate_comajors(4)


def test_lam_outputs(capsys, tmp_path):
    svg, js = tmp_path / "l.svg", tmp_path / "l.json"
    code, out, _ = run(capsys, "lam", "7/78", "4/39", "--depth", "3", "--svg", str(svg), "--json", str(js))
    assert code == 0 and "critical gap" in out
    assert svg.read_text().startswith("<?xml") and json.loads(js.read_text())


def test_maingap(capsys):
    code, out, _ = run(capsys, "maingap", "1/4")
    assert code == 0 and "{17/48, 19/48}" in out
    assert run(capsys, "maingap", "5/4")[0] == 2


def test_induce(capsys):
    code, out, _ = run(capsys, "induce", "1/6", "1/3", "--quad", "1/3", "2/3", "--depth", "6")
    assert code == 0 and out.startswith("{5/24, 7/24}") and "legal" in out


def test_ray(capsys, tmp_path):
    csv = tmp_path / "r.csv"
    code, out, _ = run(capsys, "ray", "--param", "1/4", "--pot-end", "1e-3", "--csv", str(csv))
    assert code == 0 and "parameter ray 1/4" in out
    assert csv.read_text().startswith("potential,re,im")
    code, out, _ = run(capsys, "--format", "json", "ray", "--dyn", "0.3,0", "0")
    assert code == 0 and json.loads(out)["landed_estimate"]["re"] == pytest.approx(1.12694, abs=1e-4)


def test_ray_failure_reports_last_value(capsys):
    code, out, err = run(capsys, "ray", "--param", "1/36", "--log-pot-end", "200")
    assert code == 1 and "last good value" in (out + err)


def test_center_and_root(capsys):
    code, out, _ = run(capsys, "center", "5/48", "7/48")
    assert code == 0 and "0.43283" in out
    code, out, _ = run(capsys, "--format", "json", "root", "7/78", "4/39")
    data = json.loads(out)
    assert data["root"]["re"] == pytest.approx(0.5, abs=1e-9)


def test_verify_landing_class(capsys):
    code, out, _ = run(capsys, "verify-landing", "--class", "1/36")
    assert code == 0 and "PASS" in out


def test_renders(capsys, tmp_path):
    png = tmp_path / "p.png"
    code, out, _ = run(capsys, "param-render", "--pixels", "48", "--max-iter", "100", "--out", str(png))
    assert code == 0 and png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    png2 = tmp_path / "j.png"
    code, _, _ = run(capsys, "julia-render", "--c", "0.3,0", "--pixels", "32", "--max-iter", "100",
                     "--rays", "0", "--out", str(png2))
    assert code == 0 and png2.exists()


def test_help_documents_env(capsys):
    assert main(["ray", "--help"]) == 0
    assert "SYMCUBIC_NEWTON_TOL" in capsys.readouterr().out


@pytest.mark.slow
def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest")
    assert code == 0 and "all 9 checks passed" in out
