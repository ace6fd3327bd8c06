import io
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from fibercavity import cli

DATA = Path(__file__).parent / "data"
ERROR_LINE = re.compile(r"^E_[A-Z]+: \S.*$")


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_fsr_three_significant_figures():
    assert run("fsr", "--neff", "1.41", "--length-mm", "20.5") == (0, "5.19\n", "")


def test_help_exits_zero(capsys):
    code, _, _ = run("--help")
    assert code == 0
    assert "usage: fibercavity" in capsys.readouterr().out


def test_module_entry_point_help():
    proc = subprocess.run([sys.executable, "-m", "fibercavity", "--help"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    for cmd in ("modes", "fsr", "spectrum", "qsweep", "design-sweep", "optimal-diameter",
                "analyze-scan", "table1"):
        assert cmd in proc.stdout


def test_table1_rows():
    code, out, _ = run("table1")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "fiber,beta_um_inv,n_eff,fsr_ghz"
    rows = {ln.split(",")[0]: [float(v) for v in ln.split(",")[1:]] for ln in lines[1:]}
    beta, neff, fsr = rows["SMF830"]
    assert beta == pytest.approx(11.74, abs=0.01)
    assert neff == pytest.approx(1.45, abs=0.005)
    assert fsr == pytest.approx(5.03, abs=0.02)
    beta, neff, fsr = rows["Holey Fiber"]
    assert beta == pytest.approx(11.38, abs=0.02)
    assert neff == pytest.approx(1.41, abs=0.005)
    assert fsr == pytest.approx(5.19, abs=0.02)


def test_modes_csv_and_json():
    code, out, _ = run("modes")
    assert code == 0
    lines = out.splitlines()
    assert lines[0].startswith("name,family,l,m,n_eff")
    assert lines[1].startswith("HE11,HE,1,1,")
    assert len(lines) > 2
    code, out, _ = run("modes", "--diameter-um", "0.44", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert [m["name"] for m in doc] == ["HE11"]


def test_spectrum_and_qsweep():
    code, out, _ = run("spectrum", "--points", "50")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "detuning_ghz,transmission"
    assert len(lines) == 51
    code, out, _ = run("qsweep", "--neff", "1.41", "--loss-points", "3")
    assert code == 0
    body = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert body[0] == "reflectivity,loss,q"
    assert len(body) == 1 + 3 * 3
    assert any(ln.startswith("#") for ln in out.splitlines())


def test_design_commands():
    code, out, _ = run("design-sweep", "--min-nm", "400", "--max-nm", "500", "--points", "3")
    assert code == 0
    assert "diameter_nm,mode_volume_um3,air_fraction" in out.splitlines()
    code, out, _ = run("optimal-diameter")
    assert code == 0
    d = float(out.splitlines()[-1].split(",")[0])
    assert d == pytest.approx(440.0, abs=20.0)
    code, _, err = run("optimal-diameter", "--min-nm", "600", "--max-nm", "1200")
    assert code == 1
    assert err.startswith("E_BRACKET: ")


def test_analyze_scan(tmp_path):
    code, out, _ = run("analyze-scan", str(DATA / "holey_scan_fsr5p15.csv"))
    assert code == 0
    trailer = [ln for ln in out.splitlines() if ln.startswith("# fsr_mean_ghz=")]
    assert float(trailer[0].split("=")[1]) == pytest.approx(5.15, abs=0.01)
    code, out, _ = run("analyze-scan", str(DATA / "holey_scan_fsr5p15.csv"), "--format", "json")
    assert json.loads(out)["fsr_mean_ghz"] == pytest.approx(5.15, abs=0.01)
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n1,x\n")
    code, _, err = run("analyze-scan", str(bad))
    assert code == 1
    assert err.startswith("E_PARSE: ") and "line 2" in err


def test_out_redirects(tmp_path):
    target = tmp_path / "t1.csv"
    code, out, _ = run("--out", str(target), "table1")
    assert code == 0 and out == ""
    assert target.read_bytes() == run("table1")[1].encode()
    assert b"\r" not in target.read_bytes()


@pytest.mark.parametrize("argv,code", [
    (["bogus"], 2),
    (["fsr"], 2),
    (["fsr", "--neff", "1.41", "--frobnicate"], 2),
    (["fsr", "--neff", "abc"], 2),
    (["fsr", "--neff", "1.41", "--length-mm", "-1"], 2),
    (["modes", "--wavelength-um", "5.0"], 2),
    (["spectrum", "--r1", "1.5"], 2),
    (["analyze-scan", "/nonexistent/scan.csv"], 2),
    ([], 2),
])
def test_error_paths(argv, code):
    got, out, err = run(*argv)
    assert got == code
    assert out == ""
    lines = err.splitlines()
    assert len(lines) == 1 and ERROR_LINE.match(lines[0]), err


def test_every_error_is_single_prefixed_line():
    for argv in (["fsr", "--neff", "0.5"], ["design-sweep", "--min-nm", "10"]):
        code, _, err = run(*argv)
        assert code == 2
        assert len(err.splitlines()) == 1 and ERROR_LINE.match(err), err


def test_deterministic_output():
    for argv in (["table1"], ["modes"], ["spectrum", "--points", "200"], ["qsweep", "--neff", "1.4"]):
        assert run(*argv) == run(*argv)
