import json
import subprocess
import sys

import pytest

from circflow.cli import main
from circflow.flows import parse_certificate, verify_flow
from circflow.io import parse_multigraph
from conftest import DATA


@pytest.fixture
def k2_5(tmp_path):
    p = tmp_path / "k2_5.mg"
    p.write_text("mg 2\n" + "0 1\n" * 5)
    return p


@pytest.fixture
def petersen_file():
    from importlib import resources

    return str(resources.files("circflow").joinpath("data/petersen.mg"))


def run(argv, capsys):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_fc_text(k2_5, capsys):
    code, out = run(["fc", k2_5], capsys)
    assert code == 0
    assert out.out.startswith("F_c = 5/2 (exact-within-bound, Q=2)")


def test_fc_json_and_certificate(petersen_file, capsys):
    code, out = run(["fc", petersen_file, "--json"], capsys)
    d = json.loads(out.out)
    assert code == 0 and d["fc"] == {"num": 5, "den": 1} and d["refused"] == {"num": 49, "den": 10}
    code, out = run(["fc", petersen_file, "--certificate"], capsys)
    cert = parse_certificate(out.out[out.out.index("flow r="):])
    G = parse_multigraph(open(petersen_file).read())
    assert verify_flow(G, cert)


def test_fc_budget_exit(petersen_file, capsys):
    code, out = run(["fc", petersen_file, "--budget", "1"], capsys)
    assert code == 4 and "lower-bound-only" in out.out


def test_decide(k2_5, capsys):
    assert run(["decide", k2_5, "--r", "5/2"], capsys)[1].out.startswith("yes")
    assert run(["decide", k2_5, "--r", "7/3"], capsys)[1].out == "no\n"


def test_chi_and_classify(petersen_file, capsys):
    code, out = run(["chi", petersen_file], capsys)
    assert code == 0 and out.out.startswith("chi' = 4\n")
    code, out = run(["classify", petersen_file, "--json"], capsys)
    assert json.loads(out.out)["class"] == "class2"


def test_bipartizing(k2_5, petersen_file, capsys):
    assert run(["bipartizing", petersen_file], capsys)[1].out == "none\n"
    assert run(["bipartizing", k2_5], capsys)[1].out == "matching: 0\n"


def test_valuation_and_refute(k2_5, tmp_path, capsys):
    w = tmp_path / "w.txt"
    w.write_text("0 5/1\n1 -5/1\n")
    for method in ("brute", "mincut"):
        assert run(["valuation", k2_5, "--weights", w, "--method", method], capsys)[1].out == "balanced\n"
    w.write_text("0 6\n1 -6\n")
    out = run(["valuation", k2_5, "--weights", w], capsys)[1].out
    assert out.startswith("violated at X = ")
    assert run(["refute", k2_5, "--r", "7/3"], capsys)[1].out == "refuted\n"
    assert run(["refute", k2_5, "--r", "5/2"], capsys)[1].out == "not-refuted\n"


def test_construct_writes_sidecar(tmp_path, capsys):
    out = tmp_path / "p5.mg"
    assert run(["construct", "petersen-family", "--t", "2", "-o", out], capsys)[0] == 0
    G = parse_multigraph(out.read_text())
    assert (G.n, G.m) == (10, 25)
    side = json.loads(out.with_suffix(".json").read_text())
    assert side["t"] == 2 and len(side["a"]) == 5 and len(side["matching"]) == 5

    base = tmp_path / "base.mg"
    base.write_text("mg 2\n0 1\n0 1\n0 1\n")
    glued = tmp_path / "glued.mg"
    assert run(["construct", "glue", "--t", "2", "--base", base, "-o", glued], capsys)[0] == 0
    assert json.loads(glued.with_suffix(".json").read_text())["gadgets"][0] == {"u": 2, "v": 3, "x": 0}


def test_construct_glue_needs_base(tmp_path, capsys):
    code, out = run(["construct", "glue", "--t", "2", "-o", tmp_path / "x.mg"], capsys)
    assert code == 2 and "--base" in out.err


@pytest.mark.parametrize(
    "argv",
    [["fc", "/nonexistent.mg"], ["decide", "{bad}", "--r", "3"]],
)
def test_input_errors_exit_3(argv, tmp_path, capsys):
    bad = tmp_path / "bad.mg"
    bad.write_text("mg 2\n0 0\n")
    argv = [str(bad) if a == "{bad}" else a for a in argv]
    code, out = run(argv, capsys)
    assert code == 3 and "error" in out.err


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as info:
        main(["decide", "x.mg", "--r", "notanumber"])
    assert info.value.code == 2
    with pytest.raises(SystemExit) as info:
        main([])
    assert info.value.code == 2


def test_scan_report(tmp_path, capsys):
    report = tmp_path / "r.json"
    code, out = run(["scan", DATA / "t2", "--t", "2", "--report", report], capsys)
    assert code == 0 and "class1/class2 pair" in out.out
    d = json.loads(report.read_text())
    assert d["summary"]["conjecture_findings"]["equal_fc_class_pairs"][0]["fc"] == {"num": 3, "den": 1}


def test_scan_subprocess_bytes_identical(tmp_path):
    outs = []
    for i in range(2):
        report = tmp_path / f"r{i}.json"
        subprocess.run(
            [sys.executable, "-m", "circflow.cli", "scan", str(DATA / "cubic"), "--t", "1", "--report", str(report)],
            check=True, capture_output=True,
        )
        outs.append(report.read_bytes())
    assert outs[0] == outs[1]
