import json
from fractions import Fraction as F

from circflow.coloring import GraphClass
from circflow.flows import Budget
from circflow.graph import from_edges
from circflow.harness import (
    AnalyzeOptions,
    _jsonable,
    analyze,
    conjecture_checks,
    format_table,
    phi_estimate,
    scan_catalog,
)
from conftest import DATA


def test_analyze_petersen(petersen):
    rep = analyze(petersen, graph_id="petersen")
    assert rep.graph_class is GraphClass.CLASS2
    assert rep.chi == 4 and rep.fc == 5 and rep.fc_exact
    assert rep.has_bipartizing_factor is False
    assert rep.t_graph is True and rep.t == 1
    assert rep.fc_refused == F(49, 10)  # ladder predecessor of 5 at Q = 10
    assert any("no balanced Jaeger valuation at 49/10" in note for note in rep.valuation_notes)
    assert rep.inconsistencies == []
    assert any("balanced" in note for note in rep.valuation_notes)


def test_analyze_glued(glued):
    rep = analyze(glued)
    assert rep.odd_cut == {"vertices": [0, 2, 3], "size": 3}
    assert rep.graph_class is GraphClass.CLASS2 and rep.chi is None
    assert (rep.chi_lower, rep.chi_upper) == (6, 9)
    assert rep.fc == 3 and rep.inconsistencies == []


def test_analyze_bridge():
    G = from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    rep = analyze(G)
    assert rep.fc is None and rep.fc_status == "undefined-bridge"


def test_analyze_budget_lower_bound(petersen):
    rep = analyze(petersen, AnalyzeOptions(budget=Budget(nodes=2)))
    assert not rep.fc_exact and rep.fc_status == "lower-bound-only"
    assert rep.graph_class is GraphClass.UNKNOWN


def test_report_json_rationals(petersen):
    d = analyze(petersen).to_json()
    assert d["fc"] == {"num": 5, "den": 1}
    assert "seconds" not in d
    json.dumps(d)
    assert _jsonable({"x": (F(1, 2), {1, 0})}) == {"x": [{"num": 1, "den": 2}, [0, 1]]}


def test_timings_opt_in(k4):
    assert analyze(k4, AnalyzeOptions(timings=True)).seconds is not None


def test_scan_cubic():
    res = scan_catalog(DATA / "cubic", 1)
    assert len(res.reports) == 26
    assert [s.graph_id for s in res.skipped] == ["cubic_n10#7"]
    assert all(r.inconsistencies == [] for r in res.reports)
    class2 = [r for r in res.reports if r.graph_class is GraphClass.CLASS2]
    assert len(class2) == 1 and class2[0].fc == 5
    assert res.phi.value == 5 and res.phi.witness == class2[0].graph_id
    f = res.findings
    assert f["class2_below_gap"] == [] and f["class1_above_upper"] == []


def test_scan_t2_pair():
    res = scan_catalog(DATA / "t2", 2)
    pairs = res.findings["equal_fc_class_pairs"]
    assert pairs == [{"fc": F(3), "class1": ["k6"], "class2": ["glue_k2_3"]}]
    text = format_table(res)
    assert "class1/class2 pair at F_c = 3" in text


def test_scan_skips_unreadable(tmp_path):
    (tmp_path / "bad.mg").write_text("mg 2\n0 5\n")
    (tmp_path / "ok.mg").write_text("mg 2\n0 1\n0 1\n0 1\n")
    res = scan_catalog(tmp_path, 1)
    assert [s.graph_id for s in res.skipped] == ["bad"]
    assert "unreadable" in res.skipped[0].reason
    assert [r.graph_id for r in res.reports] == ["ok"]


def test_scan_json_deterministic():
    a = scan_catalog(DATA / "cubic", 1).dumps()
    b = scan_catalog(DATA / "cubic", 1).dumps()
    assert a == b
    top = json.loads(a)
    assert set(top) == {"tool_version", "options", "reports", "skipped", "summary"}
    assert {"phi_estimate", "conjecture_findings"} <= set(top["summary"])


def test_phi_estimate_empty():
    assert phi_estimate([], 1).value is None


def test_conjecture_checks_empty():
    f = conjecture_checks([], 2)
    assert f["interval"] == {"open_low": F(8, 3), "closed_high": F(3)}
