"""Per-graph analysis, catalog scans, Phi estimates and conjecture checks."""
from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

from . import __version__
from .coloring import GraphClass, bipartizing_one_factor, chromatic_index, classify, is_proper
from .flows import Budget, FcStatus, Verdict, circular_flow_number, has_nwz_flow, verify_flow
from .graph import (
    Multigraph,
    ScanLimitExceeded,
    bridges,
    max_degree,
    max_multiplicity,
    odd_cut_obstruction,
    regular_degree,
    two_coloring,
)
from .io import GraphFormatError, read_graphs
from .valuations import REFUTE_LIMIT, CorrespondenceError, flow_to_valuation, refute_flow_by_valuation


@dataclass
class AnalyzeOptions:
    denom_bound: int | None = None
    budget: Budget = field(default_factory=Budget)
    flow: bool = True
    coloring: bool = True
    bipartizing: bool = True
    odd_cut: bool = True
    valuations: bool = True
    timings: bool = False
    method: str = "orientation"

    def to_json(self) -> dict:
        return {
            "denom_bound": self.denom_bound,
            "budget_nodes": self.budget.nodes,
            "budget_seconds": self.budget.seconds,
            "flow": self.flow,
            "coloring": self.coloring,
            "bipartizing": self.bipartizing,
            "odd_cut": self.odd_cut,
            "valuations": self.valuations,
            "method": self.method,
        }


@dataclass
class AnalysisReport:
    graph_id: str
    source: str
    n: int
    m: int
    regular_degree: int | None
    bipartite: bool
    bridgeless: bool
    graph_class: GraphClass = GraphClass.UNKNOWN
    chi: int | None = None
    chi_lower: int | None = None
    chi_upper: int | None = None
    fc: Fraction | None = None
    fc_status: str | None = None
    fc_denominator_bound: int | None = None
    fc_refused: Fraction | None = None
    bipartizing_factor: tuple[int, ...] | None = None
    has_bipartizing_factor: bool | None = None
    odd_cut: dict | None = None
    t_graph: bool | None = None
    valuation_notes: list[str] = field(default_factory=list)
    flow_nodes: int = 0
    color_nodes: int = 0
    seconds: float | None = None
    inconsistencies: list[str] = field(default_factory=list)

    @property
    def t(self) -> int | None:
        r = self.regular_degree
        return (r - 1) // 2 if r is not None and r % 2 == 1 else None

    @property
    def fc_exact(self) -> bool:
        return self.fc_status == FcStatus.EXACT.value and self.fc is not None

    def to_json(self) -> dict:
        d = asdict(self)
        d["graph_class"] = self.graph_class.value
        if d["seconds"] is None:
            del d["seconds"]
        if self.bipartizing_factor is not None:
            d["bipartizing_factor"] = list(self.bipartizing_factor)
        return _jsonable(d)


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return {"num": x.numerator, "den": x.denominator}
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (set, frozenset)):
        return sorted(x)
    return x


def analyze(G: Multigraph, options: AnalyzeOptions | None = None, graph_id: str = "G", source: str = "") -> AnalysisReport:
    opts = options or AnalyzeOptions()
    start = time.perf_counter()
    r = regular_degree(G)
    rep = AnalysisReport(
        graph_id, source, G.n, G.m, r, two_coloring(G)[0] is not None, not bridges(G)
    )
    odd_regular = r is not None and r % 2 == 1

    if opts.odd_cut and odd_regular:
        try:
            obs = odd_cut_obstruction(G)
        except ScanLimitExceeded:
            rep.valuation_notes.append("odd-cut scan not attempted (too many vertices)")
        else:
            rep.t_graph = obs is None
            if obs is not None:
                rep.odd_cut = {"vertices": sorted(obs.vertices), "size": obs.size}

    if opts.coloring:
        cls = classify(G, opts.budget) if rep.odd_cut is None else None
        if cls is None or cls.method == "odd-cut":
            rep.graph_class = GraphClass.CLASS2
            rep.chi_lower, rep.chi_upper = max_degree(G) + 1, max_degree(G) + max_multiplicity(G)
        else:
            chi = cls.chromatic
            rep.graph_class = cls.graph_class
            rep.color_nodes = chi.nodes
            rep.chi_lower, rep.chi_upper, rep.chi = chi.lower, chi.upper, chi.value
            if chi.exact and not is_proper(G, chi.coloring):
                rep.inconsistencies.append("edge colouring certificate is not proper")

    if opts.bipartizing and odd_regular:
        found = bipartizing_one_factor(G)
        rep.has_bipartizing_factor = found is not None
        rep.bipartizing_factor = found[0] if found else None

    witness = None
    if opts.flow and rep.bridgeless:
        res = circular_flow_number(G, opts.denom_bound, opts.budget, opts.method)
        rep.fc, rep.fc_status, rep.fc_denominator_bound = res.value, res.status.value, res.denominator_bound
        rep.flow_nodes = res.nodes
        if res.status is FcStatus.LOWER_BOUND:
            rep.fc_refused = res.largest_refuted
        elif res.status is FcStatus.EXACT:
            rep.fc_refused = res.refusal.r if res.refusal is not None else None
            witness = res.witness
            if witness is not None and not verify_flow(G, witness):
                rep.inconsistencies.append("flow witness fails verification")
    elif opts.flow:
        rep.fc_status = FcStatus.BRIDGE.value

    if opts.valuations and witness is not None:
        _valuation_checks(G, rep, witness)

    _theorem_checks(rep)
    if opts.timings:
        rep.seconds = round(time.perf_counter() - start, 3)
    return rep


def _valuation_checks(G: Multigraph, rep: AnalysisReport, witness) -> None:
    if rep.fc > 2:
        try:
            flow_to_valuation(G, witness)
            rep.valuation_notes.append(f"witness flow at {rep.fc} gives a balanced valuation")
        except CorrespondenceError as exc:
            rep.inconsistencies.append(f"flow_to_valuation: {exc}")
    if G.n > REFUTE_LIMIT:
        rep.valuation_notes.append("valuation refutation skipped (too many vertices)")
        return
    if rep.fc > 2 and refute_flow_by_valuation(G, rep.fc).refuted:
        rep.inconsistencies.append(f"valuations refute a flow at {rep.fc} although one was found")
    if rep.fc_refused is not None and rep.fc_refused > 2:
        if refute_flow_by_valuation(G, rep.fc_refused).refuted:
            rep.valuation_notes.append(f"no balanced Jaeger valuation at {rep.fc_refused}")
        else:
            rep.inconsistencies.append(f"balanced Jaeger valuation exists at refused {rep.fc_refused}")


def _theorem_checks(rep: AnalysisReport) -> None:
    t = rep.t
    flag = rep.inconsistencies.append
    if rep.odd_cut is not None and rep.graph_class is GraphClass.CLASS1:
        flag("odd-cut obstruction but class 1")
    if rep.has_bipartizing_factor and rep.graph_class is GraphClass.CLASS2:
        flag("bipartizing 1-factor but class 2")
    if t is None or t < 1 or not rep.fc_exact:
        return
    fc, Q = rep.fc, rep.fc_denominator_bound
    gap = 2 + Fraction(2, 2 * t - 1)
    if rep.bipartite:
        expected = 2 + Fraction(1, t)
        if expected.denominator <= Q and fc != expected:
            flag(f"bipartite {2 * t + 1}-regular but F_c = {fc} != {expected}")
    elif fc < gap:
        flag(f"non-bipartite but F_c = {fc} < {gap}")
    if rep.has_bipartizing_factor is not None and rep.has_bipartizing_factor != (fc <= gap):
        flag(f"bipartizing 1-factor {'found' if rep.has_bipartizing_factor else 'absent'} but F_c = {fc}")
    if fc <= gap and rep.graph_class is GraphClass.CLASS2:
        flag(f"F_c = {fc} <= {gap} but class 2")
    if t == 1 and rep.graph_class is not GraphClass.UNKNOWN:
        if (rep.graph_class is GraphClass.CLASS1) != (fc <= 4):
            flag(f"cubic {rep.graph_class.value} with F_c = {fc}")


# ---------------------------------------------------------------- scanning


@dataclass
class SkipRecord:
    graph_id: str
    source: str
    reason: str


@dataclass
class PhiEstimate:
    t: int
    value: Fraction | None
    witness: str | None
    note: str


@dataclass
class ScanResult:
    t: int
    options: AnalyzeOptions
    reports: list[AnalysisReport]
    skipped: list[SkipRecord]
    phi: PhiEstimate
    findings: dict

    def to_json(self) -> dict:
        return {
            "tool_version": __version__,
            "options": {"t": self.t, **self.options.to_json()},
            "reports": [r.to_json() for r in self.reports],
            "skipped": [asdict(s) for s in self.skipped],
            "summary": {
                "phi_estimate": _jsonable(asdict(self.phi)),
                "conjecture_findings": _jsonable(self.findings),
                "analyzed": len(self.reports),
                "skipped": len(self.skipped),
                "inconsistencies": sum(len(r.inconsistencies) for r in self.reports),
            },
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"


def iter_catalog(path: str | Path) -> Iterable[tuple[str, str, Multigraph | None, str | None]]:
    """``(graph_id, source, graph or None, error)`` for every graph, by filename."""
    path = Path(path)
    files = [path] if path.is_file() else sorted(p for p in path.iterdir() if p.suffix in (".mg", ".g6"))
    for f in files:
        try:
            graphs = read_graphs(f)
        except (OSError, UnicodeDecodeError, GraphFormatError, ValueError) as exc:
            yield f.stem, f.name, None, f"unreadable: {exc}"
            continue
        for gid, G in graphs:
            yield gid, f.name, G, None


def scan_catalog(
    path: str | Path, t: int, options: AnalyzeOptions | None = None, recheck: bool = True
) -> ScanResult:
    opts = options or AnalyzeOptions()
    reports, skipped, graphs = [], [], {}
    for gid, src, G, err in iter_catalog(path):
        if G is None:
            skipped.append(SkipRecord(gid, src, err))
        elif regular_degree(G) != 2 * t + 1:
            skipped.append(SkipRecord(gid, src, f"not {2 * t + 1}-regular"))
        elif bridges(G):
            skipped.append(SkipRecord(gid, src, "has a bridge"))
        else:
            reports.append(analyze(G, opts, gid, src))
            graphs[gid] = G
    findings = conjecture_checks(reports, t, graphs if recheck else None, opts.budget)
    return ScanResult(t, opts, reports, skipped, phi_estimate(reports, t), findings)


def phi_estimate(reports: list[AnalysisReport], t: int) -> PhiEstimate:
    """Smallest exact F_c among class-2 (2t+1)-regular reports: an upper
    bound for Phi(2t+1) on this catalog only, not the infimum."""
    pool = [r for r in reports if r.regular_degree == 2 * t + 1 and r.graph_class is GraphClass.CLASS2 and r.fc_exact]
    note = "upper bound on the infimum over class-2 graphs, restricted to this catalog"
    if not pool:
        return PhiEstimate(t, None, None, "no class-2 member with exact F_c; " + note)
    best = min(pool, key=lambda r: r.fc)
    return PhiEstimate(t, best.fc, best.graph_id, f"{len(pool)} class-2 members; " + note)


def conjecture_checks(
    reports: list[AnalysisReport], t: int, graphs: dict | None = None, budget: Budget | None = None
) -> dict:
    gap = 2 + Fraction(2, 2 * t - 1)
    upper = 2 + Fraction(2, t)
    exact = [r for r in reports if r.fc_exact and r.graph_class is not GraphClass.UNKNOWN]
    excluded = sorted(r.graph_id for r in reports if r not in exact)

    below_gap = [r.graph_id for r in exact if r.graph_class is GraphClass.CLASS2 and r.fc < gap]
    class1_above = []
    for r in exact:
        if r.graph_class is GraphClass.CLASS1 and r.fc > upper:
            entry = {"graph_id": r.graph_id, "fc": r.fc}
            if graphs and r.graph_id in graphs:
                G = graphs[r.graph_id]
                chi = chromatic_index(G, budget)
                again = has_nwz_flow(G, upper, budget)
                entry["confirmed"] = chi.value == max_degree(G) and again.verdict is Verdict.NO
            class1_above.append(entry)
    t_graph_above = [
        {"graph_id": r.graph_id, "fc": r.fc} for r in exact if t > 1 and r.t_graph and r.fc > upper
    ]
    by_value: dict[Fraction, dict[str, list[str]]] = {}
    for r in exact:
        if gap < r.fc <= upper:
            slot = by_value.setdefault(r.fc, {"class1": [], "class2": []})
            slot["class1" if r.graph_class is GraphClass.CLASS1 else "class2"].append(r.graph_id)
    pairs = [
        {"fc": v, "class1": slot["class1"], "class2": slot["class2"]}
        for v, slot in sorted(by_value.items())
        if slot["class1"] and slot["class2"]
    ]
    return {
        "t": t,
        "interval": {"open_low": gap, "closed_high": upper},
        "class2_below_gap": below_gap,
        "class1_above_upper": class1_above,
        "t_graphs_above_upper": t_graph_above,
        "equal_fc_class_pairs": pairs,
        "excluded_inexact": excluded,
    }


def format_table(result: ScanResult) -> str:
    head = f"{'graph':<20} {'n':>3} {'m':>4} {'bip':>4} {'class':>7} {'chi':>4} {'F_c':>7} {'factor':>7} {'flags':>5}"
    lines = [head, "-" * len(head)]
    for r in result.reports:
        fc = str(r.fc) if r.fc is not None else "?"
        factor = "-" if r.has_bipartizing_factor is None else ("yes" if r.has_bipartizing_factor else "no")
        lines.append(
            f"{r.graph_id:<20} {r.n:>3} {r.m:>4} {('yes' if r.bipartite else 'no'):>4} "
            f"{r.graph_class.value:>7} {str(r.chi or '?'):>4} {fc:>7} {factor:>7} {len(r.inconsistencies):>5}"
        )
    for s in result.skipped:
        lines.append(f"{s.graph_id:<20} skipped: {s.reason}")
    phi = result.phi
    lines.append(f"Phi({2 * result.t + 1}) estimate: {phi.value if phi.value is not None else 'none'}"
                 + (f" (witness {phi.witness})" if phi.witness else ""))
    pairs = result.findings["equal_fc_class_pairs"]
    for p in pairs:
        lines.append(f"class1/class2 pair at F_c = {p['fc']}: class1 {p['class1']} / class2 {p['class2']}")
    return "\n".join(lines) + "\n"
