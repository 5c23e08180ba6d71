"""Command-line front end: ``circflow <command> ...``.

Exit codes: 0 success, 2 usage error, 3 input error, 4 budget exhausted.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import __version__
from .coloring import bipartizing_one_factor, chromatic_index, classify, format_coloring, format_matching
from .constructions import attach_h_gadgets, h_gadget, k2_multi, petersen_data, petersen_family
from .flows import Budget, FcStatus, Verdict, circular_flow_number, format_certificate, has_nwz_flow
from .graph import CircflowError
from .harness import AnalyzeOptions, _jsonable, format_table, scan_catalog
from .io import read_graph, serialize
from .valuations import is_balanced_brute, is_balanced_mincut, parse_valuation, refute_flow_by_valuation

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 2, 3, 4


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational: {text!r}") from None


def _budget(args) -> Budget:
    return Budget(nodes=args.budget, seconds=args.seconds)


def _emit(args, payload: dict, text: str) -> None:
    if getattr(args, "json", False):
        print(json.dumps(_jsonable(payload), indent=2, sort_keys=True))
    else:
        sys.stdout.write(text)


def cmd_fc(args) -> int:
    G = read_graph(args.file)
    res = circular_flow_number(G, args.denom_bound, _budget(args), args.method)
    payload = {
        "fc": res.value,
        "status": res.status.value,
        "denominator_bound": res.denominator_bound,
        "refused": res.refusal.r if res.refusal is not None else None,
        "largest_refuted": res.largest_refuted,
        "nodes": res.nodes,
        "witness": list(res.witness.values) if res.witness else None,
    }
    text = f"F_c = {res.value} ({res.status.value}, Q={res.denominator_bound})\n"
    if res.status is FcStatus.EXACT and res.refusal is not None:
        text += f"refused: {res.refusal.r}\n"
    if res.status is FcStatus.LOWER_BOUND:
        text = f"F_c > {res.largest_refuted} ({res.status.value})\n"
    if args.certificate and res.witness:
        text += format_certificate(res.witness)
    _emit(args, payload, text)
    return EXIT_BUDGET if res.status is FcStatus.LOWER_BOUND else EXIT_OK


def cmd_decide(args) -> int:
    G = read_graph(args.file)
    d = has_nwz_flow(G, args.r, _budget(args), args.method)
    payload = {"r": d.r, "verdict": d.verdict.value, "nodes": d.nodes,
               "certificate": list(d.certificate.values) if d.certificate else None}
    text = f"{d.verdict.value}\n" + (format_certificate(d.certificate) if d.certificate else "")
    _emit(args, payload, text)
    return EXIT_BUDGET if d.verdict is Verdict.UNKNOWN else EXIT_OK


def cmd_chi(args) -> int:
    G = read_graph(args.file)
    chi = chromatic_index(G, _budget(args))
    if not chi.exact:
        _emit(args, {"chi": None, "lower": chi.lower, "upper": chi.upper}, f"{chi.lower} <= chi' <= {chi.upper}\n")
        return EXIT_BUDGET
    payload = {"chi": chi.value, "coloring": list(chi.coloring.colors)}
    _emit(args, payload, f"chi' = {chi.value}\n" + format_coloring(chi.coloring))
    return EXIT_OK


def cmd_classify(args) -> int:
    G = read_graph(args.file)
    c = classify(G, _budget(args))
    payload = {"class": c.graph_class.value, "method": c.method}
    if c.obstruction is not None:
        payload["odd_cut"] = {"vertices": sorted(c.obstruction.vertices), "size": c.obstruction.size}
    _emit(args, payload, f"{c.graph_class.value} ({c.method})\n")
    return EXIT_BUDGET if c.graph_class.value == "unknown" else EXIT_OK


def cmd_bipartizing(args) -> int:
    G = read_graph(args.file)
    found = bipartizing_one_factor(G)
    if found is None:
        _emit(args, {"factor": None}, "none\n")
    else:
        F, bip = found
        _emit(args, {"factor": list(F), "a": sorted(bip.a), "b": sorted(bip.b)}, format_matching(F))
    return EXIT_OK


def cmd_valuation(args) -> int:
    G = read_graph(args.file)
    w = parse_valuation(Path(args.weights).read_text(encoding="utf-8"))
    check = is_balanced_brute(G, w) if args.method == "brute" else is_balanced_mincut(G, w)
    payload = {"balanced": check.balanced, "violator": sorted(check.violator) if check.violator else None}
    text = "balanced\n" if check else f"violated at X = {sorted(check.violator)}\n"
    _emit(args, payload, text)
    return EXIT_OK


def cmd_refute(args) -> int:
    G = read_graph(args.file)
    res = refute_flow_by_valuation(G, args.r)
    payload = {"r": res.r, "verdict": res.verdict.value, "k": list(res.witness.k) if res.witness else None}
    _emit(args, payload, f"{res.verdict.value}\n")
    return EXIT_OK


def cmd_construct(args) -> int:
    sidecar: dict = {"kind": args.kind, "t": args.t}
    if args.kind == "k2":
        G = k2_multi(args.t)
    elif args.kind == "h-gadget":
        G, labels = h_gadget(args.t)
        sidecar["gadgets"] = [asdict(labels)]
    elif args.kind == "glue":
        if not args.base:
            raise argparse.ArgumentTypeError("glue needs --base FILE")
        G, labels = attach_h_gadgets(read_graph(args.base), args.t)
        sidecar["gadgets"] = [asdict(x) for x in labels]
    else:
        G = petersen_family(args.t)
        data = petersen_data()
        sidecar.update(a=sorted(data.a), b=sorted(data.b), matching=list(data.matching))
    out = Path(args.output)
    out.write_text(serialize(G), encoding="utf-8")
    out.with_suffix(".json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return EXIT_OK


def cmd_scan(args) -> int:
    opts = AnalyzeOptions(denom_bound=args.denom_bound, budget=_budget(args), timings=args.timings)
    result = scan_catalog(args.dir, args.t, opts)
    if args.report:
        Path(args.report).write_text(result.dumps(), encoding="utf-8")
    sys.stdout.write(format_table(result))
    inexact = any(not r.fc_exact for r in result.reports)
    return EXIT_BUDGET if inexact else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circflow", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"circflow {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_cmd(name: str, func, help: str, budget: bool = True) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help)
        sp.add_argument("file", help="graph file (.mg or .g6)")
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        if budget:
            sp.add_argument("--budget", type=int, default=10**9, help="search node limit")
            sp.add_argument("--seconds", type=float, default=None, help="wall-clock limit per search")
        sp.set_defaults(func=func)
        return sp

    sp = graph_cmd("fc", cmd_fc, "circular flow number")
    sp.add_argument("--denom-bound", type=int, default=None, help="largest denominator tried (default |V|)")
    sp.add_argument("--method", choices=["orientation", "cycle-space"], default="orientation")
    sp.add_argument("--certificate", action="store_true", help="print the witness flow")

    sp = graph_cmd("decide", cmd_decide, "decide a nowhere-zero r-flow")
    sp.add_argument("--r", type=_rational, required=True)
    sp.add_argument("--method", choices=["orientation", "cycle-space"], default="orientation")

    graph_cmd("chi", cmd_chi, "chromatic index")
    graph_cmd("classify", cmd_classify, "class 1 or class 2")
    graph_cmd("bipartizing", cmd_bipartizing, "1-factor whose removal leaves a bipartite graph", budget=False)

    sp = graph_cmd("valuation", cmd_valuation, "check a valuation for balance", budget=False)
    sp.add_argument("--weights", required=True, help="file of '<v> <p>/<q>' lines")
    sp.add_argument("--method", choices=["brute", "mincut"], default="mincut")

    sp = graph_cmd("refute", cmd_refute, "refute an r-flow by exhausting Jaeger valuations", budget=False)
    sp.add_argument("--r", type=_rational, required=True)

    sp = sub.add_parser("construct", help="build a graph family member")
    sp.add_argument("kind", choices=["k2", "h-gadget", "glue", "petersen-family"])
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--base", help="(2t-1)-regular base graph for glue")
    sp.add_argument("-o", "--output", required=True, help="output .mg path; a .json sidecar is written beside it")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("scan", help="analyse every (2t+1)-regular bridgeless graph in a catalog")
    sp.add_argument("dir")
    sp.add_argument("--t", type=int, required=True)
    sp.add_argument("--report", help="write the JSON report here")
    sp.add_argument("--denom-bound", type=int, default=None)
    sp.add_argument("--budget", type=int, default=10**9)
    sp.add_argument("--seconds", type=float, default=None)
    sp.add_argument("--timings", action="store_true", help="include wall-clock times (breaks byte-determinism)")
    sp.set_defaults(func=cmd_scan)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        print(f"circflow: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, CircflowError, ValueError) as exc:
        print(f"circflow: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
