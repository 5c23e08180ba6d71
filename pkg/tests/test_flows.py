import random
from fractions import Fraction as F

import pytest

from circflow.flows import (
    Budget,
    FcStatus,
    FlowAssignment,
    Verdict,
    candidate_ladder,
    circular_flow_number,
    format_certificate,
    has_nwz_flow,
    negate_edge,
    normalize_positive,
    oriented_graph,
    parse_certificate,
    reverse_edge,
    verify_flow,
)
from circflow.graph import GraphError, degree, disjoint_union, from_edges
from conftest import complete, k33
from oracles import bridgeless_multigraphs, brute_circular_flow_number, brute_force_flow

TRIANGLE = from_edges(3, [(0, 1), (1, 2), (2, 0)])


def k2(mult):
    return from_edges(2, [(0, 1)] * mult)


# ---------------------------------------------------------------- verification


def test_verify_flow_examples():
    assert verify_flow(TRIANGLE, FlowAssignment(2, (1, 1, 1)))
    assert not verify_flow(TRIANGLE, FlowAssignment(2, (1, 1, -1)))
    assert not verify_flow(TRIANGLE, FlowAssignment(F(3, 2), (1, 1, 1)))
    assert verify_flow(k2(3), FlowAssignment(3, (1, 1, -2)))
    assert not verify_flow(k2(3), FlowAssignment(3, (F(1, 2), F(3, 2), -2)))
    with pytest.raises(GraphError):
        verify_flow(TRIANGLE, FlowAssignment(2, (1, 1)))


def test_negation_closure(petersen):
    d = has_nwz_flow(petersen, 5)
    f = d.certificate
    G = petersen
    for e in range(G.m):
        f, G = negate_edge(f, e), reverse_edge(G, e)
        assert verify_flow(G, f)
    assert not verify_flow(petersen, negate_edge(d.certificate, 0))


def test_normalize_positive(petersen):
    f = has_nwz_flow(petersen, 5).certificate
    orientation, values = normalize_positive(petersen, f)
    H = oriented_graph(petersen, orientation)
    assert all(x > 0 for x in values)
    assert verify_flow(H, FlowAssignment(5, values))
    outdeg = [0] * H.n
    for u, _ in H.edges:
        outdeg[u] += 1
    assert set(outdeg) <= {1, 2}


def test_certificate_round_trip(k4):
    f = has_nwz_flow(k4, 4).certificate
    text = format_certificate(f)
    assert text.startswith("flow r=4/1\n")
    assert parse_certificate(text) == f
    with pytest.raises(ValueError):
        parse_certificate("0 +1/1\n")


# ---------------------------------------------------------------- decision


def test_decide_basics(k4):
    assert has_nwz_flow(TRIANGLE, 2).verdict is Verdict.YES
    assert has_nwz_flow(k4, F(7, 2)).verdict is Verdict.NO
    assert has_nwz_flow(k4, 4).verdict is Verdict.YES
    assert has_nwz_flow(k4, F(19, 10)).verdict is Verdict.NO
    assert has_nwz_flow(from_edges(3, [(0, 1), (1, 2)]), 6).verdict is Verdict.NO
    assert has_nwz_flow(from_edges(3, []), 2).verdict is Verdict.YES


def test_decide_accepts_strings():
    d = has_nwz_flow(k2(5), "5/2")
    assert d and d.r == F(5, 2)


def test_unknown_method():
    with pytest.raises(ValueError):
        has_nwz_flow(TRIANGLE, 2, method="magic")


def test_budget_gives_unknown_not_no(petersen):
    d = has_nwz_flow(petersen, F(9, 2), Budget(nodes=1))
    assert d.verdict is Verdict.UNKNOWN
    res = circular_flow_number(petersen, budget=Budget(nodes=1))
    assert res.status is FcStatus.LOWER_BOUND and res.value is None


@pytest.mark.parametrize("method", ["orientation", "cycle-space"])
def test_methods_agree_on_named_graphs(method, k4):
    for G, r, want in [(k4, 4, True), (k4, F(11, 3), False), (k33(), 3, True), (k2(5), F(5, 2), True),
                       (k2(5), F(7, 3), False)]:
        assert bool(has_nwz_flow(G, r, method=method)) is want


# ---------------------------------------------------------------- ladder / F_c


def test_ladder_small():
    assert candidate_ladder(1) == [2, 3, 4, 5, 6]
    assert candidate_ladder(2) == [F(x, 2) for x in range(4, 13)]
    lad = candidate_ladder(4)
    i = lad.index(F(11, 4))
    assert (lad[i - 1], lad[i + 1]) == (F(8, 3), 3)
    lad = candidate_ladder(5)
    i = lad.index(F(11, 4))
    assert (lad[i - 1], lad[i + 1]) == (F(8, 3), F(14, 5))
    with pytest.raises(ValueError):
        candidate_ladder(0)


def test_ladder_predecessor_of_11_4_at_q10():
    lad = candidate_ladder(10)
    assert lad[lad.index(F(11, 4)) - 1] == F(19, 7)


@pytest.mark.parametrize(
    "name, want",
    [("k4", 4), ("k6", 3), ("k33", 3), ("k2_3", 3), ("k2_5", F(5, 2)), ("petersen", 5), ("p5", F(11, 4))],
)
def test_fc_table(name, want, request):
    G = {"k33": k33(), "k2_3": k2(3), "k2_5": k2(5)}.get(name) or request.getfixturevalue(name)
    res = circular_flow_number(G)
    assert res.status is FcStatus.EXACT and res.value == want
    assert verify_flow(G, res.witness) and res.witness.r == want
    if want > 2:
        assert res.refusal.verdict is Verdict.NO
        lad = candidate_ladder(res.denominator_bound)
        assert res.refusal.r == lad[lad.index(want) - 1]


def test_fc_eulerian_is_two():
    res = circular_flow_number(TRIANGLE)
    assert res.value == 2 and res.refusal is None and res.largest_refuted is None
    assert all(degree(complete(5), v) % 2 == 0 for v in range(5))
    assert circular_flow_number(complete(5)).value == 2


def test_fc_bridge():
    bridged = from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3)])
    assert circular_flow_number(bridged).status is FcStatus.BRIDGE
    # doubling the pendant edge removes the bridge and makes every degree even
    doubled = from_edges(4, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 2)])
    assert circular_flow_number(doubled).value == 2


def test_fc_disconnected_takes_max(k4):
    G = disjoint_union(TRIANGLE, k4, k2(5))
    res = circular_flow_number(G)
    assert res.value == 4 and verify_flow(G, res.witness)


def test_fc_denominator_bound_respected():
    # K2^5 needs denominator 2; with Q = 1 the best ladder value is 3
    res = circular_flow_number(k2(5), Q=1)
    assert res.value == 3 and res.denominator_bound == 1


def test_monotonicity_sampling(petersen, k4):
    rng = random.Random(7)
    for G in (petersen, k4, k33(), k2(5)):
        fc = circular_flow_number(G).value
        for _ in range(6):
            r = F(rng.randint(20, 60), rng.randint(1, 10))
            if 2 <= r <= 6:
                assert bool(has_nwz_flow(G, r)) == (r >= fc), (G, r)


# ---------------------------------------------------------------- brute-force equivalence

SMALL = bridgeless_multigraphs(6)


@pytest.mark.parametrize("method", ["orientation", "cycle-space"])
def test_solvers_match_brute_force_small(method):
    for n, edges in SMALL:
        G = from_edges(n, edges)
        for r in (2, F(5, 2), 3, F(7, 2), 4):
            assert bool(has_nwz_flow(G, r, method=method)) == brute_force_flow(n, edges, F(r)), (n, edges, r)


def test_fc_matches_brute_force_small():
    for n, edges in SMALL:
        Q = max(n, 1)
        got = circular_flow_number(from_edges(n, edges)).value
        assert got == brute_circular_flow_number(n, edges, Q), (n, edges)
