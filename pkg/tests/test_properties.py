"""Randomised invariants (hypothesis). Runnable standalone:
``pytest tests/test_properties.py``."""

from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from circflow.coloring import enumerate_perfect_matchings
from circflow.flows import FlowAssignment, circular_flow_number, has_nwz_flow, negate_edge, reverse_edge, verify_flow
from circflow.graph import boundary, bridges, degree, from_edges, two_coloring
from circflow.io import parse_multigraph, serialize
from circflow.valuations import is_balanced_brute, is_balanced_mincut
from oracles import count_perfect_matchings

SETTINGS = settings(max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def multigraphs(draw, max_n=8, max_m=14):
    n = draw(st.integers(1, max_n))
    if n == 1:
        return from_edges(1, [])
    pair = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1])
    return from_edges(n, draw(st.lists(pair, max_size=max_m)))


@SETTINGS
@given(multigraphs())
def test_handshake(G):
    assert sum(degree(G, v) for v in range(G.n)) == 2 * G.m


@SETTINGS
@given(multigraphs())
def test_serialize_round_trip(G):
    assert parse_multigraph(serialize(G)) == G


@SETTINGS
@given(multigraphs(max_n=12, max_m=24), st.data())
def test_boundary_complement_symmetry(G, data):
    X = data.draw(st.sets(st.integers(0, G.n - 1)))
    rest = set(range(G.n)) - X
    assert boundary(G, X).size == boundary(G, rest).size


@SETTINGS
@given(multigraphs())
def test_bipartition_witness(G):
    bip, cycle = two_coloring(G)
    if bip is not None:
        assert bip.a | bip.b == frozenset(range(G.n)) and not bip.a & bip.b
        assert all((u in bip.a) != (v in bip.a) for u, v in G.edges)
    else:
        assert len(cycle) % 2 == 1


@SETTINGS
@given(multigraphs(max_n=6, max_m=10), st.data())
def test_negation_closure_and_monotonicity(G, data):
    assume(G.m > 0 and not bridges(G))
    fc = circular_flow_number(G).value
    d = has_nwz_flow(G, fc)
    f, H = d.certificate, G
    for e in data.draw(st.lists(st.integers(0, G.m - 1), max_size=5)):
        f, H = negate_edge(f, e), reverse_edge(H, e)
    assert verify_flow(H, f)
    # a flow at fc is also a flow at any larger r
    r = fc + data.draw(st.fractions(0, 3, max_denominator=6))
    assert verify_flow(G, FlowAssignment(r, d.certificate.values))
    assert has_nwz_flow(G, r)


@SETTINGS
@given(multigraphs(max_n=8, max_m=16))
def test_matching_count_oracle(G):
    assert len(list(enumerate_perfect_matchings(G))) == count_perfect_matchings(G.n, G.edges)


@SETTINGS
@given(multigraphs(max_n=9, max_m=18), st.data())
def test_balance_methods_agree(G, data):
    w = data.draw(st.lists(st.fractions(-6, 6, max_denominator=6), min_size=G.n, max_size=G.n))
    a, b = is_balanced_brute(G, w), is_balanced_mincut(G, w)
    assert a.balanced == b.balanced
    for check in (a, b):
        if not check:
            X = check.violator
            assert abs(sum(w[v] for v in X)) > boundary(G, X).size


def test_matching_count_petersen(petersen):
    assert len(list(enumerate_perfect_matchings(petersen))) == 6
