import random

import networkx as nx
import pytest

from grepair.compressor import (CompressorConfig, GRePair, apply_mapping, canonical_pair, compress,
                                digram_rule, prune)
from grepair.fixtures import counting_example, grammar_example, intro_grammar, intro_graph
from grepair.generators import comb, disjoint_copies, s_graph, square_with_diagonal, T_n
from grepair.grammar import SLHRGrammar, replace_edge, val, validate_straight_line
from grepair.hypergraph import Edge, Hypergraph, size
from grepair.orders import make_order, natural_order

from oracles import isomorphic, matching_counts, random_grammar, random_simple_graph, same_graph


def roundtrip(g, res):
    return apply_mapping(val(res.grammar), res.mapping)


# -- canonical keys -----------------------------------------------------------------

def test_canonical_key_is_order_independent():
    flag = {1: True, 2: False, 3: True}.get
    k1, _, s1 = canonical_pair(1, (1, 2), 2, (2, 3), flag)
    k2, _, s2 = canonical_pair(2, (2, 3), 1, (1, 2), flag)
    assert k1 == k2 and s1 != s2
    assert k1 == (1, 2, (0, 1), (1, 2), (True, False, True))


def test_digram_rule_shape():
    h = digram_rule((1, 2, (0, 1), (1, 2), (True, False, True)))
    assert h.node_count == 3 and len(h.ext) == 2 and len(h.edges) == 2


# -- occurrence counting ---------------------------------------------------------------

def _undirected_path_occurrences(g):
    """Two-edge paths u-v-w (edge direction ignored) whose three nodes all have further edges."""
    deg = {v: g.degree(v) for v in range(1, g.node_count + 1)}
    occ = []
    for i, a in enumerate(g.edges):
        for j in range(i + 1, len(g.edges)):
            b = g.edges[j]
            shared = set(a.att) & set(b.att)
            if len(shared) != 1:
                continue
            nodes = set(a.att) | set(b.att)
            if all(deg[x] > (x in a.att) + (x in b.att) for x in nodes):
                occ.append((i, j, shared.pop()))
    return occ


def test_counting_example_figure_values():
    g = counting_example()
    occ = _undirected_path_occurrences(g)
    m = nx.Graph()
    m.add_edges_from((i, j) for i, j, _ in occ)
    assert len(nx.max_weight_matching(m, maxcardinality=True)) == 4
    # the figure's traversal pairs the spokes at the centre first
    centre_first = 0
    used = set()
    for i, j, c in sorted(occ, key=lambda o: o[2] != 1):
        if i not in used and j not in used:
            used |= {i, j}
            centre_first += 1
    assert centre_first == 2


def test_counting_example_matches_matching_oracle():
    g = counting_example()
    counts = GRePair(g, natural_order(g), 4).counts()
    assert counts == {k: v for k, v in matching_counts(g).items() if v}
    assert counts[(1, 1, (0, 1), (1, 2), (True, True, True))] == 4


def test_greedy_below_matching_on_small_graphs():
    rng = random.Random(2)
    for _ in range(300):
        g = random_simple_graph(rng, 8, 8, 2)
        opt = matching_counts(g)
        for kind in ("nat", "fp"):
            for key, c in GRePair(g, make_order(g, kind), None).counts().items():
                assert c <= opt[key]


@pytest.mark.parametrize("kind", ["nat", "bfs", "fp"])
def test_incremental_index_equals_recount(kind):
    rng = random.Random(kind)
    for _ in range(60):
        g = random_simple_graph(rng, 15, 30, 2)
        st = GRePair(g, make_order(g, kind), rng.choice([2, 3, 4, None]))
        while st.step() is not None:
            inc = st.counts()
            st.recount()
            assert st.counts() == inc


# -- replacement -------------------------------------------------------------------------

def test_intro_graph_replacement():
    g = intro_graph()
    st = GRePair(g, natural_order(g), 4)
    rec = st.step()
    assert len(rec.occurrences) == 3
    host, _ = st.host_graph()
    assert [e.label for e in host.edges] == [3, 3, 3]
    assert host.node_count == 2
    assert isomorphic(st.rules[3], intro_grammar().rules[3])
    assert st.step() is None


def test_string_graph_first_replacement():
    w = s_graph("abcabcabc")  # a=1, b=2, c=3
    st = GRePair(w, natural_order(w), 2)
    bc = (2, 3, (0, 1), (1, 2), (True, False, True))
    assert st.counts()[bc] == 3
    rec = st.step()
    assert rec.digram.labels == (1, 2) and rec.nonterminal == 4
    counts = st.counts()
    assert bc not in counts
    assert counts[(3, 4, (0, 1), (2, 0), (False, True, True))] == 3  # A c


def test_replacement_is_invertible():
    rng = random.Random(6)
    for _ in range(40):
        g = random_simple_graph(rng, 20, 40, 2)
        st = GRePair(g, natural_order(g), 3)
        before, _ = st.host_graph()
        rec = st.step()
        if rec is None:
            continue
        after, nodes = st.host_graph()
        pos = {x: i for i, x in enumerate(sorted(st.att))}
        h = after
        for x in sorted(rec.new_edges, reverse=True):
            h = replace_edge(h, pos[x], st.rules[rec.nonterminal])
        assert isomorphic(h, before)


def test_star_pair_work_is_linear():
    work = {}
    for k in (100, 400, 1600):
        g = Hypergraph(k + 1, [Edge(1, (1, i)) for i in range(2, k + 2)])
        work[k] = compress(g, CompressorConfig(order="nat")).pair_work
        assert work[k] <= 3 * k
    assert work[1600] / work[100] < 20


# -- compression laws -------------------------------------------------------------------

def test_max_rank_must_be_two_or_more():
    with pytest.raises(ValueError):
        CompressorConfig(max_rank=1)


def test_copies_compress_exponentially():
    g = disjoint_copies(square_with_diagonal(), 4096)
    res = compress(g, CompressorConfig(order="nat"))
    assert res.grammar.size() < 0.05 * size(g).total


@pytest.mark.parametrize("k", [3, 4])
def test_comb_below_rank_is_incompressible(k):
    res = compress(comb(3, k), CompressorConfig(max_rank=k - 1))
    assert res.replacements == 0 and res.grammar.rules == {}


def test_t_n_rank_two_is_linear():
    sizes = {n: compress(T_n(n), CompressorConfig(max_rank=2, order="nat")).grammar.size()
             for n in range(6, 11)}
    c = sizes[6] / 6
    assert all(s <= c * n for n, s in sizes.items())


def test_rules_respect_max_rank():
    rng = random.Random(12)
    for _ in range(30):
        g = random_simple_graph(rng, 30, 80, 2)
        for r in (2, 3):
            res = compress(g, CompressorConfig(max_rank=r))
            assert all(len(h.ext) <= r for h in res.grammar.rules.values())


# -- pruning ---------------------------------------------------------------------------------

def test_prune_removes_single_reference():
    rule = Hypergraph(3, [Edge(1, (1, 3)), Edge(1, (3, 2))], (1, 2))
    G = SLHRGrammar(Hypergraph(3, [Edge(2, (1, 2)), Edge(1, (2, 3))]), {2: rule})
    P = prune(G)
    assert P.rules == {} and isomorphic(val(P), val(G))


def test_prune_keeps_paying_rule():
    G = grammar_example()
    P = prune(G)
    assert P.rules.keys() == G.rules.keys() and P.size() == G.size()


def test_prune_never_grows():
    rng = random.Random(13)
    for _ in range(40):
        g, res = random_grammar(rng, prune=False)
        P = prune(res.grammar)
        assert P.size() <= res.grammar.size()
        assert isomorphic(val(P), val(res.grammar))


# -- full pipeline ---------------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["nat", "bfs", "fp0", "fp"])
def test_roundtrip_exact(kind):
    rng = random.Random(kind)
    for _ in range(40):
        g = random_simple_graph(rng, 60, 200, 4)
        for cfg in (CompressorConfig(order=kind), CompressorConfig(max_rank=None, order=kind, prune=False),
                    CompressorConfig(max_rank=2, order=kind, virtual_edge_pass=False)):
            res = compress(g, cfg)
            assert validate_straight_line(res.grammar) == []
            assert same_graph(roundtrip(g, res), g)
            if cfg.prune:
                assert res.grammar.size() <= size(g).total


def test_roundtrip_keeps_isolated_nodes_and_ext():
    g = Hypergraph(6, [Edge(1, (1, 2)), Edge(1, (2, 3)), Edge(1, (4, 5))], (3, 1))
    res = compress(g)
    h = roundtrip(g, res)
    assert h.node_count == 6 and h.ext == (3, 1) and same_graph(h, g)


def test_virtual_pass_links_components():
    g = disjoint_copies(Hypergraph(3, [Edge(1, (1, 2)), Edge(2, (2, 3))]), 64)
    with_pass = compress(g, CompressorConfig(order="nat"))
    without = compress(g, CompressorConfig(order="nat", virtual_edge_pass=False))
    assert with_pass.virtual_edges > 0
    assert with_pass.grammar.size() <= without.grammar.size()
    for res in (with_pass, without):
        assert same_graph(roundtrip(g, res), g)
        assert all(e.label != 0 for h in res.grammar.right_hand_sides() for e in h.edges)
