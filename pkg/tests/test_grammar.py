import random

import pytest

from grepair.fixtures import dt_example, dt_example_val, grammar_example, intro_grammar, intro_graph
from grepair.grammar import (GrammarError, SLHRGrammar, contribution, derive, dump, handle_size,
                             handle, inline_nonterminal, limit_to_two_nonterminals, normalize_ext, replace_edge,
                             stats, val, val_of, validate_straight_line)
from grepair.hypergraph import Edge, Hypergraph, size

from oracles import isomorphic, random_grammar


def digram_rule():
    return Hypergraph(3, [Edge(1, (1, 3)), Edge(1, (3, 2))], (1, 2))


# -- validation -------------------------------------------------------------------

def test_intro_grammar_valid():
    assert validate_straight_line(intro_grammar()) == []


def test_cycle_detected():
    G = SLHRGrammar(Hypergraph(2, [Edge(2, (1, 2))]), {2: Hypergraph(2, [Edge(2, (1, 2))], (1, 2))})
    assert any(p.startswith("acyclicity") for p in validate_straight_line(G))
    with pytest.raises(GrammarError):
        val(G)


def test_useless_rule_detected():
    G = SLHRGrammar(Hypergraph(2, [Edge(1, (1, 2))]), {3: digram_rule()})
    assert validate_straight_line(G) == ["uselessness: rule 3 is never referenced"]


def test_rank_mismatch_detected():
    G = SLHRGrammar(Hypergraph(3, [Edge(3, (1, 2, 3))]), {3: digram_rule()})
    assert any("rank" in p for p in validate_straight_line(G))


# -- replacement and derivation ------------------------------------------------------

def test_three_replacements_number_internal_nodes_in_order():
    G = intro_grammar()
    g = G.start
    for _ in range(3):
        i = next(k for k, e in enumerate(g.edges) if e.label == 3)
        g = replace_edge(g, i, G.rules[3])
    assert g.node_count == 5
    mids = sorted(e.att[1] for e in g.edges if e.label == 1)
    assert mids == [3, 4, 5]
    assert g.same_as(intro_graph())


def test_replace_without_internal_nodes_keeps_node_count():
    h = Hypergraph(2, [Edge(1, (1, 2)), Edge(2, (2, 1))], (1, 2))
    g = replace_edge(Hypergraph(2, [Edge(5, (1, 2))]), 0, h)
    assert g.node_count == 2 and len(g.edges) == 2


def test_replace_rank_mismatch():
    with pytest.raises(GrammarError):
        replace_edge(Hypergraph(3, [Edge(5, (1, 2, 3))]), 0, digram_rule())


def test_handle_replacement_equals_val_of_rule():
    G = dt_example()
    for a in G.rules:
        h = handle(G, a)
        assert replace_edge(h, 0, G.rules[a]).node_count == h.node_count + G.rules[a].node_count - G.rank(a)
        assert val(SLHRGrammar(h, G.rules)) == val_of(G, a)
    assert val_of(G, 3) == Hypergraph(3, [Edge(1, (1, 3)), Edge(1, (3, 2))], (1, 2))


def test_val_of_dt_example():
    assert val(dt_example()) == dt_example_val()


def test_val_of_terminal_only_grammar_is_start():
    g = intro_graph()
    assert val(SLHRGrammar(g, {})) == g


def test_val_of_intro_grammar():
    h = val(intro_grammar())
    assert (h.node_count, len(h.edges)) == (5, 6)
    assert h.same_as(intro_graph())


def test_val_is_deterministic():
    G = dt_example()
    assert val(G) == val(G.copy()) == derive(G)[0]


# -- contribution and inlining -------------------------------------------------------

def test_contribution_of_example():
    assert contribution(grammar_example(), 2) == 4 * (5 - 3) - 5 == 3


def test_contribution_single_reference():
    G = SLHRGrammar(Hypergraph(2, [Edge(2, (1, 2))]), {2: digram_rule()})
    assert contribution(G, 2) == -handle_size(2) == -3


def test_contribution_two_references():
    G = SLHRGrammar(Hypergraph(3, [Edge(2, (1, 2)), Edge(2, (2, 3))]), {2: digram_rule()})
    assert contribution(G, 2) == 2 * (5 - 3) - 5 == -1
    assert inline_nonterminal(G, 2).size() - G.size() == contribution(G, 2)


def test_inlining_example_grows_by_three():
    G = grammar_example()
    H = inline_nonterminal(G, 2)
    assert H.rules == {}
    assert H.size() - G.size() == 3
    assert H.start.node_count == 13 and len(H.start.edges) == 14
    assert isomorphic(val(H), val(G))


def test_inlining_single_reference_never_grows():
    rng = random.Random(11)
    checked = 0
    for _ in range(40):
        _, res = random_grammar(rng, prune=False)
        G = res.grammar
        for a, r in G.refs().items():
            if r == 1:
                assert inline_nonterminal(G, a).size() <= G.size()
                checked += 1
    assert checked > 0


def test_inline_preserves_val_on_random_grammars():
    rng = random.Random(5)
    done = 0
    while done < 50:
        _, res = random_grammar(rng, max_nodes=25, max_edges=60, prune=False)
        G = res.grammar
        if not G.rules:
            continue
        a = rng.choice(sorted(G.rules))
        H = inline_nonterminal(G, a)
        assert H.size() - G.size() == contribution(G, a)
        assert validate_straight_line(H) == []
        assert isomorphic(val(H), val(G))
        done += 1


# -- normal forms -------------------------------------------------------------------

def test_normalize_ext_distinct_is_identity():
    G = dt_example()
    H = normalize_ext(G)
    assert H.start == G.start and H.rules == G.rules


def test_normalize_repeated_ext():
    rule = Hypergraph(3, [Edge(1, (1, 3)), Edge(1, (3, 2))], (1, 2, 1))
    start = Hypergraph(4, [Edge(2, (1, 2, 3)), Edge(1, (4, 1))])
    G = SLHRGrammar(start, {2: rule})
    H = normalize_ext(G)
    assert H.rules[2].ext == (1, 2)
    assert size(G.start).nodes - size(H.start).nodes == 1
    # a rank-3 edge (size 3) becomes a rank-2 edge (size 1)
    assert size(G.start).edges - size(H.start).edges == 2
    assert H.size() < G.size()
    # node 3 is glued onto node 1
    expected = Hypergraph(4, [Edge(1, (1, 3)), Edge(1, (3, 2)), Edge(1, (4, 1))])
    assert isomorphic(Hypergraph(val(H).node_count, val(H).edges), expected)
    with pytest.raises(GrammarError):
        val(G)


def _duplicate_ext(G, rng):
    a = rng.choice(sorted(G.rules))
    h = G.rules[a]
    i = rng.randrange(len(h.ext))
    rules = dict(G.rules)
    rules[a] = Hypergraph(h.node_count, h.edges, h.ext + (h.ext[i],))

    def widen(g):
        n = g.node_count
        edges = []
        for e in g.edges:
            if e.label == a:
                n += 1
                e = Edge(a, e.att + (n,))
            edges.append(e)
        return Hypergraph(n, edges, g.ext)

    for b in list(rules):
        rules[b] = widen(rules[b])
    return SLHRGrammar(widen(G.start), rules)


def test_normalize_random_duplicated_ext():
    rng = random.Random(8)
    done = 0
    while done < 30:
        _, res = random_grammar(rng, max_nodes=20, max_edges=50, prune=False)
        if not res.grammar.rules:
            continue
        G = _duplicate_ext(res.grammar, rng)
        H = normalize_ext(G)
        assert all(len(set(h.ext)) == len(h.ext) for h in H.rules.values())
        assert H.size() < G.size()
        assert isomorphic(val(H), val(res.grammar))
        done += 1


def test_limit_conforming_is_identity():
    G = SLHRGrammar(Hypergraph(3, [Edge(3, (1, 2)), Edge(3, (2, 3))]), intro_grammar().rules)
    assert limit_to_two_nonterminals(G) is G


def test_limit_bundles_three_nonterminals():
    G = intro_grammar()
    H = limit_to_two_nonterminals(G)
    assert len(H.rules) == 2
    assert all(len(H.children(g)) <= 2 for g in H.right_hand_sides())
    assert validate_straight_line(H) == []
    assert val(H) == val(G)


def test_limit_preserves_val_exactly_on_random_grammars():
    rng = random.Random(21)
    changed = 0
    for _ in range(60):
        _, res = random_grammar(rng, max_nodes=30, max_edges=80)
        G = res.grammar
        H = limit_to_two_nonterminals(G)
        assert all(len(H.children(g)) <= 2 for g in H.right_hand_sides())
        assert val(H) == val(G)
        changed += H is not G
    assert changed > 0


# -- statistics ----------------------------------------------------------------------

def test_intro_sizes():
    assert intro_grammar().size() == 10
    assert size(intro_graph()).total == 11


def test_terminal_only_stats():
    s = stats(SLHRGrammar(intro_graph(), {}))
    assert (s.height, s.rule_count) == (0, 0)


def test_dt_example_stats():
    G = dt_example()
    assert G.node_counts == {3: 1, 4: 2}
    assert G.height() == 2
    assert G.val_node_count() == 8
    assert dump(G).splitlines()[0] == "S/0 -> nodes=3 ext=()"
