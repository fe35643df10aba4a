"""Small hand-built graphs and grammars used by tests and the CLI demos.

Terminal labels: a = 1, b = 2 unless noted; nonterminals follow.
"""
from __future__ import annotations

from .edgelist import LabelDictionary
from .grammar import SLHRGrammar
from .hypergraph import Edge, Hypergraph
from .queries.rpq import NFA

A_, B_ = 1, 2


def ab_labels() -> LabelDictionary:
    return LabelDictionary(["a", "b"], [2, 2])


def hypergraph_example() -> Hypergraph:
    """Three nodes, a: 1->2, b: 2->3, a rank-3 edge (label 3) on 2,1,3; ext = 3,1."""
    return Hypergraph(3, [Edge(A_, (1, 2)), Edge(B_, (2, 3)), Edge(3, (2, 1, 3))], (3, 1))


def intro_graph() -> Hypergraph:
    """Three a/b paths from node 1 to node 2 (as the intro grammar derives it)."""
    return Hypergraph(5, [Edge(A_, (1, 3)), Edge(B_, (3, 2)), Edge(A_, (1, 4)), Edge(B_, (4, 2)),
                          Edge(A_, (1, 5)), Edge(B_, (5, 2))])


def intro_grammar() -> SLHRGrammar:
    A = 3
    S = Hypergraph(2, [Edge(A, (1, 2))] * 3)
    return SLHRGrammar(S, {A: Hypergraph(3, [Edge(A_, (1, 2)), Edge(B_, (2, 3))], (1, 3))})


def dt_example() -> SLHRGrammar:
    """Start graph with B(1,2,3), two A(1,2) and A(2,3); A is an a-path, B
    holds two b-edges into an internal node plus an A-edge."""
    A, B = 3, 4
    S = Hypergraph(3, [Edge(B, (1, 2, 3)), Edge(A, (1, 2)), Edge(A, (1, 2)), Edge(A, (2, 3))])
    rA = Hypergraph(3, [Edge(A_, (1, 2)), Edge(A_, (2, 3))], (1, 3))
    rB = Hypergraph(4, [Edge(B_, (1, 2)), Edge(B_, (3, 2)), Edge(A, (4, 2))], (1, 4, 3))
    return SLHRGrammar(S, {A: rA, B: rB})


def dt_example_val() -> Hypergraph:
    a, b = A_, B_
    return Hypergraph(8, [Edge(a, (1, 4)), Edge(a, (4, 2)), Edge(a, (1, 5)), Edge(a, (5, 2)),
                          Edge(b, (1, 6)), Edge(b, (3, 6)), Edge(a, (2, 7)), Edge(a, (7, 6)),
                          Edge(a, (2, 8)), Edge(a, (8, 3))])


def grammar_example() -> SLHRGrammar:
    """Star of four spokes at node 1, each spoke end carrying an A-edge; single label 1."""
    A = 2
    x = 1
    S = Hypergraph(9, [Edge(x, (1, 2)), Edge(x, (1, 4)), Edge(x, (1, 6)), Edge(x, (1, 8)),
                       Edge(x, (5, 7)), Edge(x, (9, 3)),
                       Edge(A, (2, 3)), Edge(A, (4, 5)), Edge(A, (6, 7)), Edge(A, (8, 9))])
    return SLHRGrammar(S, {A: Hypergraph(3, [Edge(x, (1, 2)), Edge(x, (1, 3))], (1, 2))})


def line_graph_c_rule() -> Hypergraph:
    """Rank-3 rule: b-leaves (rank 1) on ext 1 and 2, a: ext 3 -> ext 1."""
    return Hypergraph(3, [Edge(B_, (2,)), Edge(B_, (1,)), Edge(A_, (3, 1))], (1, 2, 3))


def counting_example() -> Hypergraph:
    """Centre 1 with four spokes; every spoke end has two further leaves and
    two of the leaves on neighbouring spokes are joined (13 nodes)."""
    pairs = [(1, 2), (2, 10), (2, 3), (1, 4), (4, 11), (4, 5), (1, 6), (6, 7), (6, 12),
             (1, 8), (8, 9), (8, 13), (5, 7), (9, 3)]
    return Hypergraph(13, [Edge(1, p) for p in pairs])


def a40_grammar() -> SLHRGrammar:
    """s-graph(a^40) as a^32 a^4 a^4 over the doubling rules A_1 = aa .. A_5 = a^32."""
    rules = {2: Hypergraph(3, [Edge(A_, (1, 3)), Edge(A_, (3, 2))], (1, 2))}
    for lab in range(3, 7):
        rules[lab] = Hypergraph(3, [Edge(lab - 1, (1, 3)), Edge(lab - 1, (3, 2))], (1, 2))
    S = Hypergraph(4, [Edge(6, (1, 2)), Edge(3, (2, 3)), Edge(3, (3, 4))], (1, 4))
    return SLHRGrammar(S, rules)


def mod5_nfa(label=A_) -> NFA:
    """Five-state cycle accepting a^x with x divisible by 5."""
    return NFA(5, [(q, label, (q + 1) % 5) for q in range(5)], 0, 0)
