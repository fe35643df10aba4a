import io

import pytest

from grepair.edgelist import (LabelDictionary, ParseError, SelfLoopError, format_edge_list,
                              parse_edge_list, read_edge_list)
from grepair.hypergraph import Edge


def parse(text):
    return parse_edge_list(text.splitlines())


def test_basic_parse_with_default_and_named_labels():
    ing = parse("a b\nb c knows\n# comment\n\nc a")
    assert ing.node_names == ["a", "b", "c"]
    assert ing.graph.node_count == 3
    assert [e.att for e in ing.graph.edges] == [(1, 2), (2, 3), (3, 1)]
    assert ing.graph.edges[0].label == ing.graph.edges[2].label != ing.graph.edges[1].label
    assert ing.labels.name_of(ing.graph.edges[1].label) == "knows"


def test_hyperedge_lines():
    ing = parse("@r 1 2 3\n@leaf 2")
    assert [e.rank for e in ing.graph.edges] == [3, 1]
    assert ing.labels.rank_of(ing.graph.edges[0].label) == 3


def test_bad_line_reports_line_number():
    with pytest.raises(ParseError) as err:
        parse("1 2\na b c d e")
    assert err.value.lineno == 2


def test_self_loops_rejected_with_all_line_numbers():
    with pytest.raises(SelfLoopError) as err:
        parse("1 1\n1 2\n2 2 x")
    assert err.value.linenos == [1, 3]


def test_duplicates_dropped():
    ing = parse("1 2\n1 2\n2 1")
    assert ing.duplicates == 1 and len(ing.graph.edges) == 2


def test_label_rank_must_be_consistent():
    with pytest.raises(ValueError):
        parse("@r 1 2 3\n1 2 r")


def test_format_roundtrip():
    text = "x y a\ny z b\n@h x y z\n"
    ing = read_edge_list(io.StringIO(text))
    lines = format_edge_list(ing.graph, ing.labels, ing.node_names)
    again = parse("\n".join(lines))
    assert again.graph == ing.graph and again.node_names == ing.node_names


def test_dictionary_for_graph():
    from grepair.hypergraph import Hypergraph
    d = LabelDictionary.for_graph(Hypergraph(3, [Edge(2, (1, 2, 3)), Edge(1, (1, 2))]))
    assert len(d) == 2 and d.rank_of(2) == 3 and d.rank_of(1) == 2
