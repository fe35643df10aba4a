import random

import pytest

from grepair.codec import (BadMagicError, BitReader, BitWriter, CodecError, MalformedError, TruncatedError,
                           VersionMismatchError, decode_rules, delta_decode, delta_encode, encode_rules,
                           k2_encode, k2_from_bits, k2_from_matrix, read_container, write_container)
from grepair.codec.container import encode_rule_body
from grepair.compressor import CompressorConfig, apply_mapping, compress
from grepair.edgelist import LabelDictionary
from grepair.fixtures import ab_labels, dt_example, grammar_example, intro_grammar
from grepair.generators import comb, disjoint_copies, grid, square_with_diagonal, triangle_fractal, T_n
from grepair.grammar import SLHRGrammar, val
from grepair.hypergraph import Edge, Hypergraph

from oracles import random_simple_graph, same_graph


# -- Elias delta ------------------------------------------------------------------------

def test_delta_small_values():
    assert delta_encode(1) == "1"
    assert delta_encode(2) == "0100"
    assert delta_encode(17) == "001010001"
    assert [delta_decode(delta_encode(n)) for n in range(1, 100)] == list(range(1, 100))


def test_delta_rejects_zero_and_trailing_bits():
    with pytest.raises(ValueError):
        delta_encode(0)
    with pytest.raises(MalformedError):
        delta_decode("11")


def test_delta_roundtrip_up_to_a_million():
    w = BitWriter()
    for n in range(1, 1_000_001):
        w.delta(n)
    r = BitReader(w.to_bytes(), len(w))
    assert all(r.delta() == n for n in range(1, 1_000_001))
    assert r.remaining() == 0


def test_reader_truncation():
    r = BitReader("0")
    with pytest.raises(TruncatedError):
        r.delta()


# -- k2-trees --------------------------------------------------------------------------------

def test_k2_all_zero():
    t = k2_encode([], 4)
    assert t.bits == (0, 0, 0, 0)
    assert all(t.cell(r, c) == 0 for r in range(4) for c in range(4))


def test_k2_identity_2x2():
    t = k2_from_matrix([[1, 0], [0, 1]])
    # the root is implicit; the only level is the leaf level
    assert t.tree == () and t.leaves == (1, 0, 0, 1)


def test_k2_nine_by_nine_example():
    g = grammar_example().start
    cells = [(e.att[0] - 1, e.att[1] - 1) for e in g.edges if e.label == 2]
    t = k2_encode(cells, 9)
    assert t.side == 16
    assert t.levels()[0] == (1, 1, 0, 0)  # partitions 3 and 4 are zero leaves
    assert t.cells() == sorted(cells)


def test_k2_identity_8x8():
    t = k2_encode([(i, i) for i in range(8)], 8)
    assert t.cell(3, 3) == 1 and t.cell(3, 4) == 0
    assert t.row(5) == [5] and t.column(2) == [2]


def _random_matrix(rng, rows, cols):
    p = rng.choice([0.01, 0.05, 0.3])
    return [[1 if rng.random() < p else 0 for _ in range(cols)] for _ in range(rows)]


def test_k2_random_64_exhaustive():
    rng = random.Random(64)
    m = _random_matrix(rng, 64, 64)
    t = k2_from_matrix(m)
    assert all(t.cell(r, c) == m[r][c] for r in range(64) for c in range(64))
    assert k2_from_bits(t.bits, 64, 64) == t


def test_k2_rectangular_rows_and_columns():
    rng = random.Random(7)
    for _ in range(20):
        rows, cols = rng.randint(1, 40), rng.randint(1, 40)
        m = _random_matrix(rng, rows, cols)
        t = k2_from_matrix(m)
        assert t.to_matrix() == m
        for r in range(rows):
            assert t.row(r) == [c for c in range(cols) if m[r][c]]
        for c in range(cols):
            assert t.column(c) == [r for r in range(rows) if m[r][c]]


def test_k2_bad_input():
    with pytest.raises(ValueError):
        k2_encode([(4, 0)], 4)
    with pytest.raises(IndexError):
        k2_encode([], 3).cell(3, 0)
    with pytest.raises(ValueError):
        k2_from_bits((1, 0, 0), 4, 4)


# -- rules ---------------------------------------------------------------------------------------

def test_example_rule_encoding():
    rule = grammar_example().rules[2]
    w = BitWriter()
    encode_rule_body(rule, {}, w)
    d = delta_encode
    expected = (d(2) + "0" + d(2) + "1" + d(1) + "1" + d(2) + d(1)
                + "0" + d(2) + "1" + d(1) + "0" + d(3) + d(1))
    assert str(w) == expected
    assert len(w) == 30


def test_no_rules_encode_to_nothing():
    assert len(encode_rules(SLHRGrammar(Hypergraph(2, [Edge(1, (1, 2))]), {}))) == 0


def test_rules_roundtrip_on_compressor_output():
    rng = random.Random(3)
    for _ in range(30):
        g = random_simple_graph(rng, 40, 120, 3)
        G = compress(g).grammar
        T = max(e.label for e in g.edges)
        w = encode_rules(G, T)
        assert decode_rules(BitReader(str(w)), len(G.rules), T) == G.rules


# -- container --------------------------------------------------------------------------------------

def test_intro_grammar_roundtrip():
    G = intro_grammar()
    c = read_container(write_container(G, labels=ab_labels()))
    assert c.grammar.start == G.start and c.grammar.rules == G.rules
    assert c.labels.names == ["a", "b"]
    assert c.mapping is None and c.node_names is None


def test_two_writes_identical():
    G = dt_example()
    assert write_container(G) == write_container(G.copy())


def test_rule_ext_order_is_normalised():
    G = dt_example()  # rule 4 has ext (1, 4, 3)
    c = read_container(write_container(G))
    assert c.grammar.rules[4].ext == (1, 2, 3)
    assert val(c.grammar) == val(G)


def test_mapping_and_names_roundtrip():
    g = grid(3)
    res = compress(g)
    names = [f"n{i}" for i in range(g.node_count)]
    c = read_container(write_container(res.grammar, res.mapping, LabelDictionary(["e"], [2]), names))
    assert c.mapping == res.mapping and c.node_names == names
    assert same_graph(apply_mapping(val(c.grammar), c.mapping), g)


def test_hyperedges_and_parallel_edges_in_start_graph():
    S = Hypergraph(4, [Edge(1, (3, 1, 2)), Edge(1, (1, 2, 4)), Edge(2, (1, 2)), Edge(2, (1, 2)),
                       Edge(3, (4,))], (2, 4))
    G = SLHRGrammar(S, {})
    c = read_container(write_container(G))
    assert c.grammar.start.same_as(S)


@pytest.mark.parametrize("g", [grid(3), triangle_fractal(4), comb(3, 3), T_n(5),
                               disjoint_copies(square_with_diagonal(), 32)],
                         ids=["grid", "tf", "comb", "tn", "copies"])
def test_pipeline_roundtrip_on_fixtures(g):
    for cfg in (CompressorConfig(), CompressorConfig(max_rank=None, order="nat")):
        res = compress(g, cfg)
        data = write_container(res.grammar, res.mapping)
        c = read_container(data)
        assert c.grammar.start == res.grammar.start and c.grammar.rules == res.grammar.rules
        assert same_graph(apply_mapping(val(c.grammar), c.mapping), g)
        assert write_container(c.grammar, c.mapping) == data


def test_truncated_container():
    data = write_container(dt_example())
    for cut in (3, 8, len(data) - 1):
        with pytest.raises(CodecError):
            read_container(data[:cut])
    with pytest.raises(TruncatedError):
        read_container(data[:-1])


def test_bad_magic_and_version():
    data = write_container(dt_example())
    with pytest.raises(BadMagicError):
        read_container(b"XXXX" + data[4:])
    with pytest.raises(VersionMismatchError):
        read_container(data[:4] + bytes([99]) + data[5:])


def test_corrupt_payload_is_a_codec_error():
    rng = random.Random(1)
    data = bytearray(write_container(compress(grid(3)).grammar))
    errors = 0
    for _ in range(200):
        d = bytearray(data)
        i = rng.randrange(9, len(d))
        d[i] ^= 1 << rng.randrange(8)
        try:
            read_container(bytes(d))
        except CodecError:
            errors += 1
    assert errors > 0
