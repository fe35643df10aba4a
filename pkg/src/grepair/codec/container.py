"""Rule encoding and the container format.

Layout: magic ``GRG1``, a version byte, the payload length in bits (4 bytes,
big endian), then one bit stream:

    header      counts of start-graph nodes, terminal labels, nonterminals,
                distinct permutations; start-graph ext
    dictionary  per terminal label: rank, name
    perms       attachment-order patterns used by incidence sections
    adjacency   per rank-2 label of the start graph: k2-tree
    incidence   per other label: edge count, k2-tree over edges x nodes,
                one fixed-width permutation index per edge
    rules       per nonterminal, ascending
    mapping     optional original node ids and node names

Counts that may be zero are written as delta(x + 1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from ..edgelist import LabelDictionary
from ..grammar import SLHRGrammar
from ..hypergraph import Edge, Hypergraph
from .bits import BitReader, BitWriter, CodecError, MalformedError, TruncatedError
from .k2tree import k2_encode, k2_from_bits, k2_length

MAGIC = b"GRG1"
VERSION = 1


class BadMagicError(CodecError):
    pass


class VersionMismatchError(CodecError):
    pass


@dataclass
class Container:
    grammar: SLHRGrammar
    labels: LabelDictionary
    mapping: list[int] | None = None
    node_names: list[str] | None = None


def _terminal_count(G: SLHRGrammar, labels: LabelDictionary | None) -> int:
    terms = [e.label for h in [G.start, *G.rules.values()] for e in h.edges if e.label not in G.rules]
    top = max(terms, default=0)
    if labels is not None:
        if top > len(labels):
            raise CodecError(f"terminal label {top} missing from the label dictionary")
        return len(labels)
    return top


def dense_nonterminals(G: SLHRGrammar, first: int) -> SLHRGrammar:
    """Renumber nonterminals to first, first+1, ... in ascending order."""
    ren = {a: first + i for i, a in enumerate(sorted(G.rules))}
    if all(a == b for a, b in ren.items()):
        return G

    def rl(g: Hypergraph) -> Hypergraph:
        return Hypergraph(g.node_count, [Edge(ren.get(e.label, e.label), e.att) for e in g.edges], g.ext)

    return SLHRGrammar(rl(G.start), {ren[a]: rl(h) for a, h in G.rules.items()})


# -- rules ----------------------------------------------------------------------

def ext_first(h: Hypergraph) -> Hypergraph:
    """Renumber so that the external nodes are 1..r in ext order.

    Internal nodes keep their relative order, so derivations number them
    exactly as before.
    """
    ext = list(h.ext)
    ren = {v: i + 1 for i, v in enumerate(ext)}
    nxt = len(ext)
    for v in range(1, h.node_count + 1):
        if v not in ren:
            nxt += 1
            ren[v] = nxt
    return Hypergraph(h.node_count, [Edge(e.label, tuple(ren[v] for v in e.att)) for e in h.edges],
                      range(1, len(ext) + 1))


def encode_rule_body(h: Hypergraph, nt_index: dict[int, int], w: BitWriter) -> None:
    """Edge count, then per edge: kind bit, attachment count, (ext flag, id) per node, label."""
    if not h.edges:
        raise CodecError("cannot encode a rule without edges")
    ext = set(h.ext)
    w.delta(len(h.edges))
    for e in h.edges:
        nt = e.label in nt_index
        w.bit(nt)
        w.delta(len(e.att))
        for v in e.att:
            w.bit(v in ext)
            w.delta(v)
        w.delta(nt_index[e.label] if nt else e.label)


def encode_rules(G: SLHRGrammar, terminals: int | None = None) -> BitWriter:
    T = _terminal_count(G, None) if terminals is None else terminals
    G = dense_nonterminals(G, T + 1)
    nt_index = {a: a - T for a in G.rules}
    w = BitWriter()
    for a in sorted(G.rules):
        h = G.rules[a]
        if len(set(h.ext)) != len(h.ext):
            raise CodecError(f"rule {a}: external nodes repeat, got {h.ext}")
        if list(h.ext) != sorted(h.ext):
            h = ext_first(h)
        on_edge = {v for e in h.edges for v in e.att}
        iso = [v for v in h.ext if v not in on_edge]
        w.delta(h.node_count)
        w.count(len(iso))
        for v in iso:
            w.delta(v)
        encode_rule_body(h, nt_index, w)
    return w


def decode_rules(r: BitReader, count: int, terminals: int) -> dict[int, Hypergraph]:
    rules = {}
    for i in range(1, count + 1):
        n = r.delta()
        ext = {r.delta() for _ in range(r.count())}
        edges = []
        for _ in range(r.delta()):
            nt = r.bit()
            att = []
            for _ in range(r.delta()):
                flag = r.bit()
                v = r.delta()
                if v > n:
                    raise MalformedError(f"node {v} exceeds node count {n}")
                if flag:
                    ext.add(v)
                att.append(v)
            lab = r.delta()
            if nt:
                if lab > count:
                    raise MalformedError(f"nonterminal index {lab} out of range")
                lab += terminals
            elif lab > terminals:
                raise MalformedError(f"terminal label {lab} out of range")
            edges.append(Edge(lab, tuple(att)))
        rules[terminals + i] = Hypergraph(n, edges, sorted(ext))
    return rules


# -- container --------------------------------------------------------------------

def _perm_of(att: tuple[int, ...]) -> tuple[int, ...]:
    s = sorted(att)
    return tuple(s.index(v) for v in att)


def canonical_start(g: Hypergraph) -> Hypergraph:
    return Hypergraph(g.node_count, sorted(g.edges), g.ext)


def write_container(G: SLHRGrammar, mapping: list[int] | None = None,
                    labels: LabelDictionary | None = None,
                    node_names: list[str] | None = None) -> bytes:
    T = _terminal_count(G, labels)
    if labels is None:
        labels = LabelDictionary.for_graph(
            Hypergraph(0, [e for h in [G.start, *G.rules.values()] for e in h.edges if e.label not in G.rules]))
    G = dense_nonterminals(G, T + 1)
    S = G.start
    n = S.node_count
    by_label: dict[int, list[Edge]] = {}
    for e in sorted(S.edges):
        by_label.setdefault(e.label, []).append(e)
    adjacency, incidence = [], []
    for lab in sorted(by_label):
        es = by_label[lab]
        if len(es[0].att) == 2 and len(set(es)) == len(es):
            adjacency.append(lab)
        else:
            incidence.append(lab)
    perms: dict[tuple[int, ...], int] = {}
    for lab in incidence:
        for e in by_label[lab]:
            perms.setdefault(_perm_of(e.att), len(perms))
    width = math.ceil(math.log2(len(perms))) if len(perms) > 1 else 0

    w = BitWriter()
    w.count(n)
    w.count(T)
    w.count(len(G.rules))
    w.count(len(perms))
    w.count(len(S.ext))
    for v in S.ext:
        w.delta(v)
    for i in range(T):
        w.delta(labels.ranks[i])
        w.raw_bytes(labels.names[i].encode("utf-8"))
    for p in perms:
        w.delta(len(p))
        for x in p:
            w.delta(x + 1)
    w.count(len(adjacency))
    for lab in adjacency:
        t = k2_encode(((e.att[0] - 1, e.att[1] - 1) for e in by_label[lab]), max(n, 1))
        w.delta(lab)
        w.extend(t.bits)
    w.count(len(incidence))
    for lab in incidence:
        es = by_label[lab]
        t = k2_encode(((i, v - 1) for i, e in enumerate(es) for v in e.att), len(es), max(n, 1))
        w.delta(lab)
        w.delta(len(es))
        w.extend(t.bits)
        for e in es:
            w.fixed(perms[_perm_of(e.att)], width)
    w.extend(encode_rules(G, T).bits)
    w.bit(mapping is not None)
    if mapping is not None:
        w.count(len(mapping) - 1)
        for v in mapping[1:]:
            w.delta(v)
    w.bit(node_names is not None)
    if node_names is not None:
        w.count(len(node_names))
        for s in node_names:
            w.raw_bytes(s.encode("utf-8"))
    payload = w.to_bytes()
    return MAGIC + bytes([VERSION]) + len(w).to_bytes(4, "big") + payload


def read_container(data: bytes) -> Container:
    if not data.startswith(MAGIC[:len(data)]) or (len(data) >= 4 and data[:4] != MAGIC):
        raise BadMagicError("not a grammar container (bad magic)")
    if len(data) < 9:
        raise TruncatedError("container header truncated")
    if data[4] != VERSION:
        raise VersionMismatchError(f"container version {data[4]}, this reader supports {VERSION}")
    nbits = int.from_bytes(data[5:9], "big")
    if (nbits + 7) // 8 > len(data) - 9:
        raise TruncatedError(f"payload truncated: {len(data) - 9} of {(nbits + 7) // 8} bytes")
    r = BitReader(data[9:], nbits)
    try:
        return _read_payload(r)
    except (IndexError, ValueError) as exc:
        if isinstance(exc, CodecError):
            raise
        raise MalformedError(str(exc)) from exc


def _read_bits_tree(r: BitReader, rows: int, cols: int):
    rest = r.bits[r.pos:]
    k = k2_length(rest, rows, cols)
    t = k2_from_bits(rest[:k], rows, cols)
    r.pos += k
    return t


def _read_payload(r: BitReader) -> Container:
    n = r.count()
    T = r.count()
    K = r.count()
    P = r.count()
    ext = [r.delta() for _ in range(r.count())]
    labels = LabelDictionary()
    for _ in range(T):
        rank = r.delta()
        labels.intern(r.raw_bytes().decode("utf-8"), rank)
    if len(labels) != T:
        raise MalformedError("duplicate names in label dictionary")
    perms = []
    for _ in range(P):
        perms.append(tuple(r.delta() - 1 for _ in range(r.delta())))
    width = math.ceil(math.log2(P)) if P > 1 else 0
    edges: list[Edge] = []
    for _ in range(r.count()):
        lab = r.delta()
        t = _read_bits_tree(r, max(n, 1), max(n, 1))
        edges.extend(Edge(lab, (i + 1, j + 1)) for i, j in t.cells())
    for _ in range(r.count()):
        lab = r.delta()
        m = r.delta()
        t = _read_bits_tree(r, m, max(n, 1))
        rows: list[list[int]] = [[] for _ in range(m)]
        for i, j in t.cells():
            rows[i].append(j + 1)
        for row in rows:
            k = r.fixed(width)
            if k >= len(perms) or len(perms[k]) != len(row):
                raise MalformedError("bad permutation index")
            edges.append(Edge(lab, tuple(row[x] for x in perms[k])))
    rules = decode_rules(r, K, T)
    mapping = None
    if r.bit():
        N = r.count()
        mapping = [0] + [r.delta() for _ in range(N)]
    names = None
    if r.bit():
        names = [r.raw_bytes().decode("utf-8") for _ in range(r.count())]
    if r.remaining() >= 8:
        raise MalformedError("trailing data after container payload")
    start = Hypergraph(n, sorted(edges), ext)
    return Container(SLHRGrammar(start, rules), labels, mapping, names)
