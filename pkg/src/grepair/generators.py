"""Synthetic graph families and string/tree encodings."""
from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .edgelist import LabelDictionary
from .hypergraph import Edge, Hypergraph, HypergraphBuilder, disjoint_union


def _label(sym, labels: LabelDictionary | None, rank: int) -> int:
    if isinstance(sym, int):
        return sym
    if labels is None:
        raise TypeError("symbolic labels need a LabelDictionary")
    return labels.intern(str(sym), rank)


def s_graph(word: Sequence, labels: LabelDictionary | None = None) -> Hypergraph:
    """String graph: a path of |w| edges, ext = first and last node.

    Symbols are label ids, or strings interned into ``labels``. The empty
    word gives a single node with a one-element ext.
    """
    if isinstance(word, str) and labels is None:
        labels = LabelDictionary()
    n = len(word)
    edges = [Edge(_label(a, labels, 2), (i + 1, i + 2)) for i, a in enumerate(word)]
    return Hypergraph(n + 1, edges, (1,) if n == 0 else (1, n + 1))


# -- trees ------------------------------------------------------------------------

@dataclass(frozen=True)
class Tree:
    symbol: object
    children: tuple["Tree", ...] = ()

    def __len__(self) -> int:
        return 1 + sum(len(c) for c in self.children)


class TreeError(ValueError):
    pass


def parse_tree(text: str) -> Tree:
    """``f(a, g(a, b))`` style terms."""
    pos = 0

    def skip():
        nonlocal pos
        while pos < len(text) and text[pos].isspace():
            pos += 1

    def term() -> Tree:
        nonlocal pos
        skip()
        start = pos
        while pos < len(text) and text[pos] not in "(),\t\n ":
            pos += 1
        if start == pos:
            raise TreeError(f"expected a symbol at position {pos}")
        sym = text[start:pos]
        skip()
        kids = []
        if pos < len(text) and text[pos] == "(":
            pos += 1
            kids.append(term())
            skip()
            while pos < len(text) and text[pos] == ",":
                pos += 1
                kids.append(term())
                skip()
            if pos >= len(text) or text[pos] != ")":
                raise TreeError(f"expected ')' at position {pos}")
            pos += 1
        return Tree(sym, tuple(kids))

    t = term()
    skip()
    if pos != len(text):
        raise TreeError(f"trailing input at position {pos}")
    return t


def t_graph(t: Tree, labels: LabelDictionary | None = None,
            ranks: dict | None = None) -> Hypergraph:
    """Tree graph: one node per tree node, a rank k+1 edge per symbol of rank k.

    Node ids follow pre-order; the edge of a tree node attaches the node
    itself first, then its children. ext = root. ``ranks`` optionally fixes
    the ranked alphabet; every symbol must be used with a single rank.
    """
    seen: dict = dict(ranks or {})
    if labels is None and not isinstance(t.symbol, int):
        labels = LabelDictionary()
    b = HypergraphBuilder()
    pending = []

    def visit(node: Tree) -> int:
        k = len(node.children)
        if seen.setdefault(node.symbol, k) != k:
            raise TreeError(f"symbol {node.symbol!r} used with rank {k} and {seen[node.symbol]}")
        v = b.add_node()
        lab = _label(node.symbol, labels, k + 1)
        kids = [visit(c) for c in node.children]
        pending.append((v, Edge(lab, (v, *kids))))
        return v

    root = visit(t)
    pending.sort()
    b.edges.extend(e for _, e in pending)
    b.ext.append(root)
    return b.build()


# -- families ---------------------------------------------------------------------

def grid(n: int, label: int = 1) -> Hypergraph:
    """n rows of 2^n nodes; i -> i+1 inside a row, i -> i+2^n between rows."""
    if n < 1:
        raise ValueError("n >= 1")
    w = 2 ** n
    total = n * w
    edges = []
    for i in range(1, total + 1):
        if i % w != 0:
            edges.append(Edge(label, (i, i + 1)))
        if i + w <= total:
            edges.append(Edge(label, (i, i + w)))
    return Hypergraph(total, edges)


def triangle_fractal(n: int, label: int = 1) -> Hypergraph:
    """tf_1 is the triangle 1->2->3->1; each round adds a triangle on every
    edge touching a degree-2 node (scanned in ascending edge order)."""
    if n < 1:
        raise ValueError("n >= 1")
    edges = [(1, 2), (2, 3), (3, 1)]
    count = 3
    for _ in range(n - 1):
        deg = [0] * (count + 1)
        for u, v in edges:
            deg[u] += 1
            deg[v] += 1
        outer = [(u, v) for u, v in edges if deg[u] == 2 or deg[v] == 2]
        for u, v in outer:
            count += 1
            edges += [(u, count), (v, count)]
    return Hypergraph(count, [Edge(label, e) for e in edges])


def comb(n: int, k: int, f_label: int = 1, a_label: int = 2) -> Hypergraph:
    """t-graph of a right comb of 2^n f_k nodes with k-1 a-leaves each
    (the last f_k node has k a-leaves)."""
    if n < 1 or k < 1:
        raise ValueError("n >= 1 and k >= 1")
    leaf = Tree(a_label)
    t = Tree(f_label, (leaf,) * k)
    for _ in range(2 ** n - 1):
        t = Tree(f_label, (leaf,) * (k - 1) + (t,))
    return t_graph(t)


def chain_with_cycle(n: int, f_label: int = 1, a_base: int = 2) -> Hypergraph:
    """T_n: a path of 2^n f-edges; path node j (0-based) carries a fresh leaf
    through an a_{(j + 2^n + 1) mod 5} edge. Label a_l is ``a_base + l``."""
    if n < 1:
        raise ValueError("n >= 1")
    p = 2 ** n
    edges = [Edge(f_label, (j + 1, j + 2)) for j in range(p)]
    for j in range(p + 1):
        i = j + p + 1
        edges.append(Edge(a_base + i % 5, (j + 1, p + 2 + j)))
    return Hypergraph(2 * p + 2, edges)


T_n = chain_with_cycle


def square_with_diagonal(label: int = 1) -> Hypergraph:
    return Hypergraph(4, [Edge(label, (1, 2)), Edge(label, (2, 3)), Edge(label, (3, 4)),
                          Edge(label, (4, 1)), Edge(label, (1, 3))])


def disjoint_copies(g: Hypergraph, m: int) -> Hypergraph:
    if m < 1:
        raise ValueError("m >= 1")
    return disjoint_union([g] * m)


def random_graph(rng: random.Random, n: int, m: int, labels: int = 1) -> Hypergraph:
    """Uniform simple directed graph: m distinct (label, u, v) with u != v."""
    cap = labels * n * (n - 1)
    if m > cap:
        raise ValueError(f"at most {cap} distinct edges on {n} nodes")
    seen: set[Edge] = set()
    edges = []
    while len(edges) < m:
        u, v = rng.sample(range(1, n + 1), 2)
        e = Edge(rng.randint(1, labels), (u, v))
        if e not in seen:
            seen.add(e)
            edges.append(e)
    return Hypergraph(n, edges)
