"""Straight-line hyperedge replacement grammars."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator

from .hypergraph import Edge, Hypergraph, size, validate


class GrammarError(ValueError):
    pass


def sibling_order(g: Hypergraph, nonterminals) -> list[int]:
    """Indices of the nonterminal edges of g in derivation order.

    Sorted by attachment (lexicographic), then label, then insertion index.
    """
    idx = [i for i, e in enumerate(g.edges) if e.label in nonterminals]
    idx.sort(key=lambda i: (g.edges[i].att, g.edges[i].label, i))
    return idx


def replace_edge(g: Hypergraph, index: int, h: Hypergraph) -> Hypergraph:
    """g[e/h] with the canonical renaming: internal nodes of h become n+1.. in ascending order."""
    e = g.edges[index]
    if len(e.att) != len(h.ext):
        raise GrammarError(f"rank mismatch: edge has {len(e.att)} attachments, rhs has {len(h.ext)} external nodes")
    rho = _renaming(g.node_count, e.att, h)
    edges = list(g.edges[:index]) + list(g.edges[index + 1:])
    edges += [Edge(f.label, tuple(rho[v] for v in f.att)) for f in h.edges]
    return Hypergraph(g.node_count + h.node_count - len(set(h.ext)), edges, g.ext)


def _renaming(n: int, att, h: Hypergraph) -> dict[int, int]:
    rho = {}
    for x, v in zip(h.ext, att):
        rho.setdefault(x, v)
    nxt = n
    for v in range(1, h.node_count + 1):
        if v not in rho:
            nxt += 1
            rho[v] = nxt
    return rho


def substitute_all(g: Hypergraph, label: int, h: Hypergraph) -> Hypergraph:
    """Replace every ``label``-edge of g by h, in edge order."""
    keep = [e for e in g.edges if e.label != label]
    n = g.node_count
    added: list[Edge] = []
    for e in g.edges:
        if e.label == label:
            rho = _renaming(n, e.att, h)
            n += h.node_count - len(set(h.ext))
            added += [Edge(f.label, tuple(rho[v] for v in f.att)) for f in h.edges]
    return Hypergraph(n, keep + added, g.ext)


@dataclass
class SLHRGrammar:
    start: Hypergraph
    rules: dict[int, Hypergraph] = field(default_factory=dict)

    # -- basic accessors -----------------------------------------------------
    def rank(self, a: int) -> int:
        return len(self.rules[a].ext)

    @property
    def nonterminals(self) -> list[int]:
        return sorted(self.rules)

    def is_nonterminal(self, label: int) -> bool:
        return label in self.rules

    def right_hand_sides(self) -> Iterator[Hypergraph]:
        yield self.start
        yield from self.rules.values()

    def children(self, g: Hypergraph) -> list[int]:
        return sibling_order(g, self.rules)

    @cached_property
    def topo_order(self) -> list[int]:
        """Nonterminals, every one after all nonterminals its rhs references."""
        order: list[int] = []
        state: dict[int, int] = {}
        for root in sorted(self.rules):
            if root in state:
                continue
            stack = [(root, iter(sorted({e.label for e in self.rules[root].edges if e.label in self.rules})))]
            state[root] = 1
            while stack:
                a, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    stack.pop()
                    state[a] = 2
                    order.append(a)
                elif nxt not in state:
                    state[nxt] = 1
                    stack.append((nxt, iter(sorted({e.label for e in self.rules[nxt].edges
                                                    if e.label in self.rules}))))
                elif state[nxt] == 1:
                    raise GrammarError(f"cyclic reference through nonterminal {nxt}")
        return order

    @cached_property
    def node_counts(self) -> dict[int, int]:
        """#nodes(A): internal nodes of val(A)."""
        out: dict[int, int] = {}
        for a in self.topo_order:
            h = self.rules[a]
            out[a] = h.node_count - len(set(h.ext)) + sum(
                out[e.label] for e in h.edges if e.label in self.rules)
        return out

    @cached_property
    def heights(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for a in self.topo_order:
            out[a] = 1 + max((out[e.label] for e in self.rules[a].edges if e.label in self.rules), default=0)
        return out

    def height(self) -> int:
        return max((self.heights[e.label] for e in self.start.edges if e.label in self.rules), default=0)

    def val_node_count(self) -> int:
        return self.start.node_count + sum(self.node_counts[e.label] for e in self.start.edges
                                           if e.label in self.rules)

    def refs(self) -> Counter:
        c: Counter = Counter()
        for g in self.right_hand_sides():
            for e in g.edges:
                if e.label in self.rules:
                    c[e.label] += 1
        return c

    def size(self) -> int:
        return sum(size(g).total for g in self.right_hand_sides())

    def copy(self) -> "SLHRGrammar":
        return SLHRGrammar(self.start, dict(self.rules))


# -- derivation ---------------------------------------------------------------

def derive(G: SLHRGrammar) -> tuple[Hypergraph, list[tuple[int, ...]]]:
    """val(G) plus, per derived edge, the derivation path that produced it.

    A path is the tuple of rhs edge indices from the start graph down to the
    rule holding the edge, followed by the edge's own index.
    """
    rules = G.rules
    G.topo_order  # raises on cyclic references
    for a, h in rules.items():
        if len(set(h.ext)) != len(h.ext):
            raise GrammarError(f"rule {a} repeats an external node; apply normalize_ext first")
    S = G.start
    n = S.node_count
    edges: list[Edge] = []
    paths: list[tuple[int, ...]] = []
    for i, e in enumerate(S.edges):
        if e.label not in rules:
            edges.append(e)
            paths.append((i,))
    stack = [(S.edges[i].att, S.edges[i].label, (i,)) for i in reversed(G.children(S))]
    child_cache: dict[int, list[int]] = {}
    while stack:
        att, a, path = stack.pop()
        h = rules[a]
        rho = _renaming(n, att, h)
        n += h.node_count - len(set(h.ext))
        for i, f in enumerate(h.edges):
            if f.label not in rules:
                edges.append(Edge(f.label, tuple(rho[v] for v in f.att)))
                paths.append(path + (i,))
        kids = child_cache.get(a)
        if kids is None:
            kids = child_cache[a] = G.children(h)
        for i in reversed(kids):
            f = h.edges[i]
            stack.append((tuple(rho[v] for v in f.att), f.label, path + (i,)))
    return Hypergraph(n, edges, S.ext), paths


def val(G: SLHRGrammar) -> Hypergraph:
    return derive(G)[0]


def handle(G: SLHRGrammar, a: int) -> Hypergraph:
    """A single a-edge on rank(a) external nodes."""
    r = G.rank(a)
    return Hypergraph(r, [Edge(a, tuple(range(1, r + 1)))], range(1, r + 1))


def val_of(G: SLHRGrammar, a: int) -> Hypergraph:
    """val(A), i.e. val of handle(A): external nodes first, then internal nodes."""
    return val(SLHRGrammar(handle(G, a), G.rules))


# -- validation ---------------------------------------------------------------

def validate_straight_line(G: SLHRGrammar) -> list[str]:
    problems: list[str] = []
    for a, h in G.rules.items():
        for v in validate(h):
            problems.append(f"rule {a}: {v.kind} {v.detail}")
    for v in validate(G.start):
        problems.append(f"start: {v.kind} {v.detail}")
    for g in G.right_hand_sides():
        for e in g.edges:
            if e.label in G.rules and len(e.att) != G.rank(e.label):
                problems.append(f"edge {e} has rank {len(e.att)} but rule {e.label} has rank {G.rank(e.label)}")
    try:
        G.topo_order
    except GrammarError as exc:
        problems.append(f"acyclicity: {exc}")
        return problems
    reached = {e.label for e in G.start.edges if e.label in G.rules}
    todo = list(reached)
    while todo:
        a = todo.pop()
        for e in G.rules[a].edges:
            if e.label in G.rules and e.label not in reached:
                reached.add(e.label)
                todo.append(e.label)
    for a in sorted(set(G.rules) - reached):
        problems.append(f"uselessness: rule {a} is never referenced")
    return problems


# -- contribution and inlining -------------------------------------------------

def handle_size(rank: int) -> int:
    return rank + (1 if rank <= 2 else rank)


def contribution(G: SLHRGrammar, a: int, refs: Counter | None = None) -> int:
    if a not in G.rules:
        raise GrammarError(f"unknown nonterminal {a}")
    ref = (refs or G.refs())[a]
    rhs = size(G.rules[a]).total
    return ref * (rhs - handle_size(G.rank(a))) - rhs


def inline_nonterminal(G: SLHRGrammar, a: int) -> SLHRGrammar:
    if a not in G.rules:
        raise GrammarError(f"unknown nonterminal {a}")
    h = G.rules[a]
    rules = {}
    for b, g in G.rules.items():
        if b != a:
            rules[b] = substitute_all(g, a, h) if any(e.label == a for e in g.edges) else g
    start = substitute_all(G.start, a, h) if any(e.label == a for e in G.start.edges) else G.start
    return SLHRGrammar(start, rules)


# -- normal forms --------------------------------------------------------------

def normalize_ext(G: SLHRGrammar) -> SLHRGrammar:
    """Make every rhs ext-distinct by keeping only the first occurrence of each ext node.

    Attachment positions that repeated an ext node are dropped from every
    edge using that nonterminal, and the dropped attachment node is glued
    onto the one at the first occurrence.
    """
    rules = dict(G.rules)
    start = G.start
    for a in G.topo_order:
        h = rules[a]
        if len(set(h.ext)) == len(h.ext):
            continue
        first: dict[int, int] = {}
        keep = []
        glue = []  # (position, position of first occurrence)
        for i, x in enumerate(h.ext):
            if x in first:
                glue.append((i, first[x]))
            else:
                first[x] = i
                keep.append(i)
        rules[a] = Hypergraph(h.node_count, h.edges, [h.ext[i] for i in keep])
        for b in list(rules):
            if any(e.label == a for e in rules[b].edges):
                rules[b] = _project(rules[b], a, keep, glue)
        if any(e.label == a for e in start.edges):
            start = _project(start, a, keep, glue)
    return SLHRGrammar(start, rules)


def _project(g: Hypergraph, a: int, keep: list[int], glue: list[tuple[int, int]]) -> Hypergraph:
    merge: dict[int, int] = {}

    def find(v: int) -> int:
        while v in merge:
            v = merge[v]
        return v

    for e in g.edges:
        if e.label == a:
            for i, j in glue:
                x, y = find(e.att[i]), find(e.att[j])
                if x != y:
                    merge[max(x, y)] = min(x, y)
    survivors = [v for v in range(1, g.node_count + 1) if find(v) == v]
    new_id = {v: k + 1 for k, v in enumerate(survivors)}

    def m(v: int) -> int:
        return new_id[find(v)]

    edges = []
    for e in g.edges:
        att = tuple(m(v) for v in e.att)
        if e.label == a:
            att = tuple(att[i] for i in keep)
        edges.append(Edge(e.label, att))
    return Hypergraph(len(survivors), edges, [m(v) for v in g.ext])


def limit_to_two_nonterminals(G: SLHRGrammar) -> SLHRGrammar:
    """Bundle nonterminal edges so that no rhs holds more than two of them.

    For a rhs with sibling tuple e1..en (n > 2), the first n-1 edges move
    into a fresh rule whose nodes are numbered by ascending host id, which
    keeps val(G) identical node for node.
    """
    if all(len(G.children(g)) <= 2 for g in G.right_hand_sides()):
        return G
    # spread existing nonterminal ids so fresh ids can be slotted in between
    total = sum(1 for g in G.right_hand_sides() for e in g.edges if e.label in G.rules)
    scale = total + 2
    terminals = {e.label for g in G.right_hand_sides() for e in g.edges if e.label not in G.rules}
    base = max(terminals, default=0) + 1

    def rl(x: int) -> int:
        return (base + x) * scale if x in G.rules else x

    def relabel(g: Hypergraph) -> Hypergraph:
        return Hypergraph(g.node_count, [Edge(rl(e.label), e.att) for e in g.edges], g.ext)

    rules = {rl(a): relabel(h) for a, h in G.rules.items()}
    start = relabel(G.start)
    used: set[int] = set(rules)
    work: list[int | None] = [None] + list(rules)
    while work:
        key = work.pop()
        g = start if key is None else rules[key]
        kids = sibling_order(g, rules)
        if len(kids) <= 2:
            continue
        bundle, last = kids[:-1], kids[-1]
        nodes = sorted({v for i in bundle for v in g.edges[i].att})
        local = {v: k + 1 for k, v in enumerate(nodes)}
        body = Hypergraph(len(nodes), [Edge(g.edges[i].label, tuple(local[v] for v in g.edges[i].att))
                                       for i in bundle], range(1, len(nodes) + 1))
        fresh = g.edges[last].label - 1
        while fresh in used or fresh in terminals:
            fresh -= 1
        used.add(fresh)
        rules[fresh] = body
        drop = set(bundle)
        edges = [e for i, e in enumerate(g.edges) if i not in drop] + [Edge(fresh, tuple(nodes))]
        new = Hypergraph(g.node_count, edges, g.ext)
        if key is None:
            start = new
        else:
            rules[key] = new
        work.append(fresh)
    return SLHRGrammar(start, rules)


# -- statistics ----------------------------------------------------------------

@dataclass(frozen=True)
class GrammarStats:
    rule_count: int
    size: int
    height: int
    node_counts: dict[int, int]


def stats(G: SLHRGrammar) -> GrammarStats:
    return GrammarStats(len(G.rules), G.size(), G.height(), dict(G.node_counts))


def dump(G: SLHRGrammar) -> str:
    """Readable text form, one block per rule."""
    lines = []

    def block(name: str, g: Hypergraph):
        lines.append(f"{name}/{len(g.ext)} -> nodes={g.node_count} ext=({','.join(map(str, g.ext))})")
        for e in g.edges:
            kind = "N" if e.label in G.rules else "T"
            lines.append(f"  {kind}{e.label} ({','.join(map(str, e.att))})")

    block("S", G.start)
    for a in G.nonterminals:
        block(str(a), G.rules[a])
    return "\n".join(lines)

