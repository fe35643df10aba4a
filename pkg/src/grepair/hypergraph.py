"""Hypergraph value type, validation and the size measure."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, NamedTuple, Sequence

# reserved label ids
VIRTUAL_LABEL = 0
EPSILON_LABEL = -1


class Edge(NamedTuple):
    label: int
    att: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.att)


class Hypergraph:
    """Nodes are 1..node_count; edges keep their insertion index as id.

    Instances are treated as immutable. Use :class:`HypergraphBuilder` to
    assemble one incrementally.
    """

    __slots__ = ("node_count", "edges", "ext", "__dict__")

    def __init__(self, node_count: int, edges: Iterable[Edge | tuple] = (),
                 ext: Sequence[int] = ()):
        self.node_count = int(node_count)
        self.edges: tuple[Edge, ...] = tuple(
            e if isinstance(e, Edge) else Edge(int(e[0]), tuple(e[1])) for e in edges)
        self.ext: tuple[int, ...] = tuple(ext)

    def __repr__(self) -> str:
        return f"Hypergraph(n={self.node_count}, edges={list(self.edges)}, ext={self.ext})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (self.node_count == other.node_count and self.ext == other.ext
                and self.edges == other.edges)

    def __hash__(self) -> int:
        return hash((self.node_count, self.edges, self.ext))

    @cached_property
    def incidence(self) -> dict[int, tuple[int, ...]]:
        """node -> ids of incident edges, ascending."""
        inc: dict[int, list[int]] = {v: [] for v in range(1, self.node_count + 1)}
        for i, e in enumerate(self.edges):
            for v in e.att:
                if v in inc and (not inc[v] or inc[v][-1] != i):
                    inc[v].append(i)
        return {v: tuple(ids) for v, ids in inc.items()}

    def degree(self, v: int) -> int:
        return len(self.incidence[v])

    def edge_multiset(self) -> list[Edge]:
        return sorted(self.edges)

    def same_as(self, other: "Hypergraph") -> bool:
        """Equality ignoring edge order."""
        return (self.node_count == other.node_count and self.ext == other.ext
                and self.edge_multiset() == other.edge_multiset())

    def labels(self) -> set[int]:
        return {e.label for e in self.edges}

    def internal_nodes(self) -> list[int]:
        ext = set(self.ext)
        return [v for v in range(1, self.node_count + 1) if v not in ext]


@dataclass
class HypergraphBuilder:
    node_count: int = 0
    edges: list[Edge] = field(default_factory=list)
    ext: list[int] = field(default_factory=list)

    def add_node(self) -> int:
        self.node_count += 1
        return self.node_count

    def add_nodes(self, k: int) -> list[int]:
        return [self.add_node() for _ in range(k)]

    def add_edge(self, label: int, *att: int) -> int:
        self.edges.append(Edge(label, tuple(att)))
        return len(self.edges) - 1

    def build(self) -> Hypergraph:
        return Hypergraph(self.node_count, self.edges, self.ext)


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    kind: str  # "C1", "C2", "rank", "dangling"
    detail: str


def validate(g: Hypergraph, ranks: dict[int, int] | None = None) -> list[Violation]:
    """Return every violated invariant; an empty list means valid.

    ``ranks`` optionally fixes the rank of some labels. Labels without a
    given rank must still be used with one consistent rank.
    """
    out: list[Violation] = []
    seen_rank: dict[int, int] = dict(ranks or {})
    n = g.node_count
    for i, e in enumerate(g.edges):
        if len(e.att) == 0:
            out.append(Violation("rank", f"edge {i} has empty attachment"))
        if len(set(e.att)) != len(e.att):
            out.append(Violation("C1", f"edge {i} attaches a node twice: {e.att}"))
        for v in e.att:
            if not 1 <= v <= n:
                out.append(Violation("dangling", f"edge {i} references node {v}"))
        r = seen_rank.setdefault(e.label, len(e.att))
        if r != len(e.att):
            out.append(Violation("rank", f"edge {i} label {e.label} has rank {len(e.att)}, expected {r}"))
    if len(set(g.ext)) != len(g.ext):
        out.append(Violation("C2", f"ext repeats a node: {g.ext}"))
    for v in g.ext:
        if not 1 <= v <= n:
            out.append(Violation("dangling", f"ext references node {v}"))
    return out


def is_valid(g: Hypergraph) -> bool:
    return not validate(g)


# -- size -------------------------------------------------------------------

def edge_size(e: Edge) -> int:
    return 1 if len(e.att) <= 2 else len(e.att)


@dataclass(frozen=True)
class Size:
    nodes: int
    edges: int

    @property
    def total(self) -> int:
        return self.nodes + self.edges


def size(g: Hypergraph) -> Size:
    return Size(g.node_count, sum(edge_size(e) for e in g.edges))


def is_simple(g: Hypergraph) -> bool:
    seen = set()
    for e in g.edges:
        if len(e.att) != 2 or e in seen:
            return False
        seen.add(e)
    return True


# -- paths ------------------------------------------------------------------

def successors(g: Hypergraph) -> dict[int, set[int]]:
    """Directed adjacency: a hyperedge leads from its first node to every other node."""
    succ: dict[int, set[int]] = {v: set() for v in range(1, g.node_count + 1)}
    for e in g.edges:
        head = e.att[0]
        for u in e.att[1:]:
            succ[head].add(u)
    return succ


def paths_exist_oracle(g: Hypergraph, s: int, t: int) -> bool:
    """Plain BFS. Reachability is reflexive."""
    if s == t:
        return True
    succ = successors(g)
    seen = {s}
    todo = deque([s])
    while todo:
        v = todo.popleft()
        for u in succ[v]:
            if u == t:
                return True
            if u not in seen:
                seen.add(u)
                todo.append(u)
    return False


def connected_components(g: Hypergraph) -> list[list[int]]:
    """Undirected components, each sorted, listed by smallest node."""
    inc = g.incidence
    seen: set[int] = set()
    comps = []
    for v in range(1, g.node_count + 1):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        todo = [v]
        while todo:
            x = todo.pop()
            for ei in inc[x]:
                for u in g.edges[ei].att:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        todo.append(u)
        comps.append(sorted(comp))
    return comps


def disjoint_union(graphs: Sequence[Hypergraph]) -> Hypergraph:
    b = HypergraphBuilder()
    for g in graphs:
        off = b.node_count
        b.node_count += g.node_count
        for e in g.edges:
            b.edges.append(Edge(e.label, tuple(v + off for v in e.att)))
        b.ext.extend(v + off for v in g.ext)
    return b.build()
