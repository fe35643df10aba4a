"""Node addressing in the compressed grammar.

A node of val(G) is addressed by a derivation path (rhs edge indices from
the start graph down) and a node of the last rhs. Ids follow the canonical
numbering: start-graph nodes first, then each nonterminal edge's internal
nodes in pre-order, children in sibling order.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

from ..grammar import SLHRGrammar, sibling_order
from ..hypergraph import Hypergraph


class QueryError(ValueError):
    pass


@dataclass(frozen=True)
class GRep:
    path: tuple[int, ...]
    node: int


class _RhsInfo:
    __slots__ = ("graph", "internal", "index", "kids", "kid_rank", "prefix", "ext_pos", "incidence")

    def __init__(self, g: Hypergraph, rules, counts: dict[int, int], is_start: bool):
        self.graph = g
        ext = set(g.ext)
        self.internal = [v for v in range(1, g.node_count + 1) if is_start or v not in ext]
        self.index = {v: i for i, v in enumerate(self.internal)}
        self.kids = sibling_order(g, rules)
        self.kid_rank = {e: j for j, e in enumerate(self.kids)}
        self.prefix = [0]
        for e in self.kids:
            self.prefix.append(self.prefix[-1] + counts[g.edges[e].label])
        self.ext_pos: dict[int, int] = {}
        for p, v in enumerate(g.ext):
            self.ext_pos.setdefault(v, p)
        self.incidence = g.incidence


class Addressing:
    """Prefix sums per rhs; maps ids to G-representations and back."""

    def __init__(self, G: SLHRGrammar):
        self.G = G
        self.counts = G.node_counts
        self._infos: dict[int | None, _RhsInfo] = {}
        self.total = G.val_node_count()

    def info(self, key: int | None) -> _RhsInfo:
        inf = self._infos.get(key)
        if inf is None:
            g = self.G.start if key is None else self.G.rules[key]
            inf = self._infos[key] = _RhsInfo(g, self.G.rules, self.counts, key is None)
        return inf

    def _check(self, id_: int) -> None:
        if not 1 <= id_ <= self.total:
            raise QueryError(f"node id {id_} outside 1..{self.total}")

    def get_g_rep(self, id_: int) -> GRep:
        self._check(id_)
        inf = self.info(None)
        n = self.G.start.node_count
        if id_ <= n:
            return GRep((), id_)
        off = id_ - n - 1
        path = []
        while True:
            j = bisect_right(inf.prefix, off) - 1
            e = inf.kids[j]
            path.append(e)
            off -= inf.prefix[j]
            inf = self.info(inf.graph.edges[e].label)
            if off < len(inf.internal):
                return GRep(tuple(path), inf.internal[off])
            off -= len(inf.internal)

    def descend(self, path) -> tuple[_RhsInfo, list[int]]:
        """Info of the rhs at the end of path and the global id of each of its nodes (index 0 unused)."""
        inf = self.info(None)
        ids = list(range(inf.graph.node_count + 1))
        region = inf.graph.node_count + 1   # first id of the current children region
        for e in path:
            if not 0 <= e < len(inf.graph.edges) or e not in inf.kid_rank:
                raise QueryError(f"edge index {e} is not a nonterminal edge")
            edge = inf.graph.edges[e]
            base = region + inf.prefix[inf.kid_rank[e]]
            child = self.info(edge.label)
            new = [0] * (child.graph.node_count + 1)
            for p, v in enumerate(child.graph.ext):
                new[v] = ids[edge.att[p]]
            for i, v in enumerate(child.internal):
                new[v] = base + i
            ids, inf = new, child
            region = base + len(child.internal)
        return inf, ids

    def get_id(self, rep: GRep) -> int:
        inf, ids = self.descend(rep.path)
        if not 1 <= rep.node <= inf.graph.node_count:
            raise QueryError(f"node {rep.node} not in rhs")
        return ids[rep.node]

    def canonical_rep(self, rep: GRep) -> GRep:
        """Climb out of external nodes to the instance that owns the node."""
        return self.get_g_rep(self.get_id(rep))

    def neighbors(self, id_: int, direction: str = "out") -> set[int]:
        if direction not in ("out", "in"):
            raise QueryError(f"direction must be 'out' or 'in', not {direction!r}")
        rep = self.get_g_rep(id_)
        inf, ids = self.descend(rep.path)
        region = self._region(rep.path)
        out: set[int] = set()
        self._collect(inf, ids, region, rep.node, direction == "out", out)
        return out

    def _region(self, path) -> int:
        inf = self.info(None)
        region = inf.graph.node_count + 1
        for e in path:
            base = region + inf.prefix[inf.kid_rank[e]]
            inf = self.info(inf.graph.edges[e].label)
            region = base + len(inf.internal)
        return region

    def _collect(self, inf: _RhsInfo, ids: list[int], region: int, v: int, out_dir: bool, acc: set[int]):
        stack = [(inf, ids, region, v)]
        rules = self.G.rules
        while stack:
            inf, ids, region, v = stack.pop()
            for ei in inf.incidence[v]:
                e = inf.graph.edges[ei]
                if e.label not in rules:
                    if out_dir:
                        if e.att[0] == v:
                            acc.update(ids[u] for u in e.att[1:])
                    elif v in e.att[1:]:
                        acc.add(ids[e.att[0]])
                    continue
                child = self.info(e.label)
                base = region + inf.prefix[inf.kid_rank[ei]]
                new = [0] * (child.graph.node_count + 1)
                for p, x in enumerate(child.graph.ext):
                    new[x] = ids[e.att[p]]
                for i, x in enumerate(child.internal):
                    new[x] = base + i
                for p, u in enumerate(e.att):
                    if u == v:
                        stack.append((child, new, base + len(child.internal), child.graph.ext[p]))


def get_g_rep(G: SLHRGrammar, id_: int) -> GRep:
    return Addressing(G).get_g_rep(id_)


def get_id(G: SLHRGrammar, rep: GRep) -> int:
    return Addressing(G).get_id(rep)


def neighbors(G: SLHRGrammar, id_: int, direction: str = "out") -> set[int]:
    return Addressing(G).neighbors(id_, direction)
