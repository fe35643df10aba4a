"""Node orders used by occurrence counting."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .hypergraph import Hypergraph

KINDS = ("nat", "bfs", "fp0", "fp")


@dataclass(frozen=True)
class NodeOrder:
    kind: str
    sequence: tuple[int, ...]          # nodes in visiting order
    scores: dict[int, object]
    class_count: int | None = None

    @property
    def position(self) -> dict[int, int]:
        return {v: i for i, v in enumerate(self.sequence)}


def _from_scores(kind: str, g: Hypergraph, scores: dict, classes: int | None = None) -> NodeOrder:
    seq = sorted(range(1, g.node_count + 1), key=lambda v: (scores[v], v))
    return NodeOrder(kind, tuple(seq), scores, classes)


def natural_order(g: Hypergraph) -> NodeOrder:
    return NodeOrder("nat", tuple(range(1, g.node_count + 1)), {v: v for v in range(1, g.node_count + 1)})


def _neighbours(g: Hypergraph) -> dict[int, set[int]]:
    nb: dict[int, set[int]] = {v: set() for v in range(1, g.node_count + 1)}
    for e in g.edges:
        for u in e.att:
            nb[u].update(x for x in e.att if x != u)
    return nb


def bfs_order(g: Hypergraph) -> NodeOrder:
    """Score = 1 + BFS depth from a lowest-degree node of each component."""
    inc = g.incidence
    nb = _neighbours(g)
    score: dict[int, int] = {}
    for s in sorted(range(1, g.node_count + 1), key=lambda v: (len(inc[v]), v)):
        if s in score:
            continue
        score[s] = 1
        todo = deque([s])
        while todo:
            v = todo.popleft()
            for u in sorted(nb[v]):
                if u not in score:
                    score[u] = score[v] + 1
                    todo.append(u)
    return _from_scores("bfs", g, score)


def _dense_rank(values: dict[int, object]) -> dict[int, int]:
    rank = {t: i + 1 for i, t in enumerate(sorted(set(values.values())))}
    return {v: rank[t] for v, t in values.items()}


def fp_colours(g: Hypergraph, iterations: int | None = None, directed: bool = True) -> list[dict[int, int]]:
    """Colour history c_0, c_1, ... of the refinement.

    c_0 is the degree. A neighbour entry is (own position, neighbour position,
    label, colour) in directed mode, the bare colour otherwise. Stops at the
    fixpoint or after ``iterations`` rounds.
    """
    inc = g.incidence
    c = {v: len(inc[v]) for v in range(1, g.node_count + 1)}
    history = [c]
    rounds = 0
    while iterations is None or rounds < iterations:
        f = {}
        for v in c:
            entries = []
            for ei in inc[v]:
                e = g.edges[ei]
                pv = e.att.index(v)
                for pu, u in enumerate(e.att):
                    if u != v:
                        entries.append((pv, pu, e.label, c[u]) if directed else c[u])
            f[v] = (c[v], tuple(sorted(entries)))
        nxt = _dense_rank(f)
        rounds += 1
        if nxt == c:
            break
        history.append(nxt)
        c = nxt
    return history


def fp_order(g: Hypergraph, iterations: int | None = None, directed: bool = True) -> NodeOrder:
    c = fp_colours(g, iterations, directed)[-1]
    return _from_scores("fp0" if iterations == 0 else "fp", g, c, len(set(c.values())))


def fp0_order(g: Hypergraph, directed: bool = True) -> NodeOrder:
    return fp_order(g, 0, directed)


def make_order(g: Hypergraph, kind: str) -> NodeOrder:
    if kind == "nat":
        return natural_order(g)
    if kind == "bfs":
        return bfs_order(g)
    if kind == "fp0":
        return fp0_order(g)
    if kind == "fp":
        return fp_order(g)
    raise ValueError(f"unknown order {kind!r}; expected one of {', '.join(KINDS)}")
