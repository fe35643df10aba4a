"""Reachability on the compressed grammar via skeleton graphs.

The skeleton of a nonterminal A is a small graph on the external nodes of
rhs(A) whose transitive closure is reachability between them inside val(A).
Queries climb from s and t to the deepest instance containing both; paths
that leave that instance and come back are covered by context edges,
reachability among an instance's external nodes through the rest of val(G).
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from ..grammar import SLHRGrammar
from .addressing import Addressing, GRep


@dataclass(frozen=True)
class SkeletonGraph:
    ext: tuple[int, ...]               # external nodes of the rhs
    edges: tuple[tuple[int, int], ...]  # pairs of ext positions

    def closure(self) -> set[tuple[int, int]]:
        """(i, j) position pairs with j reachable from i (i != j)."""
        succ: dict[int, list[int]] = {}
        for i, j in self.edges:
            succ.setdefault(i, []).append(j)
        out = set()
        for i in range(len(self.ext)):
            seen = {i}
            todo = [i]
            while todo:
                x = todo.pop()
                for y in succ.get(x, ()):
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            out.update((i, j) for j in seen if j != i)
        # positions naming the same node reach each other
        for i, x in enumerate(self.ext):
            for j, y in enumerate(self.ext):
                if i != j and x == y:
                    out.add((i, j))
        return out

    def node_edges(self) -> set[tuple[int, int]]:
        return {(self.ext[i], self.ext[j]) for i, j in self.edges if self.ext[i] != self.ext[j]}


def _scc(n: int, succ: list[list[int]]) -> list[int]:
    """Component id per node 1..n (iterative Tarjan); ids are in reverse topological order."""
    index = [0] * (n + 1)
    low = [0] * (n + 1)
    on = [False] * (n + 1)
    comp = [-1] * (n + 1)
    stack: list[int] = []
    counter = 1
    ncomp = 0
    for root in range(1, n + 1):
        if index[root]:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                u = succ[v][i]
                if not index[u]:
                    index[u] = low[u] = counter
                    counter += 1
                    stack.append(u)
                    on[u] = True
                    work.append((u, 0))
                elif on[u]:
                    low[v] = min(low[v], index[u])
            else:
                work.pop()
                if work:
                    p = work[-1][0]
                    low[p] = min(low[p], low[v])
                if low[v] == index[v]:
                    while True:
                        u = stack.pop()
                        on[u] = False
                        comp[u] = ncomp
                        if u == v:
                            break
                    ncomp += 1
    return comp


class ReachIndex:
    """Skeleta for all nonterminals plus per-rhs level graphs."""

    def __init__(self, G: SLHRGrammar, addressing: Addressing | None = None):
        self.G = G
        self.addr = addressing or Addressing(G)
        self.skeleta: dict[int, SkeletonGraph] = {}
        self._succ: dict[int | None, list[list[int]]] = {}
        self._pred: dict[int | None, list[list[int]]] = {}
        for a in G.topo_order:
            self.skeleta[a] = self._skeleton(a)
        self._context: dict[tuple[int, ...], dict[int, set[int]]] = {(): {}}

    def level(self, key: int | None) -> list[list[int]]:
        """Successor lists of rhs(key) with nonterminal edges replaced by their skeleta."""
        succ = self._succ.get(key)
        if succ is None:
            g = self.G.start if key is None else self.G.rules[key]
            succ = [[] for _ in range(g.node_count + 1)]
            for e in g.edges:
                if e.label in self.G.rules:
                    for i, j in self.skeleta[e.label].edges:
                        if e.att[i] != e.att[j]:
                            succ[e.att[i]].append(e.att[j])
                else:
                    for u in e.att[1:]:
                        succ[e.att[0]].append(u)
            self._succ[key] = succ
        return succ

    def level_pred(self, key: int | None) -> list[list[int]]:
        pred = self._pred.get(key)
        if pred is None:
            succ = self.level(key)
            pred = [[] for _ in succ]
            for v, us in enumerate(succ):
                for u in us:
                    pred[u].append(v)
            self._pred[key] = pred
        return pred

    def _skeleton(self, a: int) -> SkeletonGraph:
        g = self.G.rules[a]
        succ = self.level(a)
        n = g.node_count
        comp = _scc(n, succ)
        ncomp = max(comp[1:], default=-1) + 1
        members: list[list[int]] = [[] for _ in range(ncomp)]
        pos_of: dict[int, list[int]] = {}
        for p, v in enumerate(g.ext):
            pos_of.setdefault(v, []).append(p)
        for v in range(1, n + 1):
            if v in pos_of:
                members[comp[v]].extend(pos_of[v])
        dag: list[set[int]] = [set() for _ in range(ncomp)]
        for v in range(1, n + 1):
            for u in succ[v]:
                if comp[u] != comp[v]:
                    dag[comp[v]].add(comp[u])
        edges: set[tuple[int, int]] = set()
        for c in range(ncomp):
            ps = sorted(members[c])
            if len(ps) > 1:
                for x, y in zip(ps, ps[1:] + ps[:1]):
                    edges.add((x, y))
        for c in range(ncomp):
            if not members[c]:
                continue
            src = min(members[c])
            seen = {c}
            todo = list(dag[c])
            while todo:
                d = todo.pop()
                if d in seen:
                    continue
                seen.add(d)
                if members[d]:
                    edges.add((src, min(members[d])))
                else:
                    todo.extend(dag[d])
        return SkeletonGraph(tuple(g.ext), tuple(sorted(edges)))

    # -- queries -------------------------------------------------------------------
    def _key(self, path) -> int | None:
        inf = self.addr.info(None)
        key = None
        for e in path:
            key = inf.graph.edges[e].label
            inf = self.addr.info(key)
        return key

    def context(self, path: tuple[int, ...]) -> dict[int, set[int]]:
        """Extra edges among the external nodes of the instance at path (reachability outside it)."""
        ctx = self._context.get(path)
        if ctx is not None:
            return ctx
        parent = path[:-1]
        pctx = self.context(parent)
        pkey = self._key(parent)
        pg = self.G.start if pkey is None else self.G.rules[pkey]
        edge = pg.edges[path[-1]]
        succ = self.level(pkey)
        child = self.G.rules[edge.label]
        ctx = {}
        for p, x in enumerate(edge.att):
            seen = _bfs(succ, [x], pctx)
            targets = {child.ext[q] for q, y in enumerate(edge.att) if y in seen and q != p}
            if targets:
                ctx.setdefault(child.ext[p], set()).update(targets)
        self._context[path] = ctx
        return ctx

    def _climb(self, rep: GRep, depth: int, forward: bool) -> set[int]:
        path, frontier = rep.path, {rep.node}
        while len(path) > depth:
            key = self._key(path)
            adj = self.level(key) if forward else self.level_pred(key)
            seen = _bfs(adj, frontier, None)
            pkey = self._key(path[:-1])
            pg = self.G.start if pkey is None else self.G.rules[pkey]
            edge = pg.edges[path[-1]]
            child = self.G.rules[key]
            frontier = {edge.att[p] for p, x in enumerate(child.ext) if x in seen}
            path = path[:-1]
            if not frontier:
                break
        return frontier

    def reachable_reps(self, rs: GRep, rt: GRep) -> bool:
        k = 0
        while k < min(len(rs.path), len(rt.path)) and rs.path[k] == rt.path[k]:
            k += 1
        common = rs.path[:k]
        if rs == rt:
            return True
        src = self._climb(rs, k, True)
        if not src:
            return False
        dst = self._climb(rt, k, False)
        if not dst:
            return False
        key = self._key(common)
        ctx = self.context(common)
        seen = _bfs(self.level(key), src, ctx)
        return not seen.isdisjoint(dst)

    def reachable(self, s: int, t: int) -> bool:
        if s == t:
            self.addr._check(s)
            return True
        return self.reachable_reps(self.addr.get_g_rep(s), self.addr.get_g_rep(t))


def _bfs(succ: list[list[int]], start, extra: dict[int, set[int]] | None) -> set[int]:
    seen = set(start)
    todo = deque(seen)
    while todo:
        v = todo.popleft()
        for u in succ[v]:
            if u not in seen:
                seen.add(u)
                todo.append(u)
        if extra:
            for u in extra.get(v, ()):
                if u not in seen:
                    seen.add(u)
                    todo.append(u)
    return seen


def skeleton(G: SLHRGrammar, a: int) -> SkeletonGraph:
    return ReachIndex(G).skeleta[a]


def reachable(G: SLHRGrammar, s: int, t: int) -> bool:
    return ReachIndex(G).reachable(s, t)
