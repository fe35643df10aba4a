"""gRePair: digram replacement on hypergraphs.

Occurrence counting visits nodes in a fixed order. At every node the
incident edges are grouped by their signature (label, position of the
node, external flags of the other attachment nodes); each pair of groups
yields one digram, and edges are paired greedily, an edge joining at most
one occurrence per digram. Pairs that share more than one node are handled
at the earliest shared node.

After a replacement round only the touched nodes are recomputed, in node
order, and changes are propagated forward. The index therefore always
equals a recount from scratch.
"""
from __future__ import annotations

import heapq
import math
import time
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Sequence

from .grammar import SLHRGrammar, handle_size, sibling_order, _renaming
from .hypergraph import VIRTUAL_LABEL, Edge, Hypergraph, size
from .orders import NodeOrder, make_order


@dataclass
class CompressorConfig:
    max_rank: int | None = 4  # None: unbounded
    order: str = "fp"
    prune: bool = True
    virtual_edge_pass: bool = True

    def __post_init__(self):
        if self.max_rank is not None and self.max_rank < 2:
            raise ValueError("max_rank must be at least 2")


@dataclass
class DigramInfo:
    id: int
    key: tuple
    rank: int
    nonterminal: int | None = None
    ext_perm: list[int] | None = None

    @property
    def labels(self) -> tuple[int, int]:
        return self.key[0], self.key[1]


def canonical_pair(la: int, aa: tuple, lb: int, ab: tuple, ext_of) -> tuple[tuple, list, bool]:
    """Canonical key of the digram formed by two edges.

    Key = (label1, label2, pattern1, pattern2, ext flags), nodes numbered by
    first appearance; the smaller of the two edge orders wins. Returns the
    key, the nodes in local order and whether the edges were swapped.
    """
    best = None
    for swapped, (l1, a1, l2, a2) in enumerate(((la, aa, lb, ab), (lb, ab, la, aa))):
        local: dict = {}
        for x in a1 + a2:
            if x not in local:
                local[x] = len(local)
        nodes = list(local)
        key = (l1, l2, tuple(local[x] for x in a1), tuple(local[x] for x in a2),
               tuple(ext_of(x) for x in nodes))
        if best is None or key < best[0]:
            best = (key, nodes, bool(swapped))
    return best


def ext_order(key: tuple) -> list[int]:
    """Local ids of the external nodes in rule order.

    Nodes are taken by first appearance, starting with the edge whose first
    shared node sits later in its attachment, so on paths the new edge keeps
    the direction of the path.
    """
    _, _, p1, p2, flags = key
    s = min(set(p1) & set(p2))
    first, second = (p2, p1) if p2.index(s) > p1.index(s) else (p1, p2)
    return [x for x in dict.fromkeys(first + second) if flags[x]]


def digram_rule(key: tuple) -> Hypergraph:
    """rhs of the rule for a digram: external nodes 1..r, then internal ones in local order."""
    l1, l2, p1, p2, flags = key
    ext = ext_order(key)
    internal = [i for i, f in enumerate(flags) if not f]
    ids = {x: k + 1 for k, x in enumerate(ext + internal)}
    return Hypergraph(len(flags), [Edge(l1, tuple(ids[x] for x in p1)), Edge(l2, tuple(ids[x] for x in p2))],
                      range(1, len(ext) + 1))


class FrequencyQueue:
    """Buckets 2..B-1 hold digrams by exact frequency; bucket B holds frequency >= B."""

    def __init__(self, m: int):
        self.top = max(3, math.ceil(math.sqrt(max(m, 1))))
        self.buckets: list[set[int]] = [set() for _ in range(self.top + 1)]
        self.where: dict[int, int] = {}

    def update(self, d: int, freq: int) -> None:
        b = self.where.pop(d, None)
        if b is not None:
            self.buckets[b].discard(d)
        if freq >= 2:
            b = min(freq, self.top)
            self.buckets[b].add(d)
            self.where[d] = b

    def best(self, freq_of, key_of) -> int | None:
        for b in range(self.top, 1, -1):
            if self.buckets[b]:
                if b == self.top:
                    return min(self.buckets[b], key=lambda d: (-freq_of(d), key_of(d)))
                return min(self.buckets[b], key=key_of)
        return None


class _Centre:
    """Cached grouping of the edges around one centre node."""
    __slots__ = ("groups", "extra", "source", "multi")

    def __init__(self, groups: dict, extra: set):
        self.groups = groups
        self.extra = extra
        self.source: dict[int, tuple | None] = {}   # digram -> (group, group, swapped) or None
        self.multi: dict[int, list[tuple[int, int]]] = {}


class _Instance:
    """Original node ids produced by one nonterminal edge."""
    __slots__ = ("label", "internal", "children")

    def __init__(self, label: int, internal: list[int], children: list["_Instance"]):
        self.label = label
        self.internal = internal
        self.children = children


@dataclass
class ReplacementRecord:
    digram: DigramInfo
    nonterminal: int
    occurrences: list[tuple[int, int]]
    new_edges: list[int]


class GRePair:
    """Mutable compression state: host graph plus occurrence index."""

    def __init__(self, g: Hypergraph, order: NodeOrder | Sequence[int], max_rank: int | None = 4,
                 first_nonterminal: int | None = None):
        self.max_rank = max_rank if max_rank is not None else math.inf
        seq = order.sequence if isinstance(order, NodeOrder) else tuple(order)
        self.pos = {v: i for i, v in enumerate(seq)}
        self.lab: dict[int, int] = {}
        self.att: dict[int, tuple[int, ...]] = {}
        self.inc: dict[int, dict[int, None]] = {v: {} for v in range(1, g.node_count + 1)}
        self.next_edge = 0
        for e in g.edges:
            self._add_edge(e.label, e.att)
        self.host_ext = frozenset(g.ext)
        self.ext_seq = tuple(g.ext)
        self.rules: dict[int, Hypergraph] = {}
        self.inst: dict[int, _Instance] = {}
        top = max((e.label for e in g.edges), default=0)
        self.next_label = first_nonterminal if first_nonterminal is not None else top + 1
        self.digram_ids: dict[tuple, int] = {}
        self.digrams: list[DigramInfo] = []
        self.simple_cache: dict[tuple, tuple[int | None, bool]] = {}
        self.multi_cache: dict[tuple, tuple[int | None, bool]] = {}
        self.sequence: list[DigramInfo] = []
        self.pair_work = 0
        self.initial_edges = len(g.edges)
        self.recount()

    # -- host graph ---------------------------------------------------------
    def _add_edge(self, label: int, att: tuple[int, ...]) -> int:
        x = self.next_edge
        self.next_edge += 1
        self.lab[x] = label
        self.att[x] = att
        for v in att:
            self.inc[v][x] = None
        return x

    def edge_count(self) -> int:
        return len(self.att)

    def host_graph(self) -> tuple[Hypergraph, list[int]]:
        """Current host as a hypergraph over its surviving nodes (ascending original id)."""
        nodes = sorted(self.inc)
        ids = {v: i + 1 for i, v in enumerate(nodes)}
        edges = [Edge(self.lab[x], tuple(ids[v] for v in self.att[x])) for x in sorted(self.att)]
        return Hypergraph(len(nodes), edges, [ids[v] for v in self.ext_seq]), nodes

    # -- index ----------------------------------------------------------------
    def recount(self) -> None:
        self.occ: dict[int, dict[tuple[int, int], int]] = defaultdict(dict)
        self.used: dict[int, dict[int, tuple[int, int]]] = defaultdict(dict)
        self.edge_occ: dict[int, set[int]] = defaultdict(set)
        self.out: dict[int, dict[int, dict[tuple[int, int], None]]] = {}
        self.struct: dict[int, _Centre | None] = {}
        self.queue = FrequencyQueue(self.initial_edges)
        self._freq_dirty: set[int] = set()
        self._propagate(set(self.inc))
        self._flush_queue()

    def frequency(self, d: int) -> int:
        return len(self.occ.get(d, ()))

    def occurrences(self, d: int) -> list[tuple[int, int]]:
        items = sorted(self.occ.get(d, {}).items(), key=lambda it: self.pos[it[1]])
        return [p for p, _ in items]

    def counts(self) -> dict[tuple, int]:
        return {self.digrams[d].key: len(o) for d, o in self.occ.items() if o}

    def _digram(self, key: tuple) -> int | None:
        d = self.digram_ids.get(key)
        if d is None:
            d = self.digram_ids[key] = len(self.digrams)
            self.digrams.append(DigramInfo(d, key, sum(key[4])))
        info = self.digrams[d]
        if info.rank < 1 or info.rank > self.max_rank:
            return None
        return d

    def _flag(self, u: int) -> bool:
        return u in self.host_ext or len(self.inc[u]) >= 2

    def _simple_digram(self, s1: tuple, s2: tuple, ext_v: bool) -> tuple[int | None, bool]:
        ck = (s1, s2, ext_v)
        hit = self.simple_cache.get(ck)
        if hit is not None:
            return hit
        # abstract nodes: 0 is the shared node, fresh negatives for the rest
        flags = {0: ext_v}
        fresh = -1

        def build(sig):
            nonlocal fresh
            label, p, fl = sig
            others = iter(fl)
            att = []
            for i in range(len(fl) + 1):
                if i == p:
                    att.append(0)
                else:
                    flags[fresh] = next(others)
                    att.append(fresh)
                    fresh -= 1
            return label, tuple(att)

        la, aa = build(s1)
        lb, ab = build(s2)
        key, _, swapped = canonical_pair(la, aa, lb, ab, flags.__getitem__)
        hit = (self._digram(key), swapped)
        self.simple_cache[ck] = hit
        return hit

    def _structure(self, v: int) -> "_Centre | None":
        """Signature groups at v and the digram each group pair (or shared pair) yields."""
        inc = self.inc
        edges = list(inc[v])
        if len(edges) < 2:
            return None
        att, lab, hext = self.att, self.lab, self.host_ext
        ext_v = v in hext or len(edges) > 2
        groups: dict[tuple, list[int]] = {}
        others: dict[int, list[int]] = {}
        shared = False
        for x in edges:
            a = att[x]
            if len(a) == 2:
                u = a[1] if a[0] == v else a[0]
                sig = (lab[x], 0 if a[0] == v else 1, (u in hext or len(inc[u]) > 1,))
                ou = others.get(u)
                if ou is None:
                    others[u] = [x]
                else:
                    ou.append(x)
                    shared = True
            else:
                sig = (lab[x], a.index(v), tuple(u in hext or len(inc[u]) > 1 for u in a if u != v))
                for u in a:
                    if u != v:
                        ou = others.get(u)
                        if ou is None:
                            others[u] = [x]
                        else:
                            ou.append(x)
                            shared = True
            g = groups.get(sig)
            if g is None:
                groups[sig] = [x]
            else:
                g.append(x)
        extra: set[tuple[int, int]] = set()
        if shared:
            for xs in others.values():
                if len(xs) > 1:
                    for i in range(len(xs)):
                        for j in range(i + 1, len(xs)):
                            extra.add((xs[i], xs[j]))
        st = _Centre(groups, extra)
        source = st.source
        keys = sorted(groups)
        cache = self.simple_cache
        for i, g1 in enumerate(keys):
            if len(groups[g1]) > 1:
                hit = cache.get((g1, g1, ext_v)) or self._simple_digram(g1, g1, ext_v)
                if hit[0] is not None:
                    source[hit[0]] = (g1, g1, False)
            for g2 in keys[i + 1:]:
                hit = cache.get((g1, g2, ext_v)) or self._simple_digram(g1, g2, ext_v)
                if hit[0] is not None:
                    source[hit[0]] = (g1, g2, hit[1])
        if extra:
            pos = self.pos
            pv = pos[v]
            mcache = self.multi_cache
            for x, y in sorted(extra):
                ax, ay = att[x], att[y]
                if min(pos[u] for u in set(ax) & set(ay)) != pv:
                    continue
                local: dict[int, int] = {}
                for u in ax + ay:
                    if u not in local:
                        local[u] = len(local)
                ck = (lab[x], tuple(local[u] for u in ax), lab[y], tuple(local[u] for u in ay),
                      tuple(u in hext or len(inc[u]) > (u in ax) + (u in ay) for u in local))
                hit = mcache.get(ck)
                if hit is None:
                    flags = dict(zip(range(len(local)), ck[4]))
                    key, _, swapped = canonical_pair(ck[0], ck[1], ck[2], ck[3], flags.__getitem__)
                    hit = mcache[ck] = (self._digram(key), swapped)
                d, swapped = hit
                if d is not None:
                    source[d] = None
                    st.multi.setdefault(d, []).append((y, x) if swapped else (x, y))
        return st

    def _pairs(self, v: int, st: "_Centre", d: int) -> list[tuple[int, int]]:
        """Greedy pairing for digram d at centre v given earlier centres' claims."""
        pos, occ = self.pos, self.occ
        pv = pos[v]
        ud = self.used.get(d)
        od = occ.get(d)
        taken: set[int] = set()

        def free(x):
            if x in taken:
                return False
            if not ud:
                return True
            p = ud.get(x)
            return p is None or pos[od[p]] >= pv

        src = st.source[d]
        pairs = []
        if src is None:
            for x, y in st.multi[d]:
                self.pair_work += 1
                if free(x) and free(y):
                    pairs.append((x, y))
                    taken.add(x)
                    taken.add(y)
            return pairs
        g1, g2, swapped = src
        extra = st.extra
        if g1 == g2:
            pending = None
            for x in st.groups[g1]:
                self.pair_work += 1
                if not free(x):
                    continue
                if pending is None:
                    pending = x
                elif (pending, x) not in extra:
                    pairs.append((pending, x))
                    taken.add(pending)
                    taken.add(x)
                    pending = None
            return pairs
        l1, l2 = st.groups[g1], st.groups[g2]
        j = 0
        for x in l1:
            self.pair_work += 1
            if not free(x):
                continue
            k = j
            while k < len(l2):
                self.pair_work += 1
                y = l2[k]
                if not free(y):
                    if k == j:
                        j += 1
                elif (min(x, y), max(x, y)) not in extra:
                    break
                k += 1
            if k >= len(l2):
                if j >= len(l2):
                    break
                continue
            y = l2[k]
            if k == j:
                j += 1
            pairs.append((y, x) if swapped else (x, y))
            taken.add(x)
            taken.add(y)
        return pairs

    def _drop(self, d: int, p: tuple[int, int]) -> int:
        c = self.occ[d].pop(p)
        ud = self.used[d]
        for x in p:
            del ud[x]
            s = self.edge_occ.get(x)
            if s is not None:
                s.discard(d)
        self._freq_dirty.add(d)
        return c

    def _add(self, d: int, p: tuple[int, int], c: int) -> None:
        self.occ[d][p] = c
        ud = self.used[d]
        for x in p:
            ud[x] = p
            self.edge_occ[x].add(d)
        self.out.setdefault(c, {}).setdefault(d, {})[p] = None
        self._freq_dirty.add(d)

    def _unlink_out(self, c: int, d: int, p: tuple[int, int]) -> None:
        od = self.out[c][d]
        del od[p]
        if not od:
            del self.out[c][d]
            if not self.out[c]:
                del self.out[c]

    def _apply(self, v: int, d: int, news: list[tuple[int, int]], push) -> None:
        od = self.out.get(v, {}).get(d)
        olds = list(od) if od else []
        if olds == news:
            return
        pv = self.pos[v]
        changed: set[int] = set()
        for p in olds:
            self._drop(d, p)
            self._unlink_out(v, d, p)
            changed.symmetric_difference_update(p)
        for p in news:
            for x in p:
                q = self.used[d].get(x)
                if q is not None:
                    # claimed at a later centre: evict it there
                    c = self._drop(d, q)
                    self._unlink_out(c, d, q)
                    changed.add(q[0] if q[1] == x else q[1])
            self._add(d, p, v)
            changed.symmetric_difference_update(p)
        for x in changed:
            a = self.att.get(x)
            if a is None:
                continue
            for w in a:
                if self.pos[w] > pv:
                    push(w, d)

    def _process(self, v: int, which, push) -> None:
        if which is None:
            st = self.struct[v] = self._structure(v)
            ds = set(self.out.get(v, ()))
            if st is not None:
                ds.update(st.source)
        else:
            st = self.struct.get(v)
            if st is None:
                return
            ds = [d for d in which if d in st.source]
        for d in sorted(ds):
            news = self._pairs(v, st, d) if st is not None and d in st.source else []
            self._apply(v, d, news, push)

    def _propagate(self, dirty, partial: dict[int, set[int]] | None = None) -> None:
        pending: dict[int, set | None] = {v: None for v in dirty if v in self.inc}
        for v, ds in (partial or {}).items():
            if v in self.inc and v not in pending:
                pending[v] = set(ds)
        heap = [(self.pos[v], v) for v in pending]
        heapq.heapify(heap)

        def push(w, d):
            if w in pending:
                s = pending[w]
                if s is not None:
                    s.add(d)
            else:
                pending[w] = {d}
                heapq.heappush(heap, (self.pos[w], w))

        while heap:
            _, v = heapq.heappop(heap)
            self._process(v, pending.pop(v), push)

    def _flush_queue(self) -> None:
        for d in self._freq_dirty:
            self.queue.update(d, self.frequency(d))
        self._freq_dirty.clear()

    # -- replacement ------------------------------------------------------------
    def most_frequent(self) -> int | None:
        return self.queue.best(self.frequency, lambda d: self.digrams[d].key)

    def replace_most_frequent(self) -> ReplacementRecord | None:
        d = self.most_frequent()
        if d is None:
            return None
        info = self.digrams[d]
        if info.nonterminal is None:
            info.nonterminal = self.next_label
            self.next_label += 1
            self.rules[info.nonterminal] = digram_rule(info.key)
            info.ext_perm = ext_order(info.key)
        a = info.nonterminal
        pairs = self.occurrences(d)
        dirty: set[int] = set()
        partial: dict[int, set[int]] = {}
        degree_changed: set[int] = set()
        new_edges = []
        for e, f in pairs:
            ae, af = self.att[e], self.att[f]
            nodes = list(dict.fromkeys(ae + af))
            both = set(ae) & set(af)
            flags = [w in self.host_ext or len(self.inc[w]) > 1 + (w in both) for w in nodes]
            ext_nodes = [nodes[i] for i in info.ext_perm]
            removal = [w for w, fl in zip(nodes, flags) if not fl]
            kids = [self.inst[x] for x in (e, f) if self.lab[x] in self.rules]
            inst = _Instance(a, removal, kids)
            self._delete_edge(e, dirty, partial)
            self._delete_edge(f, dirty, partial)
            for w in removal:
                del self.inc[w]
                self.out.pop(w, None)
                self.struct.pop(w, None)
                dirty.discard(w)
            x = self._add_edge(a, tuple(ext_nodes))
            self.inst[x] = inst
            new_edges.append(x)
            dirty.update(ext_nodes)
            degree_changed.update(w for w in ext_nodes if w in both)
        for w in degree_changed:
            count: Counter = Counter()
            for x in self.inc[w]:
                count.update(u for u in self.att[x] if u != w)
            dirty.update(u for u, k in count.items() if k > 1)
        self.sequence.append(info)
        self._pending_dirty = (dirty, partial)
        return ReplacementRecord(info, a, pairs, new_edges)

    def update_after_replacement(self, record: ReplacementRecord | None = None) -> None:
        dirty, partial = getattr(self, "_pending_dirty", (set(), {}))
        self._pending_dirty = (set(), {})
        self._propagate(dirty, partial)
        self._flush_queue()

    def _delete_edge(self, x: int, dirty: set[int], partial: dict[int, set[int]]) -> None:
        for d in list(self.edge_occ.pop(x, ())):
            p = self.used[d].get(x)
            if p is None:
                continue
            c = self._drop(d, p)
            self._unlink_out(c, d, p)
            dirty.add(c)
            y = p[0] if p[1] == x else p[1]
            for w in self.att.get(y, ()):
                partial.setdefault(w, set()).add(d)
        for w in self.att[x]:
            del self.inc[w][x]
            dirty.add(w)
        del self.att[x]
        del self.lab[x]
        self.inst.pop(x, None)

    def step(self) -> ReplacementRecord | None:
        rec = self.replace_most_frequent()
        if rec is not None:
            self.update_after_replacement(rec)
        return rec

    def run(self) -> int:
        k = 0
        while self.step() is not None:
            k += 1
        return k

    # -- virtual edges ----------------------------------------------------------
    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for s in sorted(self.inc, key=self.pos.__getitem__):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            todo = [s]
            while todo:
                v = todo.pop()
                for x in self.inc[v]:
                    for u in self.att[x]:
                        if u not in seen:
                            seen.add(u)
                            comp.append(u)
                            todo.append(u)
            comps.append(comp)
        return comps

    def add_virtual_edges(self) -> int:
        """Chain components by virtual edges between their first nodes in order."""
        comps = self.components()
        if len(comps) < 2:
            return 0
        for c1, c2 in zip(comps, comps[1:]):
            self._add_edge(VIRTUAL_LABEL, (c1[0], c2[0]))
        self.initial_edges = len(self.att)
        self.recount()
        return len(comps) - 1


# -- grammars with provenance ---------------------------------------------------

class _Rhs:
    """A right-hand side plus, for its internal nodes and nonterminal edges,
    the path through the instance tree that tells which original node or
    instance they stand for."""
    __slots__ = ("graph", "node_prov", "edge_prov")

    def __init__(self, graph: Hypergraph, node_prov: list, edge_prov: list):
        self.graph = graph
        self.node_prov = node_prov
        self.edge_prov = edge_prov


def _plain_rhs(g: Hypergraph, nonterminals) -> _Rhs:
    ext = set(g.ext)
    node_prov = []
    k = 0
    for v in range(1, g.node_count + 1):
        if v in ext:
            node_prov.append(None)
        else:
            node_prov.append(((), k))
            k += 1
    edge_prov = []
    j = 0
    for e in g.edges:
        if e.label in nonterminals:
            edge_prov.append((j,))
            j += 1
        else:
            edge_prov.append(None)
    return _Rhs(g, node_prov, edge_prov)


def _strip_label(r: _Rhs, label: int) -> _Rhs:
    keep = [i for i, e in enumerate(r.graph.edges) if e.label != label]
    if len(keep) == len(r.graph.edges):
        return r
    g = Hypergraph(r.graph.node_count, [r.graph.edges[i] for i in keep], r.graph.ext)
    return _Rhs(g, r.node_prov, [r.edge_prov[i] for i in keep])


def _substitute(host: _Rhs, a: int, h: _Rhs) -> _Rhs:
    g = host.graph
    edges, eprov = [], []
    for e, p in zip(g.edges, host.edge_prov):
        if e.label != a:
            edges.append(e)
            eprov.append(p)
    n = g.node_count
    nprov = list(host.node_prov)
    hext = set(h.graph.ext)
    for e, p in zip(g.edges, host.edge_prov):
        if e.label != a:
            continue
        rho = _renaming(n, e.att, h.graph)
        n += h.graph.node_count - len(hext)
        for v in range(1, h.graph.node_count + 1):
            if v not in hext:
                path, k = h.node_prov[v - 1]
                nprov.append((p + path, k))
        for f, fp in zip(h.graph.edges, h.edge_prov):
            edges.append(Edge(f.label, tuple(rho[v] for v in f.att)))
            eprov.append(None if fp is None else p + fp)
    return _Rhs(Hypergraph(n, edges, g.ext), nprov, eprov)


def _prune(start: _Rhs, rules: dict[int, _Rhs]) -> tuple[_Rhs, dict[int, _Rhs]]:
    rules = dict(rules)
    refs: Counter = Counter()
    users: dict[int, set] = defaultdict(set)
    for key, r in [(None, start)] + list(rules.items()):
        for e in r.graph.edges:
            if e.label in rules:
                refs[e.label] += 1
                users[e.label].add(key)

    def inline(a: int):
        nonlocal start
        h = rules.pop(a)
        r_a = refs.pop(a)
        for e in h.graph.edges:
            if e.label in rules:
                refs[e.label] += r_a - 1
                users[e.label].discard(a)
        for key in sorted(users.pop(a), key=lambda k: -1 if k is None else k):
            if key is None:
                start = _substitute(start, a, h)
            else:
                rules[key] = _substitute(rules[key], a, h)
            for e in h.graph.edges:
                if e.label in rules:
                    users[e.label].add(key)

    for a in sorted(a for a in rules if refs[a] == 1):
        inline(a)
    order = SLHRGrammar(start.graph, {a: r.graph for a, r in rules.items()}).topo_order
    for a in order:
        h = rules[a].graph
        rhs = size(h).total
        con = refs[a] * (rhs - handle_size(len(h.ext))) - rhs
        if con <= 0:
            inline(a)
    return start, rules


def prune(G: SLHRGrammar) -> SLHRGrammar:
    """Inline ref-1 nonterminals, then every nonterminal with con <= 0, bottom-up."""
    start, rules = _prune(_plain_rhs(G.start, G.rules), {a: _plain_rhs(h, G.rules) for a, h in G.rules.items()})
    return SLHRGrammar(start.graph, {a: r.graph for a, r in rules.items()})


def _resolve(inst: _Instance, path: tuple) -> _Instance:
    for j in path:
        inst = inst.children[j]
    return inst


def _mapping(start: _Rhs, rules: dict[int, _Rhs], root: _Instance) -> list[int]:
    """Original node id of every node of val(G), indexed by canonical id."""
    plain = {a: r.graph for a, r in rules.items()}
    mapping = [0] * (start.graph.node_count + 1)
    for v in range(1, start.graph.node_count + 1):
        path, k = start.node_prov[v - 1]
        mapping[v] = _resolve(root, path).internal[k]
    stack = []
    for i in reversed(sibling_order(start.graph, plain)):
        e = start.graph.edges[i]
        stack.append((e.att, e.label, _resolve(root, start.edge_prov[i])))
    n = start.graph.node_count
    kids: dict[int, list[int]] = {}
    while stack:
        att, a, inst = stack.pop()
        r = rules[a]
        h = r.graph
        rho = _renaming(n, att, h)
        n += h.node_count - len(set(h.ext))
        hext = set(h.ext)
        for v in range(1, h.node_count + 1):
            if v not in hext:
                path, k = r.node_prov[v - 1]
                mapping.append(_resolve(inst, path).internal[k])
        order = kids.get(a)
        if order is None:
            order = kids[a] = sibling_order(h, plain)
        for i in reversed(order):
            f = h.edges[i]
            stack.append((tuple(rho[v] for v in f.att), f.label, _resolve(inst, r.edge_prov[i])))
    return mapping


# -- driver ---------------------------------------------------------------------------

@dataclass
class CompressionResult:
    grammar: SLHRGrammar
    mapping: list[int]                  # canonical id -> original node id (index 0 unused)
    digram_sequence: list[DigramInfo] = field(default_factory=list)
    replacements: int = 0
    virtual_edges: int = 0
    pair_work: int = 0
    order: NodeOrder | None = None
    timings: dict[str, float] = field(default_factory=dict)


def count_occurrences(g: Hypergraph, order: NodeOrder | Sequence[int], max_rank: int | None = 4) -> GRePair:
    return GRePair(g, order, max_rank)


def compress(g: Hypergraph, config: CompressorConfig | None = None,
             order: NodeOrder | Sequence[int] | None = None,
             first_nonterminal: int | None = None) -> CompressionResult:
    config = config or CompressorConfig()
    timings = {}
    t0 = time.perf_counter()
    if order is None:
        order = make_order(g, config.order)
    timings["order"] = time.perf_counter() - t0
    t0 = time.perf_counter()
    state = GRePair(g, order, config.max_rank, first_nonterminal)
    n_rep = state.run()
    virtual = 0
    if config.virtual_edge_pass:
        virtual = state.add_virtual_edges()
        if virtual:
            n_rep += state.run()
    timings["replace"] = time.perf_counter() - t0
    t0 = time.perf_counter()

    nodes = sorted(state.inc)
    ids = {v: i + 1 for i, v in enumerate(nodes)}
    s_edges, s_prov, children = [], [], []
    for x in sorted(state.att):
        s_edges.append(Edge(state.lab[x], tuple(ids[v] for v in state.att[x])))
        if state.lab[x] in state.rules:
            s_prov.append((len(children),))
            children.append(state.inst[x])
        else:
            s_prov.append(None)
    s_graph = Hypergraph(len(nodes), s_edges, [ids[v] for v in g.ext])
    start = _Rhs(s_graph, [((), k) for k in range(len(nodes))], s_prov)
    root = _Instance(0, nodes, children)
    rules = {a: _plain_rhs(h, state.rules) for a, h in state.rules.items()}
    if virtual:
        start = _strip_label(start, VIRTUAL_LABEL)
        rules = {a: _strip_label(r, VIRTUAL_LABEL) for a, r in rules.items()}
        start, rules = _inline_empty(start, rules)
    if config.prune:
        start, rules = _prune(start, rules)
    else:
        start, rules = _drop_unused(start, rules)
    start = _sorted_start(start)
    mapping = _mapping(start, rules, root)
    top = max((e.label for e in g.edges), default=0)
    grammar = _dense(start.graph, {a: r.graph for a, r in rules.items()},
                     first_nonterminal if first_nonterminal is not None else top + 1)
    timings["prune"] = time.perf_counter() - t0
    return CompressionResult(grammar, mapping, list(state.sequence), n_rep, virtual,
                             state.pair_work, order if isinstance(order, NodeOrder) else None, timings)


def _inline_empty(start: _Rhs, rules: dict[int, _Rhs]) -> tuple[_Rhs, dict[int, _Rhs]]:
    """Rules left without edges after stripping virtual edges are inlined away."""
    rules = dict(rules)
    plain = SLHRGrammar(start.graph, {a: r.graph for a, r in rules.items()})
    for a in plain.topo_order:
        if rules[a].graph.edges:
            continue
        h = rules.pop(a)
        start = _substitute(start, a, h)
        rules = {b: _substitute(r, a, h) for b, r in rules.items()}
    return start, rules


def _sorted_start(start: _Rhs) -> _Rhs:
    """Start graph with edges sorted by (label, att); the codec relies on it."""
    idx = sorted(range(len(start.graph.edges)), key=lambda i: start.graph.edges[i])
    g = start.graph
    return _Rhs(Hypergraph(g.node_count, [g.edges[i] for i in idx], g.ext), start.node_prov,
                [start.edge_prov[i] for i in idx])


def _dense(start: Hypergraph, rules: dict[int, Hypergraph], first: int) -> SLHRGrammar:
    ren = {a: first + i for i, a in enumerate(sorted(rules))}

    def rl(g: Hypergraph) -> Hypergraph:
        return Hypergraph(g.node_count, [Edge(ren.get(e.label, e.label), e.att) for e in g.edges], g.ext)

    return SLHRGrammar(rl(start), {ren[a]: rl(h) for a, h in sorted(rules.items())})


def _drop_unused(start: _Rhs, rules: dict[int, _Rhs]) -> tuple[_Rhs, dict[int, _Rhs]]:
    reached = set()
    todo = [e.label for e in start.graph.edges if e.label in rules]
    while todo:
        a = todo.pop()
        if a in reached:
            continue
        reached.add(a)
        todo.extend(e.label for e in rules[a].graph.edges if e.label in rules)
    return start, {a: r for a, r in rules.items() if a in reached}


def apply_mapping(h: Hypergraph, mapping: list[int], node_count: int | None = None) -> Hypergraph:
    """Rename the nodes of a derived graph to original ids."""
    return Hypergraph(node_count if node_count is not None else h.node_count,
                      [Edge(e.label, tuple(mapping[v] for v in e.att)) for e in h.edges],
                      [mapping[v] for v in h.ext])
