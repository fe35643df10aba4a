"""Regular path queries through product grammars.

Pattern syntax: a bare character is a one-character label, ``<name>`` a
longer label; juxtaposition concatenates; ``|``, ``*``, ``+``, ``?`` and
parentheses as usual; whitespace is ignored; ``\\`` escapes the next character.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..grammar import SLHRGrammar
from ..hypergraph import EPSILON_LABEL, Edge, Hypergraph
from .addressing import Addressing, GRep, QueryError
from .reach import ReachIndex, _bfs

SPECIAL = set("|*+?()<>")


class PatternError(QueryError):
    def __init__(self, msg: str, pos: int):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


# -- parsing -------------------------------------------------------------------

@dataclass(frozen=True)
class Sym:
    name: str


@dataclass(frozen=True)
class Cat:
    parts: tuple


@dataclass(frozen=True)
class Alt:
    options: tuple


@dataclass(frozen=True)
class Rep:
    body: object
    op: str  # '*', '+', '?'


def _tokens(pattern: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while i < len(pattern):
        c = pattern[i]
        if c.isspace():
            i += 1
        elif c == "\\":
            if i + 1 >= len(pattern):
                raise PatternError("dangling escape", i)
            out.append(("sym", pattern[i + 1], i))
            i += 2
        elif c == "<":
            j = pattern.find(">", i + 1)
            if j < 0:
                raise PatternError("unterminated <label>", i)
            name = pattern[i + 1:j].strip()
            if not name:
                raise PatternError("empty <label>", i)
            out.append(("sym", name, i))
            i = j + 1
        elif c == ">":
            raise PatternError("unexpected '>'", i)
        elif c in SPECIAL:
            out.append((c, c, i))
            i += 1
        else:
            out.append(("sym", c, i))
            i += 1
    return out


def parse_pattern(pattern: str):
    toks = _tokens(pattern)
    pos = 0

    def peek():
        return toks[pos][0] if pos < len(toks) else None

    def where():
        return toks[pos][2] if pos < len(toks) else len(pattern)

    def alt():
        nonlocal pos
        opts = [cat()]
        while peek() == "|":
            pos += 1
            opts.append(cat())
        return opts[0] if len(opts) == 1 else Alt(tuple(opts))

    def cat():
        parts = []
        while peek() in ("sym", "("):
            parts.append(rep())
        if not parts:
            raise PatternError("expected a label or '('", where())
        return parts[0] if len(parts) == 1 else Cat(tuple(parts))

    def rep():
        nonlocal pos
        node = atom()
        while peek() in ("*", "+", "?"):
            node = Rep(node, toks[pos][0])
            pos += 1
        return node

    def atom():
        nonlocal pos
        kind = peek()
        if kind == "sym":
            pos += 1
            return Sym(toks[pos - 1][1])
        if kind == "(":
            pos += 1
            node = alt()
            if peek() != ")":
                raise PatternError("expected ')'", where())
            pos += 1
            return node
        raise PatternError("expected a label or '('", where())

    tree = alt()
    if pos != len(toks):
        raise PatternError(f"unexpected {toks[pos][1]!r}", toks[pos][2])
    return tree


# -- Thompson construction ----------------------------------------------------------

@dataclass
class NFA:
    states: int
    transitions: list[tuple[int, object, int]] = field(default_factory=list)  # label None = epsilon
    initial: int = 0
    final: int = 1

    def closure(self, qs) -> set[int]:
        eps: dict[int, list[int]] = {}
        for q, a, p in self.transitions:
            if a is None:
                eps.setdefault(q, []).append(p)
        seen = set(qs)
        todo = list(seen)
        while todo:
            q = todo.pop()
            for p in eps.get(q, ()):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
        return seen

    def accepts(self, word) -> bool:
        cur = self.closure({self.initial})
        for a in word:
            cur = self.closure({p for q, b, p in self.transitions if q in cur and b == a})
        return self.final in cur

    def bind(self, ids: dict[str, int]) -> "NFA":
        """Replace label names by ids; unknown names get a label that never matches."""
        return NFA(self.states, [(q, None if a is None else ids.get(a, _NOMATCH), p)
                                 for q, a, p in self.transitions], self.initial, self.final)


_NOMATCH = -2


def regex_to_nfa(pattern: str) -> NFA:
    tree = parse_pattern(pattern)
    nfa = NFA(0)

    def new() -> int:
        nfa.states += 1
        return nfa.states - 1

    def build(node) -> tuple[int, int]:
        if isinstance(node, Sym):
            s, f = new(), new()
            nfa.transitions.append((s, node.name, f))
            return s, f
        if isinstance(node, Cat):
            s, f = build(node.parts[0])
            for part in node.parts[1:]:
                s2, f2 = build(part)
                nfa.transitions.append((f, None, s2))
                f = f2
            return s, f
        if isinstance(node, Alt):
            s, f = new(), new()
            for opt in node.options:
                s2, f2 = build(opt)
                nfa.transitions.append((s, None, s2))
                nfa.transitions.append((f2, None, f))
            return s, f
        s, f = new(), new()
        s2, f2 = build(node.body)
        nfa.transitions.append((s, None, s2))
        nfa.transitions.append((f2, None, f))
        if node.op in ("*", "?"):
            nfa.transitions.append((s, None, f))
        if node.op in ("*", "+"):
            nfa.transitions.append((f2, None, s2))
        return s, f

    nfa.initial, nfa.final = build(tree)
    return nfa


# -- product grammar ------------------------------------------------------------------

@dataclass
class ProductGrammar:
    grammar: SLHRGrammar
    states: int
    base: SLHRGrammar
    edge_map: dict[int | None, dict[int, int]]   # nonterminal edge index: base rhs -> product rhs

    @property
    def node_slots(self) -> int:
        return sum(g.node_count for g in self.grammar.right_hand_sides())

    def lift(self, rep: GRep, q: int) -> GRep:
        """(path, v) in the base grammar -> (path, (v, q)) in the product."""
        path = []
        key = None
        g = self.base.start
        for e in rep.path:
            path.append(self.edge_map[key][e])
            key = g.edges[e].label
            g = self.base.rules[key]
        return GRep(tuple(path), q * g.node_count + rep.node)


def _product_rhs(g: Hypergraph, rules, nfa: NFA, is_start: bool) -> tuple[Hypergraph, dict[int, int]]:
    n, k = g.node_count, nfa.states
    by_label: dict[object, list[tuple[int, int]]] = {}
    eps = []
    for q, a, p in nfa.transitions:
        if a is None:
            eps.append((q, p))
        else:
            by_label.setdefault(a, []).append((q, p))
    edges: list[Edge] = []
    emap: dict[int, int] = {}
    for i, e in enumerate(g.edges):
        if e.label in rules:
            emap[i] = len(edges)
            edges.append(Edge(e.label, tuple(q * n + w for q in range(k) for w in e.att)))
    for e in g.edges:
        if e.label in rules:
            continue
        if len(e.att) != 2:
            raise QueryError(f"regular path queries need rank-2 terminal edges, found {e}")
        u, v = e.att
        for q, p in by_label.get(e.label, ()):
            edges.append(Edge(e.label, (q * n + u, p * n + v)))
    ext = set(g.ext)
    for i in range(1, n + 1):
        if is_start or i not in ext:
            for q, p in eps:
                edges.append(Edge(EPSILON_LABEL, (q * n + i, p * n + i)))
    return Hypergraph(n * k, edges, [q * n + x for q in range(k) for x in g.ext]), emap


def product_grammar(G: SLHRGrammar, nfa: NFA) -> ProductGrammar:
    start, m0 = _product_rhs(G.start, G.rules, nfa, True)
    rules = {}
    emap: dict[int | None, dict[int, int]] = {None: m0}
    for a, h in G.rules.items():
        rules[a], emap[a] = _product_rhs(h, G.rules, nfa, False)
    return ProductGrammar(SLHRGrammar(start, rules), nfa.states, G, emap)


class RPQEngine:
    """Caches the addressing of G and one product grammar per pattern."""

    def __init__(self, G: SLHRGrammar, label_ids: dict[str, int] | None = None):
        self.G = G
        self.addr = Addressing(G)
        self.label_ids = label_ids
        self._cache: dict[str, tuple[NFA, ProductGrammar, ReachIndex]] = {}

    def _compile(self, pattern: str):
        hit = self._cache.get(pattern)
        if hit is None:
            nfa = regex_to_nfa(pattern)
            ids = self.label_ids
            if ids is None:
                ids = {str(lab): lab for g in self.G.right_hand_sides() for lab in g.labels()
                       if lab not in self.G.rules}
            nfa = nfa.bind(ids)
            pg = product_grammar(self.G, nfa)
            hit = self._cache[pattern] = (nfa, pg, ReachIndex(pg.grammar))
        return hit

    def pair(self, pattern: str, u: int, v: int) -> bool:
        nfa, pg, reach = self._compile(pattern)
        rs = pg.lift(self.addr.get_g_rep(u), nfa.initial)
        rt = pg.lift(self.addr.get_g_rep(v), nfa.final)
        return reach.reachable_reps(rs, rt)

    def exists(self, pattern: str) -> bool:
        nfa, pg, reach = self._compile(pattern)
        P = pg.grammar
        fwd: dict[int, set[int]] = {}
        bwd: dict[int, set[int]] = {}
        for key in list(P.topo_order) + [None]:
            base = self.G.start if key is None else self.G.rules[key]
            g = P.start if key is None else P.rules[key]
            n = base.node_count
            ext = set(base.ext)
            inner = [i for i in range(1, n + 1) if key is None or i not in ext]
            sources = {nfa.initial * n + i for i in inner}
            targets = {nfa.final * n + i for i in inner}
            for e in g.edges:
                if e.label in P.rules:
                    sources.update(e.att[p] for p in fwd[e.label])
                    targets.update(e.att[p] for p in bwd[e.label])
            F = _bfs(reach.level(key), sources, None)
            B = _bfs(reach.level_pred(key), targets, None)
            if not F.isdisjoint(B):
                return True
            if key is not None:
                fwd[key] = {p for p, x in enumerate(g.ext) if x in F}
                bwd[key] = {p for p, x in enumerate(g.ext) if x in B}
        return False


def rpq_pair(G: SLHRGrammar, pattern: str, u: int, v: int, label_ids: dict[str, int] | None = None) -> bool:
    return RPQEngine(G, label_ids).pair(pattern, u, v)


def rpq_exists(G: SLHRGrammar, pattern: str, label_ids: dict[str, int] | None = None) -> bool:
    return RPQEngine(G, label_ids).exists(pattern)


def flat_rpq_oracle(h: Hypergraph, nfa: NFA, u: int, v: int) -> bool:
    """BFS over (node, state) pairs of an explicit graph; nfa labels must be bound to ids."""
    out: dict[int, list[tuple[int, int]]] = {}
    for e in h.edges:
        out.setdefault(e.att[0], []).append((e.label, e.att[1]))
    delta: dict[int, list[tuple[object, int]]] = {}
    for q, a, p in nfa.transitions:
        delta.setdefault(q, []).append((a, p))
    start = (u, nfa.initial)
    seen = {start}
    todo = deque([start])
    while todo:
        x, q = todo.popleft()
        if x == v and q == nfa.final:
            return True
        for a, p in delta.get(q, ()):
            if a is None:
                nxt = [(x, p)]
            else:
                nxt = [(y, p) for lab, y in out.get(x, ()) if lab == a]
            for s in nxt:
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
    return False
