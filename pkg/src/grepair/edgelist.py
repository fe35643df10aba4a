"""Text edge-list ingestion and output.

One edge per line, ``src dst [label]``. A line of the form
``@label n1 n2 ...`` describes a hyperedge (rank = number of nodes).
``#`` starts a comment.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, TextIO

from .hypergraph import Edge, Hypergraph

log = logging.getLogger(__name__)

DEFAULT_LABEL = "_"


class IngestError(ValueError):
    pass


class ParseError(IngestError):
    def __init__(self, lineno: int, line: str):
        super().__init__(f"line {lineno}: cannot parse {line!r}")
        self.lineno = lineno


class SelfLoopError(IngestError):
    def __init__(self, linenos: list[int]):
        super().__init__("self-loop or repeated node on line(s) " + ", ".join(map(str, linenos)))
        self.linenos = linenos


@dataclass
class LabelDictionary:
    """Bijection between label strings and terminal label ids (1-based)."""
    names: list[str] = field(default_factory=list)
    ranks: list[int] = field(default_factory=list)

    def __post_init__(self):
        self._ids = {s: i + 1 for i, s in enumerate(self.names)}

    def __len__(self) -> int:
        return len(self.names)

    def intern(self, name: str, rank: int) -> int:
        i = self._ids.get(name)
        if i is None:
            self.names.append(name)
            self.ranks.append(rank)
            i = self._ids[name] = len(self.names)
        elif self.ranks[i - 1] != rank:
            raise IngestError(f"label {name!r} used with rank {rank} and {self.ranks[i - 1]}")
        return i

    def id_of(self, name: str) -> int | None:
        return self._ids.get(name)

    def name_of(self, label: int) -> str:
        return self.names[label - 1]

    def rank_of(self, label: int) -> int:
        return self.ranks[label - 1]

    @classmethod
    def for_graph(cls, g: Hypergraph, names: dict[int, str] | None = None) -> "LabelDictionary":
        """Dictionary naming labels 1..max of g (by default with their decimal id)."""
        ranks = {e.label: e.rank for e in g.edges}
        top = max(ranks, default=0)
        d = cls()
        for lab in range(1, top + 1):
            d.intern((names or {}).get(lab, str(lab)), ranks.get(lab, 2))
        return d


@dataclass
class Ingested:
    graph: Hypergraph
    labels: LabelDictionary
    node_names: list[str]
    duplicates: int = 0


def parse_edge_list(lines: Iterable[str]) -> Ingested:
    labels = LabelDictionary()
    node_ids: dict[str, int] = {}
    names: list[str] = []
    edges: list[Edge] = []
    seen: set[Edge] = set()
    loops: list[int] = []
    dups = 0

    def node(tok: str) -> int:
        i = node_ids.get(tok)
        if i is None:
            names.append(tok)
            i = node_ids[tok] = len(names)
        return i

    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0]
        toks = line.split()
        if not toks:
            continue
        if toks[0].startswith("@"):
            if len(toks[0]) == 1 or len(toks) < 2:
                raise ParseError(lineno, raw.rstrip("\n"))
            label, nodes = toks[0][1:], toks[1:]
        elif len(toks) in (2, 3):
            label = toks[2] if len(toks) == 3 else DEFAULT_LABEL
            nodes = toks[:2]
        else:
            raise ParseError(lineno, raw.rstrip("\n"))
        if len(set(nodes)) != len(nodes):
            loops.append(lineno)
            continue
        e = Edge(labels.intern(label, len(nodes)), tuple(node(t) for t in nodes))
        if e in seen:
            dups += 1
            continue
        seen.add(e)
        edges.append(e)
    if loops:
        raise SelfLoopError(loops)
    if dups:
        log.warning("dropped %d duplicate edge(s)", dups)
    return Ingested(Hypergraph(len(names), edges), labels, names, dups)


def read_edge_list(path_or_file) -> Ingested:
    if hasattr(path_or_file, "read"):
        return parse_edge_list(path_or_file)
    with open(path_or_file, encoding="utf-8") as fh:
        return parse_edge_list(fh)


def format_edge_list(g: Hypergraph, labels: LabelDictionary | None = None,
                     node_names: list[str] | None = None, sort: bool = False) -> list[str]:
    def lab(x: int) -> str:
        return labels.name_of(x) if labels is not None else str(x)

    def name(v: int) -> str:
        return node_names[v - 1] if node_names is not None else str(v)

    out = []
    for e in g.edges:
        if e.rank == 2:
            out.append(f"{name(e.att[0])} {name(e.att[1])} {lab(e.label)}")
        else:
            out.append("@" + lab(e.label) + " " + " ".join(name(v) for v in e.att))
    if sort:
        out.sort()
    return out


def write_edge_list(g: Hypergraph, fh: TextIO, labels: LabelDictionary | None = None,
                    node_names: list[str] | None = None, sort: bool = False) -> None:
    for line in format_edge_list(g, labels, node_names, sort):
        fh.write(line + "\n")
