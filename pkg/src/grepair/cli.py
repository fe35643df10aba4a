"""Command-line interface.

Every command prints one ``key=value`` line on standard output; human
readable progress goes to standard error unless ``--quiet`` is given.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path

from . import generators as gen
from .codec import CodecError, read_container, write_container
from .compressor import CompressorConfig, apply_mapping, compress
from .edgelist import IngestError, LabelDictionary, format_edge_list, read_edge_list
from .grammar import val
from .hypergraph import size
from .orders import KINDS, fp_order
from .queries import Addressing, PatternError, QueryError, ReachIndex, RPQEngine

log = logging.getLogger("grepair")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INPUT = 3       # unparsable edge list, self-loops
EXIT_IO = 4
EXIT_CODEC = 5       # corrupt or foreign container
EXIT_QUERY = 6       # unknown node, bad pattern
EXIT_CONFIG = 7


class CliError(Exception):
    def __init__(self, msg: str, code: int):
        super().__init__(msg)
        self.code = code


def format_report(pairs: dict) -> str:
    def fmt(v):
        if isinstance(v, float):
            return f"{v:.6g}"
        if isinstance(v, bool):
            return str(v).lower()
        if isinstance(v, (list, tuple)):
            return ",".join(map(str, v))
        return str(v)
    return " ".join(f"{k}={fmt(v)}" for k, v in pairs.items())


def parse_report(line: str) -> dict[str, str]:
    out = {}
    for tok in line.split():
        k, _, v = tok.partition("=")
        out[k] = v
    return out


def _emit(pairs: dict) -> None:
    print(format_report(pairs), flush=True)


# -- helpers --------------------------------------------------------------------------

def _open_text(path: str):
    if path == "-":
        return sys.stdin
    try:
        return open(path, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc


def _read_bytes(path: str) -> bytes:
    try:
        if path == "-":
            return sys.stdin.buffer.read()
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}", EXIT_IO) from exc


def _write_bytes(path: str, data: bytes) -> None:
    try:
        if path == "-":
            sys.stdout.buffer.write(data)
            sys.stdout.flush()
        else:
            Path(path).write_bytes(data)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from exc


def _write_lines(path: str | None, lines) -> None:
    text = "".join(line + "\n" for line in lines)
    if path is None or path == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}", EXIT_IO) from exc


def _load(path: str):
    try:
        return read_container(_read_bytes(path))
    except CodecError as exc:
        raise CliError(f"{path}: {exc}", EXIT_CODEC) from exc


class _Nodes:
    """Translate between user node arguments and canonical ids of val(G)."""

    def __init__(self, box, raw: bool):
        self.raw = raw or box.mapping is None
        self.mapping = box.mapping
        self.names = box.node_names
        self.total = Addressing(box.grammar).total
        if not self.raw:
            orig = {o: c for c, o in enumerate(self.mapping) if c}
            if self.names is not None:
                self.by_name = {n: orig[i + 1] for i, n in enumerate(self.names) if i + 1 in orig}
            else:
                self.by_name = {str(o): c for o, c in orig.items()}

    def resolve(self, token: str) -> int:
        if self.raw:
            try:
                v = int(token)
            except ValueError:
                raise CliError(f"not a node id: {token!r}", EXIT_QUERY) from None
            if not 1 <= v <= self.total:
                raise CliError(f"node id {v} out of range 1..{self.total}", EXIT_QUERY)
            return v
        if token not in self.by_name:
            raise CliError(f"unknown node name {token!r}", EXIT_QUERY)
        return self.by_name[token]

    def show(self, v: int) -> str:
        if self.raw:
            return str(v)
        o = self.mapping[v]
        return self.names[o - 1] if self.names is not None else str(o)


# -- commands -------------------------------------------------------------------------

def _config(args) -> CompressorConfig:
    try:
        return CompressorConfig(max_rank=None if args.max_rank == 0 else args.max_rank,
                                order=args.order, prune=not args.no_prune,
                                virtual_edge_pass=not args.no_virtual_pass)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_CONFIG) from exc


def cmd_compress(args) -> int:
    config = _config(args)
    t0 = time.perf_counter()
    fh = _open_text(args.input)
    try:
        ing = read_edge_list(fh)
    except IngestError as exc:
        raise CliError(f"{args.input}: {exc}", EXIT_INPUT) from exc
    finally:
        if fh is not sys.stdin:
            fh.close()
    t_read = time.perf_counter() - t0
    g = ing.graph
    log.info("read %d nodes, %d edges, %d labels", g.node_count, len(g.edges), len(ing.labels))

    t0 = time.perf_counter()
    res = compress(g, config)
    t_compress = time.perf_counter() - t0
    G = res.grammar
    log.info("%d replacements, %d rules after pruning", res.replacements, len(G.rules))

    t0 = time.perf_counter()
    data = write_container(G, res.mapping, ing.labels, ing.node_names)
    t_encode = time.perf_counter() - t0
    if args.output:
        _write_bytes(args.output, data)

    gs = size(g).total
    Gs = G.size()
    classes = res.order.class_count if res.order is not None and res.order.kind == "fp" else \
        fp_order(g).class_count
    _emit({
        "nodes": g.node_count, "edges": len(g.edges), "input_size": gs,
        "grammar_size": Gs, "rules": len(G.rules), "height": G.height(),
        "ratio": Gs / gs if gs else 1.0, "bytes": len(data),
        "bpe": 8 * len(data) / len(g.edges) if g.edges else 0.0,
        "fp_classes": classes, "order": config.order,
        "max_rank": config.max_rank if config.max_rank is not None else 0,
        "t_read": t_read, "t_compress": t_compress, "t_encode": t_encode,
    })
    return EXIT_OK


def cmd_decompress(args) -> int:
    box = _load(args.container)
    h = val(box.grammar)
    names = None
    if box.mapping is None:
        log.warning("container has no node mapping; writing canonical ids")
    else:
        h = apply_mapping(h, box.mapping)
        names = box.node_names
    lines = format_edge_list(h, box.labels, names, sort=args.sort)
    _write_lines(args.output, lines)
    if args.output not in (None, "-"):
        _emit({"nodes": h.node_count, "edges": len(h.edges)})
    return EXIT_OK


def cmd_stats(args) -> int:
    box = _load(args.container)
    G = box.grammar
    h = val(G)
    gs = size(h).total
    _emit({
        "nodes": h.node_count, "edges": len(h.edges), "input_size": gs,
        "grammar_size": G.size(), "rules": len(G.rules), "height": G.height(),
        "start_nodes": G.start.node_count, "start_edges": len(G.start.edges),
        "ratio": G.size() / gs if gs else 1.0, "fp_classes": fp_order(h).class_count,
        "mapping": box.mapping is not None,
    })
    return EXIT_OK


def cmd_query(args) -> int:
    box = _load(args.container)
    nodes = _Nodes(box, args.raw)
    if args.kind == "reach":
        s, t = nodes.resolve(args.s), nodes.resolve(args.t)
        ans = ReachIndex(box.grammar).reachable(s, t)
        _emit({"query": "reach", "s": args.s, "t": args.t, "result": ans})
        return EXIT_OK
    ids = {name: i + 1 for i, name in enumerate(box.labels.names)}
    engine = RPQEngine(box.grammar, ids)
    try:
        if args.u is None:
            ans = engine.exists(args.pattern)
            _emit({"query": "rpq", "pattern": args.pattern.replace(" ", ""), "result": ans})
        else:
            u, v = nodes.resolve(args.u), nodes.resolve(args.v)
            ans = engine.pair(args.pattern, u, v)
            _emit({"query": "rpq", "pattern": args.pattern.replace(" ", ""), "u": args.u,
                   "v": args.v, "result": ans})
    except PatternError as exc:
        raise CliError(f"bad pattern: {exc}", EXIT_QUERY) from exc
    return EXIT_OK


def cmd_neighbors(args) -> int:
    box = _load(args.container)
    nodes = _Nodes(box, args.raw)
    v = nodes.resolve(args.node)
    out = Addressing(box.grammar).neighbors(v, args.direction)
    shown = sorted((nodes.show(u) for u in out), key=lambda s: (not s.isdigit(), len(s), s))
    _emit({"node": args.node, "direction": args.direction, "count": len(shown),
           "neighbors": shown})
    return EXIT_OK


def _named_graph(kind: str, args):
    labels = LabelDictionary()
    names = None
    if kind == "grid":
        g = gen.grid(args.n)
    elif kind == "tf":
        g = gen.triangle_fractal(args.n)
    elif kind == "comb":
        g = gen.comb(args.n, args.k)
        labels = LabelDictionary(["f", "a"], [args.k + 1, 1])
    elif kind == "tn":
        g = gen.chain_with_cycle(args.n)
        labels = LabelDictionary(["f"] + [f"a{i}" for i in range(5)], [2] * 6)
        names = [str(i) for i in range(g.node_count)]
    elif kind == "copies":
        g = gen.disjoint_copies(gen.square_with_diagonal(), args.m)
    elif kind == "sgraph":
        g = gen.s_graph(args.word, labels)
        names = [str(i) for i in range(g.node_count)]
    else:
        try:
            g = gen.t_graph(gen.parse_tree(args.tree), labels)
        except gen.TreeError as exc:
            raise CliError(str(exc), EXIT_INPUT) from exc
    if not labels.names:
        labels = LabelDictionary.for_graph(g, {1: "e"})
    return g, labels, names


def cmd_gen(args) -> int:
    g, labels, names = _named_graph(args.family, args)
    _write_lines(args.output, format_edge_list(g, labels, names))
    log.info("%s: %d nodes, %d edges, size %d", args.family, g.node_count, len(g.edges),
             size(g).total)
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import run_report
    rows, files = run_report(Path(args.out), max_n=args.max_n, orders=args.orders)
    _emit({"rows": len(rows), "tsv": files[0], "figures": files[1:]})
    return EXIT_OK


# -- parser ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def flags(default):
        parser = argparse.ArgumentParser(add_help=False)
        parser.add_argument("--quiet", action="store_true", default=default,
                            help="no progress on standard error")
        parser.add_argument("--raw", action="store_true", default=default,
                            help="node arguments and output are canonical ids of val(G)")
        return parser

    # subcommands repeat the global flags without resetting them
    common = flags(argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="grepair", parents=[flags(False)],
                                description="Grammar-based compression of edge-labelled graphs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compress", parents=[common], help="edge list -> grammar container")
    c.add_argument("input", nargs="?", default="-", help="edge list file, '-' for stdin")
    c.add_argument("-o", "--output", help="container file ('-' for stdout)")
    c.add_argument("--max-rank", type=int, default=4, help="largest digram rank, 0 = unbounded")
    c.add_argument("--order", choices=KINDS, default="fp")
    c.add_argument("--no-prune", action="store_true")
    c.add_argument("--no-virtual-pass", action="store_true")
    c.set_defaults(func=cmd_compress)

    d = sub.add_parser("decompress", parents=[common], help="container -> edge list")
    d.add_argument("container")
    d.add_argument("-o", "--output")
    d.add_argument("--sort", action="store_true", help="sort lines for byte comparison")
    d.set_defaults(func=cmd_decompress)

    s = sub.add_parser("stats", parents=[common], help="grammar and graph statistics")
    s.add_argument("container")
    s.set_defaults(func=cmd_stats)

    q = sub.add_parser("query", parents=[common], help="reachability and regular path queries")
    qs = q.add_subparsers(dest="kind", required=True)
    r = qs.add_parser("reach", parents=[common])
    r.add_argument("container")
    r.add_argument("s")
    r.add_argument("t")
    r.set_defaults(func=cmd_query)
    rp = qs.add_parser("rpq", parents=[common])
    rp.add_argument("container")
    rp.add_argument("pattern")
    rp.add_argument("u", nargs="?")
    rp.add_argument("v", nargs="?")
    rp.set_defaults(func=cmd_query)

    n = sub.add_parser("neighbors", parents=[common], help="in- or out-neighbours of a node")
    n.add_argument("container")
    n.add_argument("node")
    n.add_argument("--direction", choices=("in", "out"), default="out")
    n.set_defaults(func=cmd_neighbors)

    g = sub.add_parser("gen", parents=[common], help="write a synthetic graph as an edge list")
    g.add_argument("-o", "--output")
    fam = g.add_subparsers(dest="family", required=True)
    for name, params in [("grid", ["n"]), ("tf", ["n"]), ("comb", ["n", "k"]), ("tn", ["n"]),
                         ("copies", ["m"])]:
        f = fam.add_parser(name, parents=[common])
        for prm in params:
            f.add_argument(f"--{prm}", type=int, required=True)
    f = fam.add_parser("sgraph", parents=[common])
    f.add_argument("word")
    f = fam.add_parser("tgraph", parents=[common])
    f.add_argument("tree", help="term such as 'f(a,g(a,b))'")
    g.set_defaults(func=cmd_gen)

    rep = sub.add_parser("report", parents=[common],
                         help="compress the synthetic families; write a TSV and PNG plots")
    rep.add_argument("--out", default="report")
    rep.add_argument("--max-n", type=int, default=6)
    rep.add_argument("--orders", nargs="+", choices=KINDS, default=list(KINDS))
    rep.set_defaults(func=cmd_report)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="grepair: %(message)s", stream=sys.stderr)
    if os.environ.get("GREPAIR_SEED"):
        log.debug("GREPAIR_SEED is ignored; all algorithms are deterministic")
    try:
        return args.func(args)
    except CliError as exc:
        log.error("%s", exc)
        return exc.code
    except QueryError as exc:
        log.error("%s", exc)
        return EXIT_QUERY
    except BrokenPipeError:
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
