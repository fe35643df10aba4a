"""Compression report over the synthetic families: a TSV table plus plots."""
from __future__ import annotations

import csv
import logging
import time
from pathlib import Path

from . import generators as gen
from .codec import write_container
from .compressor import CompressorConfig, compress
from .hypergraph import size

log = logging.getLogger(__name__)

FIELDS = ["family", "param", "order", "max_rank", "nodes", "edges", "input_size",
          "grammar_size", "rules", "ratio", "bytes", "bpe", "seconds"]


def _row(family: str, param: int, g, order: str, max_rank) -> dict:
    t0 = time.perf_counter()
    res = compress(g, CompressorConfig(max_rank=max_rank, order=order))
    secs = time.perf_counter() - t0
    data = write_container(res.grammar, res.mapping)
    gs, Gs = size(g).total, res.grammar.size()
    return {"family": family, "param": param, "order": order,
            "max_rank": max_rank if max_rank is not None else 0,
            "nodes": g.node_count, "edges": len(g.edges), "input_size": gs, "grammar_size": Gs,
            "rules": len(res.grammar.rules), "ratio": round(Gs / gs, 6), "bytes": len(data),
            "bpe": round(8 * len(data) / max(1, len(g.edges)), 4), "seconds": round(secs, 4)}


def collect(max_n: int = 6, orders=("nat", "bfs", "fp0", "fp")) -> list[dict]:
    rows = []
    for n in range(1, max_n + 1):
        for order in orders:
            rows.append(_row("grid", n, gen.grid(n), order, 4))
            rows.append(_row("tf", n, gen.triangle_fractal(n), order, 4))
        log.info("families at n=%d done", n)
    m = 8
    while m <= 2 ** (max_n + 6):
        rows.append(_row("copies", m, gen.disjoint_copies(gen.square_with_diagonal(), m), "fp", 4))
        m *= 2
    for n in range(2, max_n + 1):
        for mr in (2, None):
            rows.append(_row("tn", n, gen.chain_with_cycle(n), "nat", mr))
            rows.append(_row("comb3", n, gen.comb(n, 3), "nat", mr))
    return rows


def _plot(rows: list[dict], out: Path) -> list[str]:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    files = []
    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for ax, fam in zip(axes, ("grid", "tf")):
        for order in sorted({r["order"] for r in rows if r["family"] == fam}):
            pts = [(r["param"], r["ratio"]) for r in rows if r["family"] == fam and r["order"] == order]
            ax.plot(*zip(*pts), marker="o", label=order)
        ax.set_title(fam)
        ax.set_xlabel("n")
        ax.set_ylabel("|G| / |g|")
        ax.legend()
    fig.tight_layout()
    p = out / "orders.png"
    fig.savefig(p, dpi=100)
    plt.close(fig)
    files.append(str(p))

    cp = [r for r in rows if r["family"] == "copies"]
    if cp:
        fig, ax = plt.subplots(figsize=(5, 4))
        ax.loglog([r["param"] for r in cp], [r["input_size"] for r in cp], marker="s", label="|g|")
        ax.loglog([r["param"] for r in cp], [r["grammar_size"] for r in cp], marker="d", label="|G|")
        ax.set_xlabel("copies")
        ax.set_ylabel("size")
        ax.legend()
        fig.tight_layout()
        p = out / "copies.png"
        fig.savefig(p, dpi=100)
        plt.close(fig)
        files.append(str(p))

    fig, ax = plt.subplots(figsize=(5, 4))
    for fam in ("tn", "comb3"):
        for mr in (2, 0):
            pts = [(r["param"], r["ratio"]) for r in rows if r["family"] == fam and r["max_rank"] == mr]
            if pts:
                ax.plot(*zip(*pts), marker="o", label=f"{fam} max_rank={mr or 'inf'}")
    ax.set_xlabel("n")
    ax.set_ylabel("|G| / |g|")
    ax.legend()
    fig.tight_layout()
    p = out / "max_rank.png"
    fig.savefig(p, dpi=100)
    plt.close(fig)
    files.append(str(p))
    return files


def run_report(out: Path, max_n: int = 6, orders=("nat", "bfs", "fp0", "fp")) -> tuple[list[dict], list[str]]:
    out.mkdir(parents=True, exist_ok=True)
    rows = collect(max_n, orders)
    tsv = out / "report.tsv"
    with open(tsv, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, FIELDS, delimiter="\t")
        w.writeheader()
        w.writerows(rows)
    return rows, [str(tsv)] + _plot(rows, out)
