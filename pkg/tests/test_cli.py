import subprocess
import sys
from pathlib import Path

import pytest

from grepair.cli import (EXIT_CODEC, EXIT_CONFIG, EXIT_INPUT, EXIT_OK, EXIT_QUERY, format_report, main,
                         parse_report)
from grepair.codec import write_container
from grepair.fixtures import ab_labels, intro_grammar


def run(capsys, *argv):
    code = main(["--quiet", *map(str, argv)])
    out = capsys.readouterr()
    return code, out.out, out.err


def report(out):
    return parse_report(out.strip().splitlines()[-1])


def edge_set(text):
    return {tuple(line.split()) for line in text.splitlines() if line.strip()}


def test_report_line_roundtrip():
    line = format_report({"nodes": 3, "ratio": 0.25, "result": True, "ids": [1, 2]})
    assert line == "nodes=3 ratio=0.25 result=true ids=1,2"
    assert parse_report(line) == {"nodes": "3", "ratio": "0.25", "result": "true", "ids": "1,2"}


def test_copies_compress_below_a_quarter(tmp_path, capsys):
    src = tmp_path / "copies.txt"
    assert run(capsys, "gen", "-o", src, "copies", "--m", 64)[0] == EXIT_OK
    code, out, _ = run(capsys, "compress", src, "-o", tmp_path / "c.grg", "--max-rank", 4, "--order", "fp")
    assert code == EXIT_OK
    r = report(out)
    assert r["edges"] == str(64 * 5)
    assert float(r["ratio"]) < 0.25


def test_compress_via_stdin_pipe(tmp_path):
    gen = subprocess.run([sys.executable, "-m", "grepair.cli", "--quiet", "gen", "copies", "--m", "16"],
                         capture_output=True, text=True, check=True)
    done = subprocess.run([sys.executable, "-m", "grepair.cli", "--quiet", "compress", "-o",
                           str(tmp_path / "c.grg")], input=gen.stdout, capture_output=True, text=True)
    assert done.returncode == 0
    assert report(done.stdout)["edges"] == "80"


def test_bad_edge_list_and_bad_rank(tmp_path, capsys, caplog):
    bad = tmp_path / "bad.txt"
    bad.write_text("a b\na b c d e\n")
    assert run(capsys, "compress", bad)[0] == EXIT_INPUT
    assert "line 2" in caplog.text
    ok = tmp_path / "ok.txt"
    ok.write_text("a b\n")
    assert run(capsys, "compress", ok, "--max-rank", 1)[0] == EXIT_CONFIG
    assert run(capsys, "compress", ok, "--max-rank", 0)[0] == EXIT_OK


def test_self_loop_is_input_error(tmp_path, capsys):
    bad = tmp_path / "loop.txt"
    bad.write_text("x x\n")
    assert run(capsys, "compress", bad)[0] == EXIT_INPUT


@pytest.mark.parametrize("family", [["grid", "--n", "3"], ["tf", "--n", "4"], ["comb", "--n", "2", "--k", "3"],
                                    ["tn", "--n", "4"], ["sgraph", "abcabca"], ["tgraph", "f(a,g(a,b))"]])
def test_compress_decompress_restores_edges(tmp_path, capsys, family):
    src, box, back = tmp_path / "g.txt", tmp_path / "g.grg", tmp_path / "back.txt"
    assert run(capsys, "gen", "-o", src, *family)[0] == EXIT_OK
    assert run(capsys, "compress", src, "-o", box)[0] == EXIT_OK
    assert run(capsys, "decompress", box, "-o", back, "--sort")[0] == EXIT_OK
    assert edge_set(back.read_text()) == edge_set(src.read_text())


def test_decompress_without_mapping_warns(tmp_path, capsys, caplog):
    box = tmp_path / "intro.grg"
    box.write_bytes(write_container(intro_grammar(), labels=ab_labels()))
    code = main(["decompress", str(box)])
    out = capsys.readouterr()
    assert code == EXIT_OK
    assert "no node mapping" in caplog.text
    assert len(out.out.splitlines()) == 6


def test_corrupt_container(tmp_path, capsys):
    box = tmp_path / "x.grg"
    box.write_bytes(b"NOPE" + bytes(20))
    assert run(capsys, "stats", box)[0] == EXIT_CODEC
    box.write_bytes(write_container(intro_grammar(), labels=ab_labels())[:-2])
    assert run(capsys, "decompress", box)[0] == EXIT_CODEC


def test_queries_on_a_string_graph(tmp_path, capsys):
    src, box = tmp_path / "a40.txt", tmp_path / "a40.grg"
    run(capsys, "gen", "-o", src, "sgraph", "a" * 40)
    run(capsys, "compress", src, "-o", box)
    code, out, _ = run(capsys, "query", "reach", box, 0, 40)
    assert code == EXIT_OK and report(out)["result"] == "true"
    assert report(run(capsys, "query", "reach", box, 40, 0)[1])["result"] == "false"
    assert report(run(capsys, "query", "rpq", box, "(aaaaa)*", 0, 40)[1])["result"] == "true"
    assert report(run(capsys, "query", "rpq", box, "(aaaaa)*", 0, 39)[1])["result"] == "false"
    assert report(run(capsys, "query", "rpq", box, "aa")[1])["result"] == "true"
    assert run(capsys, "query", "rpq", box, "(a", 0, 1)[0] == EXIT_QUERY
    assert run(capsys, "query", "reach", box, 0, 99)[0] == EXIT_QUERY


def test_stats(tmp_path, capsys):
    src, box = tmp_path / "g.txt", tmp_path / "g.grg"
    run(capsys, "gen", "-o", src, "grid", "--n", "3")
    run(capsys, "compress", src, "-o", box)
    r = report(run(capsys, "stats", box)[1])
    assert r["nodes"] == "24" and r["mapping"] == "true"
    assert int(r["grammar_size"]) <= int(r["input_size"])


def test_intro_neighbours(tmp_path, capsys):
    box = tmp_path / "intro.grg"
    box.write_bytes(write_container(intro_grammar(), labels=ab_labels()))
    r = report(run(capsys, "neighbors", box, 1)[1])
    assert r["neighbors"] == "3,4,5"
    r = report(run(capsys, "neighbors", box, 2, "--direction", "in")[1])
    assert r["neighbors"] == "3,4,5"
    assert run(capsys, "neighbors", box, 6)[0] == EXIT_QUERY


def test_report_writes_table_and_figures(tmp_path, capsys):
    out = tmp_path / "rep"
    code, text, _ = run(capsys, "report", "--out", out, "--max-n", 3, "--orders", "nat", "fp")
    assert code == EXIT_OK
    assert (out / "report.tsv").exists()
    figures = report(text)["figures"].split(",")
    assert figures and all(f.endswith(".png") for f in figures)
    assert all(Path(f).exists() for f in figures)
