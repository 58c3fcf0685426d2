from pathlib import Path

import pytest

from geocore.cli import main
from geocore.generators import connected_gnp, random_tree
from geocore.graph import read_edge_list, write_edge_list


@pytest.fixture
def graph_file(tmp_path):
    g = connected_gnp(120, 0.05, 3)
    p = tmp_path / "g.txt"
    with p.open("w") as fh:
        write_edge_list(g, fh)
    return p


def write(path: Path, text: str) -> Path:
    path.write_text(text)
    return path


def stats(path: Path) -> dict:
    return dict(line.split("=", 1) for line in path.read_text().splitlines())


def test_sample_writes_output_and_stats(graph_file, tmp_path):
    out = tmp_path / "s.txt"
    assert main(["sample", "--input", str(graph_file), "--seed", "2", "--out", str(out)]) == 0
    assert out.read_text().startswith("# outerplanar n=120")
    st = stats(tmp_path / "s.txt.stats")
    assert st["subcommand"] == "sample" and st["arg_seed"] == "2"
    assert int(st["out_edges"]) <= 2 * 120 - 3
    assert float(st["time_sample_ms"]) >= 0


def test_sample_tree_is_unchanged(tmp_path):
    t = random_tree(25, 4)
    src = tmp_path / "t.txt"
    with src.open("w") as fh:
        write_edge_list(t, fh)
    out = tmp_path / "s.txt"
    assert main(["sample", "--input", str(src), "--out", str(out)]) == 0
    assert stats(tmp_path / "s.txt.stats")["face_number"] == "0"
    lines = [l for l in out.read_text().splitlines() if not l.startswith("#")]
    got = {tuple(sorted(map(int, l.split()[:2]))) for l in lines}
    assert got == {tuple(e) for e in t.edges().tolist()}


def test_closure_modes(graph_file, tmp_path):
    sample = tmp_path / "s.txt"
    main(["sample", "--input", str(graph_file), "--seed", "5", "--out", str(sample)])
    verts = write(tmp_path / "x.txt", "3\n50\n99\n")
    outs = {}
    for mode in ("exact", "naive-op", "fast-op", "approx"):
        out = tmp_path / f"{mode}.txt"
        assert main(["closure", "--input", str(sample), "--vertices", str(verts),
                     "--mode", mode, "--subgraphs", "3", "--out", str(out)]) == 0
        outs[mode] = out.read_text()
    assert len(set(outs.values())) == 1


def test_closure_singleton_every_mode(graph_file, tmp_path):
    verts = write(tmp_path / "x.txt", "7\n")
    for mode in ("exact", "approx"):
        out = tmp_path / f"{mode}.txt"
        assert main(["closure", "--input", str(graph_file), "--vertices", str(verts),
                     "--mode", mode, "--subgraphs", "2", "--out", str(out)]) == 0
        assert out.read_text() == "7\n"


def test_closure_c6_antipodal(tmp_path):
    g = write(tmp_path / "c6.txt", "".join(f"{i} {(i + 1) % 6}\n" for i in range(6)))
    verts = write(tmp_path / "x.txt", "0\n3\n")
    out = tmp_path / "o.txt"
    assert main(["closure", "--input", str(g), "--vertices", str(verts), "--out", str(out)]) == 0
    assert out.read_text().split() == ["0", "1", "2", "3", "4", "5"]


def test_closure_errors(graph_file, tmp_path, capsys):
    verts = write(tmp_path / "x.txt", "12345\n")
    assert main(["closure", "--input", str(graph_file), "--vertices", str(verts),
                 "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err.strip()
    assert err.count("\n") == 0 and "12345" in err and err.startswith("error=")
    ok = write(tmp_path / "y.txt", "3\n4\n")
    assert main(["closure", "--input", str(graph_file), "--vertices", str(ok),
                 "--mode", "fast-op", "--out", str(tmp_path / "o")]) == 1
    assert "NotOuterplanarError" in capsys.readouterr().err


def test_parse_error_has_file_and_line(tmp_path, capsys):
    bad = write(tmp_path / "bad.txt", "1 2\n3 x\n")
    assert main(["sample", "--input", str(bad), "--out", str(tmp_path / "o")]) == 1
    err = capsys.readouterr().err
    assert "bad.txt:2" in err and err.count("\n") == 1


def test_missing_file(tmp_path, capsys):
    assert main(["sample", "--input", str(tmp_path / "nope"), "--out", str(tmp_path / "o")]) == 1
    assert capsys.readouterr().err.startswith("error=CliError")


def test_core_outputs(graph_file, tmp_path):
    prefix = tmp_path / "run"
    assert main(["core", "--input", str(graph_file), "--mode", "exact", "--seed", "1",
                 "--out", str(prefix)]) == 0
    core = (tmp_path / "run.core").read_text().split()
    peri = (tmp_path / "run.periphery").read_text().split()
    assert len(core) + len(peri) == 120 and not set(core) & set(peri)
    hist = (tmp_path / "run.core_degrees.csv").read_text().splitlines()
    assert hist[0] == "degree,count"
    assert sum(int(l.split(",")[1]) for l in hist[1:]) == len(core)
    st = stats(tmp_path / "run.stats")
    assert st["core_size"] == str(len(core)) and int(st["iterations"]) >= 1


def test_core_grid_and_eval(graph_file, tmp_path, capsys):
    main(["core", "--input", str(graph_file), "--seed", "1", "--out", str(tmp_path / "ex")])
    assert main(["core", "--input", str(graph_file), "--mode", "approx", "--grid",
                 "--reference", str(tmp_path / "ex.core"), "--l-values", "5,10",
                 "--t-values", "1,50", "--subgraphs", "4", "--out", str(tmp_path / "gr")]) == 0
    rows = (tmp_path / "gr.grid.csv").read_text().splitlines()
    assert rows[0] == "l,t,jaccard" and len(rows) == 5
    assert main(["core", "--input", str(graph_file), "--grid", "--out", str(tmp_path / "z")]) == 1
    capsys.readouterr()
    assert main(["eval", str(tmp_path / "ex.core"), str(tmp_path / "ex.core")]) == 0
    assert "jaccard=1.000000" in capsys.readouterr().out
    write(tmp_path / "a", "1\n2\n")
    write(tmp_path / "b", "3\n")
    main(["eval", str(tmp_path / "a"), str(tmp_path / "b"), "--out", str(tmp_path / "e")])
    assert "jaccard=0.000000" in (tmp_path / "e").read_text()


def test_largest_component_used(tmp_path):
    g = write(tmp_path / "g.txt", "1 2\n2 3\n10 11\n")
    out = tmp_path / "s.txt"
    assert main(["sample", "--input", str(g), "--out", str(out)]) == 0
    assert stats(tmp_path / "s.txt.stats")["n"] == "3"


def test_dump_blocks(graph_file, tmp_path):
    dump = tmp_path / "blocks.txt"
    main(["sample", "--input", str(graph_file), "--out", str(tmp_path / "s"), "--dump-blocks", str(dump)])
    assert dump.read_text().startswith("block 0: cycle")
