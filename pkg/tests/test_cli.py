import json

import pytest

from bideptas.cli import run
from bideptas.graph import dump_graph, gen_grid, gen_stacked_planar, read_graph


@pytest.fixture
def planar(tmp_path):
    p = tmp_path / "g.gr"
    p.write_text(dump_graph(gen_stacked_planar(30, 4)))
    return str(p)


def _json(capsys):
    return json.loads(capsys.readouterr().out)


def test_gen_roundtrip(tmp_path, capsys):
    out = tmp_path / "grid.gr"
    assert run(["gen", "grid", "--r", "4", "--out", str(out), "--json-only"]) == 0
    assert _json(capsys) == {"n": 16, "m": 24, "path": str(out)}
    assert read_graph(out).m == gen_grid(4).m
    assert run(["gen", "planar", "--n", "12", "--seed", "3"]) == 0
    assert capsys.readouterr().out.startswith("c ")


def test_decompose(planar, capsys):
    assert run(["decompose", planar, "--nice", "--json-only"]) == 0
    d = _json(capsys)
    assert d["valid"] and d["width"] == 3 and d["nice_width"] == 3


def test_decompose_exact_budget(tmp_path, capsys):
    p = tmp_path / "grid.gr"
    p.write_text(dump_graph(gen_grid(4)))
    assert run(["decompose", str(p), "--exact", "--json-only"]) == 0
    assert _json(capsys)["width"] == 4
    assert run(["decompose", str(p), "--exact", "--budget", "2", "--json-only"]) == 2


def test_solve_dp_and_oracle_agree(planar, tmp_path, capsys):
    small = tmp_path / "s.gr"
    small.write_text(dump_graph(gen_stacked_planar(11, 2)))
    for problem in ("vc", "fvs", "cycle-packing"):
        assert run(["solve-dp", str(small), "--problem", problem, "--json-only"]) == 0
        dp = _json(capsys)
        assert run(["oracle", str(small), "--problem", problem, "--json-only"]) == 0
        assert _json(capsys)["objective"] == dp["objective"]


def test_solve_dp_anchor_file(tmp_path, capsys):
    g = tmp_path / "p.gr"
    g.write_text("p tw 3 2\n1 2\n2 3\n")
    r = tmp_path / "r.txt"
    r.write_text("1\n2\n3\n")
    assert run(["solve-dp", str(g), "--problem", "ds-annotated", "--r-file", str(r), "--json-only"]) == 0
    assert _json(capsys)["objective"] == 0


def test_solve_eptas_deterministic(planar, capsys):
    argv = ["solve-eptas", planar, "--problem", "fvs", "--gamma", "4", "--json-only"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    assert capsys.readouterr().out == first
    d = json.loads(first)
    assert d["feasible"] and d["guarantee"] == "override-no-guarantee"
    assert set(d["stage_stats"]) == {"transversal_size", "modulator_size", "width", "dp_states"}


def test_eptas_ds_needs_transversal(planar, tmp_path, capsys):
    assert run(["solve-eptas", planar, "--problem", "ds"]) == 2
    assert "transversal" in capsys.readouterr().err
    x = tmp_path / "x.txt"
    x.write_text("\n".join(str(v) for v in range(1, 31, 3)))
    assert run(["solve-eptas", planar, "--problem", "ds", "--transversal-file", str(x),
                "--gamma", "3", "--json-only"]) == 0
    assert _json(capsys)["feasible"]


def test_partition_and_transversal(planar, capsys):
    assert run(["transversal", planar, "--problem", "fvs", "--json-only"]) == 0
    t = _json(capsys)
    assert t["residual_width"] <= 1
    assert run(["partition", planar, "--gamma", "2", "--json-only"]) == 0
    p = _json(capsys)
    assert p["x_size"] == t["size"] and (p["violations"] == 0 or p["flagged"])


def test_selfcheck_and_bench(capsys):
    assert run(["selfcheck", "--problem", "vc", "--n", "9", "--trials", "20", "--json-only"]) == 0
    assert _json(capsys)["mismatch_count"] == 0
    assert run(["bench", "--sizes", "60", "--json-only"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "instance,n,m,stage,millis,aux"
    assert {ln.split(",")[3] for ln in lines[1:]} >= {"decompose", "transversal", "dp", "lift"}


def test_exit_codes(tmp_path, capsys):
    assert run(["solve-dp", str(tmp_path / "missing.gr"), "--problem", "vc"]) == 1
    bad = tmp_path / "bad.gr"
    bad.write_text("p tw 2 1\n1 5\n")
    assert run(["oracle", str(bad), "--problem", "vc"]) == 1
    with pytest.raises(SystemExit) as exc:
        run(["solve-dp"])
    assert exc.value.code == 1
    g = tmp_path / "p.gr"
    g.write_text("p tw 3 2\n1 2\n2 3\n")
    assert run(["solve-dp", str(g), "--problem", "partial-vc", "--budget", "5"]) == 2
    big = tmp_path / "grid.gr"
    big.write_text(dump_graph(gen_grid(10)))
    assert run(["solve-dp", str(big), "--problem", "fvs"]) == 2
    assert "budget" in capsys.readouterr().err
