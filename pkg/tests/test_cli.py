import pytest

from hyperset.cli import main
from hyperset.serialize import parse_graph_output

PAIR_TEXT = "atom a = 0\natom b = 1\nx = {y,a}\ny = {x,b}\n"

FOUR_CYCLE = """\
vertices 4
edge 0 1
edge 1 2
edge 2 3
edge 3 0
loop 0
"""


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_solve_membership_pair(tmp_path, capsys):
    f = tmp_path / "pair.hs"
    f.write_text(PAIR_TEXT)
    code, out, err = run(capsys, "solve", str(f))
    assert code == 0 and err == ""
    assert out == "atom a0 = 0\natom a1 = 1\nx = {a0,y}\ny = {a1,x}\n"


def test_solve_round_trip_fixpoint(tmp_path, capsys):
    f = tmp_path / "pair.hs"
    f.write_text(PAIR_TEXT)
    code, gen1, _ = run(capsys, "solve", str(f))
    assert code == 0
    f2 = tmp_path / "gen1.hs"
    f2.write_text(gen1)
    code, gen2, _ = run(capsys, "solve", str(f2))
    assert code == 0
    assert gen1 == gen2


def test_solve_parse_error(tmp_path, capsys):
    f = tmp_path / "bad.hs"
    f.write_text("x = {missing}\n")
    code, out, err = run(capsys, "solve", str(f))
    assert code == 1
    assert "missing" in err and out == ""


def test_missing_file(capsys):
    code, _, err = run(capsys, "solve", "/nonexistent/path.hs")
    assert code == 1 and "error" in err


def test_undirect_modes(tmp_path, capsys):
    f = tmp_path / "pair.hs"
    f.write_text(PAIR_TEXT)
    for mode in ("loopy", "multi", "double"):
        code, out, err = run(capsys, "undirect", str(f), "--mode", mode)
        assert code == 0, err
        verts, edges = parse_graph_output(out)
        assert len(verts) == 4  # x, y, vn0, vn1
        if mode == "double":
            assert len(edges) == 1 and edges[0][2] == 2
        if mode == "multi":
            assert sorted(m for _, _, m in edges)[-1] == 2


def test_witness_simple(capsys):
    code, out, err = run(capsys, "witness", "--simple", "--u", "0,1", "--v", "2")
    assert code == 0, err
    assert out.startswith("set z\n")
    assert "check" in out
    assert "FAIL" not in out


def test_witness_loopy(capsys):
    code, out, err = run(capsys, "witness", "--loopy", "--u", "0", "--v", "1")
    assert code == 0, err
    for section in ("set z1", "set z2", "set x"):
        assert section in out
    assert "FAIL" not in out
    assert "check z2_loop pass" in out


def test_witness_overlap_is_error(capsys):
    code, _, err = run(capsys, "witness", "--simple", "--u", "1", "--v", "1")
    assert code == 1 and "error" in err


def parse_witness_output(u, out):
    """Machine-check of the witness grammar; returns (sets, checks)."""
    from hyperset.sysfile import parse_set_literal, parse_system
    sets = {}
    checks = []
    lines = out.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("set "):
            name = line.split(" ", 1)[1]
            body = []
            i += 1
            while lines[i] != "end":
                body.append(lines[i])
                i += 1
            text = "\n".join(body)
            if "=" in text:
                sets[name] = parse_system(u, text)
            else:
                sets[name] = parse_set_literal(u, text)
        else:
            kind, cond, verdict = line.split(" ")
            assert kind == "check" and verdict in ("pass", "FAIL")
            checks.append((cond, verdict))
        i += 1
    return sets, checks


def test_witness_output_grammar(capsys, u):
    code, out, _ = run(capsys, "witness", "--loopy", "--u", "0,{2}", "--v", "1")
    assert code == 0
    sets, checks = parse_witness_output(u, out)
    assert set(sets) == {"z1", "z2", "x"}
    assert checks and all(v == "pass" for _, v in checks)


def test_star_output_shape(capsys):
    code, out, err = run(capsys, "star", "3")
    assert code == 0, err
    verts, edges = parse_graph_output(out)
    assert len(verts) == 4
    assert len(edges) == 3
    assert all(m == 2 for _, _, m in edges)
    degree = {}
    for i, j, _ in edges:
        degree[i] = degree.get(i, 0) + 1
        degree[j] = degree.get(j, 0) + 1
    assert sorted(degree.values()) == [1, 1, 1, 3]  # star shape
    assert not any(loop for _, _, loop in verts)


def test_star_zero(capsys):
    code, out, err = run(capsys, "star", "0")
    assert code == 0
    verts, edges = parse_graph_output(out)
    assert len(verts) == 1 and edges == []


def test_component_command(tmp_path, capsys):
    f = tmp_path / "pattern.txt"
    f.write_text(FOUR_CYCLE)
    code, out, err = run(capsys, "component", str(f))
    assert code == 0, err
    graph_text = out.split("check")[0]
    verts, edges = parse_graph_output(graph_text)
    assert len(verts) == 4
    assert len(edges) == 4
    assert sum(1 for _, _, loop in verts if loop) == 1
    assert "check isomorphic pass" in out


def test_component_matrix_format(tmp_path, capsys):
    f = tmp_path / "pattern.txt"
    f.write_text("1 1\n1 0\n")
    code, out, err = run(capsys, "component", str(f), "--pattern-format", "matrix")
    assert code == 0, err
    verts, edges = parse_graph_output(out.split("check")[0])
    assert len(verts) == 2 and len(edges) == 1


def test_component_disconnected_pattern(tmp_path, capsys):
    f = tmp_path / "pattern.txt"
    f.write_text("vertices 2\nloop 0\nloop 1\n")
    code, _, err = run(capsys, "component", str(f))
    assert code == 1 and "error" in err


def test_rado_check(capsys):
    code, out, err = run(capsys, "rado", "--check", "128")
    assert code == 0, err
    assert out == "rado check max=128 sets=129 pairs=8256 ok\n"


def test_game_bit_vs_hf(capsys):
    code, out, err = run(capsys, "game", "--rounds", "6", "--left", "bit",
                         "--right", "hf")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert len([l for l in lines if l.startswith("pair ")]) == 6
    assert lines[-1] == "game ok size=6"


def test_game_loopy_seeds(capsys):
    code, out, err = run(capsys, "game", "--rounds", "4", "--left", "loopy:1",
                         "--right", "loopy:2")
    assert code == 0, err
    assert out.strip().splitlines()[-1] == "game ok size=4"


def test_game_mode_mismatch(capsys):
    code, _, err = run(capsys, "game", "--rounds", "2", "--left", "bit",
                       "--right", "loopy")
    assert code == 1 and "loop mode" in err


def test_census(capsys):
    code, out, err = run(capsys, "census", "--max-n", "5")
    assert code == 0, err
    lines = out.strip().splitlines()
    assert lines[0] == "census n=0 double_degree=0 loop=false"
    assert lines[5] == "census n=5 double_degree=5 loop=false"
    assert lines[-1] == "census distinct=6"


def test_universe_cap_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("HYPERSET_MAX_SETS", "3")
    f = tmp_path / "big.hs"
    f.write_text("atom a = 9\nx = {a}\n")
    code, _, err = run(capsys, "solve", str(f))
    assert code == 1 and "cap" in err
