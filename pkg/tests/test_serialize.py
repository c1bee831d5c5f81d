import pytest

from hyperset.errors import ValidationError
from hyperset.flat import FlatSystem, solve
from hyperset.reducts import closure, undirect
from hyperset.serialize import (
    emit_graph,
    format_system,
    normal_form,
    numeral_of,
    parse_graph_output,
    serialize_set,
    structural_ranks,
    wf_code_index,
    wf_literal,
)
from hyperset.sysfile import parse_system
from hyperset.universe import Apg, Universe

OMEGA = Apg(children={0: frozenset({0})}, root=0)

PAIR_TEXT = "atom a = 0\natom b = 1\nx = {y,a}\ny = {x,b}\n"


def test_wf_code_index_orders_by_code(u):
    from hyperset.rado import ackermann_decode
    sets = [ackermann_decode(u, n) for n in range(40)]
    idx = wf_code_index(u, sets)
    assert [idx[s] for s in sets] == list(range(40))


def test_wf_literal_of_numerals(u):
    assert serialize_set(u, u.vn(0)) == "{}"
    assert serialize_set(u, u.vn(1)) == "{{}}"
    assert serialize_set(u, u.vn(2)) == "{{},{{}}}"
    assert wf_literal(u, u.vn(3), numerals=True) == "3"


def test_numeral_detection(u):
    assert numeral_of(u, u.vn(7)) == 7
    odd = u.make_set([u.vn(1)])
    assert numeral_of(u, odd) is None


def test_quine_atom_normal_form(u):
    omega = u.canonicalize(OMEGA)
    assert serialize_set(u, omega) == "ν0 = {ν0}\n"


def test_membership_pair_normal_form(u):
    sol = solve(u, parse_system(u, PAIR_TEXT))
    assert serialize_set(u, sol["x"]) == (
        "atom a0 = 0\n"
        "atom a1 = 1\n"
        "ν0 = {a0,ν1}\n"
        "ν1 = {a1,ν0}\n"
    )


def test_serialization_is_history_free():
    # same hyperset, two very different construction orders
    u1 = Universe()
    u1.vn(6)
    sol1 = solve(u1, parse_system(u1, PAIR_TEXT))
    text1 = serialize_set(u1, sol1["x"])

    u2 = Universe()
    sys2 = parse_system(u2, "atom b = 1\natom a = 0\ny = {x,b}\nx = {y,a}\n")
    sol2 = solve(u2, sys2)
    u2.canonicalize(OMEGA)
    text2 = serialize_set(u2, sol2["x"])
    assert text1 == text2


def test_serialization_stable_under_growth(u):
    omega = u.canonicalize(OMEGA)
    before = serialize_set(u, omega)
    u.vn(9)
    solve(u, parse_system(u, PAIR_TEXT))
    assert serialize_set(u, omega) == before


def test_normal_form_keeps_root_names(u):
    sol = solve(u, parse_system(u, PAIR_TEXT))
    text = normal_form(u, [("x", sol["x"]), ("y", sol["y"])])
    assert text == (
        "atom a0 = 0\n"
        "atom a1 = 1\n"
        "x = {a0,y}\n"
        "y = {a1,x}\n"
    )


def test_normal_form_drops_aliases(u):
    omega = u.canonicalize(OMEGA)
    text = normal_form(u, [("x", omega), ("y", omega)])
    assert text == "x = {x}\n"


def test_normal_form_well_founded_root(u):
    text = normal_form(u, [("x", u.vn(2))])
    assert text == "atom a0 = 0\natom a1 = 1\nx = {a0,a1}\n"


def test_structural_ranks_require_closed_input(u):
    one = u.vn(1)
    with pytest.raises(ValidationError):
        structural_ranks(u, [one])
    cl = closure(u, [one])
    ranks = structural_ranks(u, cl.vertices)
    assert sorted(ranks.values()) == [0, 1]


def test_format_system_round_trip(u):
    sys = parse_system(u, PAIR_TEXT)
    text = format_system(u, sys)
    sys2 = parse_system(u, text)
    sol, sol2 = solve(u, sys), solve(u, sys2)
    assert sol == sol2


def test_format_system_rejects_hyperset_atom(u):
    omega = u.canonicalize(OMEGA)
    bad = FlatSystem(atoms={"w": omega}, equations=[("x", frozenset({"w"}))])
    with pytest.raises(ValidationError):
        format_system(u, bad)


def test_emit_graph_shapes(u):
    sol = solve(u, parse_system(u, PAIR_TEXT))
    sl = closure(u, list(sol.values()))
    text = emit_graph(u, undirect(u, sl, "double_only"), "double_only")
    verts, edges = parse_graph_output(text)
    labels = [lab for _, lab, _ in verts]
    assert labels[:2] == ["0", "1"]            # vn(0), vn(1) by code
    assert all(lab.startswith("nu") for lab in labels[2:])
    assert len(edges) == 1 and edges[0][2] == 2
    assert not any(loop for _, _, loop in verts)


def test_emit_graph_loop_flag(u):
    omega = u.canonicalize(OMEGA)
    sl = closure(u, [omega])
    text = emit_graph(u, undirect(u, sl, "loopy"), "loopy")
    verts, edges = parse_graph_output(text)
    assert verts == [(0, "nu0", True)]
    assert edges == []


def test_emit_graph_multi_mode(u):
    sol = solve(u, parse_system(u, PAIR_TEXT))
    sl = closure(u, list(sol.values()))
    text = emit_graph(u, undirect(u, sl, "multi"), "multi")
    verts, edges = parse_graph_output(text)
    mult_by_pair = {(i, j): m for i, j, m in edges}
    assert 2 in mult_by_pair.values()
    assert 1 in mult_by_pair.values()


def test_parse_graph_output_validates():
    with pytest.raises(ValidationError):
        parse_graph_output("v 0 x\ne 0 0 3\n")
    with pytest.raises(ValidationError):
        parse_graph_output("v 1 x\n")
    with pytest.raises(ValidationError):
        parse_graph_output("nonsense\n")
