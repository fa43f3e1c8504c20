import json

import networkx as nx
import pytest

from src.data_loader import (
    convert_graph6_file,
    format_edge_list,
    iter_orbit_database,
    load_state,
    load_tableau,
    load_tuple,
    parse_edge_list,
    read_orbit_database,
    save_tableau,
    save_tuple,
    write_orbit_database,
)
from src.errors import ParseError
from src.stabilizer_states import GraphAdjacency
from src.symplectic_pauli import PartyPartition


def test_edge_list_with_headers():
    graph, partition = parse_edge_list([
        "# 四 qutrit 例子",
        "n=4",
        "d=3",
        "partition=1|2|3|4",
        "1 2",
        "1 4   # 注释",
        "3 4 2",
    ])
    assert graph.d == 3
    assert graph.edges() == [(0, 1, 1), (0, 3, 1), (2, 3, 2)]
    assert partition.sizes == (1, 1, 1, 1)


def test_edge_list_without_n_uses_largest_vertex():
    graph, partition = parse_edge_list(["1 3"])
    assert graph.n == 3
    assert partition is None


@pytest.mark.parametrize("lines,line", [
    (["n=3", "1 2", "2 x"], 3),
    (["n=3", "0 1"], 2),
    (["n=2", "1 2 3 4"], 2),
    (["size=3"], 1),
    (["n=2", "1 1"], 2),
])
def test_edge_list_errors_carry_line_numbers(lines, line):
    with pytest.raises(ParseError) as info:
        parse_edge_list(lines, path="g.txt")
    assert info.value.line == line
    assert str(info.value).startswith(f"g.txt:{line}:")


def test_edge_list_bad_partition():
    with pytest.raises(ParseError):
        parse_edge_list(["n=3", "partition=1|2", "1 2"])


def test_format_edge_list_parses_back(qutrit_graph):
    partition = PartyPartition.from_sizes((2, 2))
    graph, parsed = parse_edge_list(format_edge_list(qutrit_graph, partition).splitlines())
    assert graph == qutrit_graph
    assert parsed == partition


def test_tableau_json_forms(tmp_path):
    generators = tmp_path / "bell.json"
    generators.write_text(json.dumps({"n": 2, "d": 2, "generators": [[1, 0, 0, 1], [0, 1, 1, 0]],
                                      "partition": "1|2"}))
    paulis = tmp_path / "paulis.json"
    paulis.write_text(json.dumps({"paulis": ["XZ", "ZX"], "partition": [[1], [2]]}))
    edges = tmp_path / "edges.json"
    edges.write_text(json.dumps({"n": 2, "edges": [[1, 2]]}))

    a, pa = load_tableau(str(generators))
    b, pb = load_tableau(str(paulis))
    c, pc = load_tableau(str(edges))
    assert a.generators == b.generators == c.generators
    assert pa == pb
    assert pc is None


def test_tableau_json_errors(tmp_path):
    broken = tmp_path / "broken.json"
    broken.write_text('{"n": 2,\n "generators": [}')
    with pytest.raises(ParseError) as info:
        load_tableau(str(broken))
    assert info.value.line == 2

    empty = tmp_path / "empty.json"
    empty.write_text("{}")
    with pytest.raises(ParseError):
        load_tableau(str(empty))

    with pytest.raises(ParseError):
        load_tableau(str(tmp_path / "missing.json"))


def test_save_and_load_tableau(tmp_path, ghz3_state, singles3):
    path = str(tmp_path / "out" / "ghz.json")
    save_tableau(path, ghz3_state, singles3)
    tableau, partition = load_tableau(path)
    assert tableau.generators == ghz3_state.generators
    assert partition == singles3


def test_save_and_load_tuple(tmp_path, qutrit_tuple):
    path = str(tmp_path / "tuple.json")
    save_tuple(path, qutrit_tuple)
    assert load_tuple(path).matrices == qutrit_tuple.matrices

    bad = tmp_path / "bad_tuple.json"
    bad.write_text(json.dumps({"n": 2, "d": 2, "parties": 2, "matrices": [[[0, 1], [1, 0]]]}))
    with pytest.raises(ParseError):
        load_tuple(str(bad))


def test_load_state_dispatches_on_extension(tmp_path, bell_state):
    text = tmp_path / "bell.txt"
    text.write_text("n=2\npartition=1|2\n1 2\n")
    tableau, partition = load_state(str(text))
    assert tableau.generators == bell_state.generators
    assert partition.M == 2


def test_orbit_database_blocks():
    graphs = list(iter_orbit_database([
        "n=3",
        "1 2",
        "2 3",
        "",
        "",
        "# 第二个图",
        "n=2",
        "1 2",
    ]))
    assert [g.n for g in graphs] == [3, 2]
    assert graphs[0].edges() == [(0, 1, 1), (1, 2, 1)]


@pytest.mark.parametrize("lines,line", [
    (["1 2"], 1),
    (["n=two"], 1),
    (["n=2", "1 3"], 2),
    (["n=0"], 1),
])
def test_orbit_database_errors(lines, line):
    with pytest.raises(ParseError) as info:
        list(iter_orbit_database(lines, path="db.txt"))
    assert info.value.line == line


def test_orbit_database_file_round_trip(tmp_path):
    graphs = [GraphAdjacency.from_edges(4, [(0, 1), (0, 2), (0, 3)]),
              GraphAdjacency.from_edges(3, [(0, 1), (1, 2)])]
    path = str(tmp_path / "db.txt")
    assert write_orbit_database(path, graphs) == 2
    assert read_orbit_database(path) == graphs


def test_graph6_conversion(tmp_path):
    src = tmp_path / "graphs.g6"
    lines = [nx.to_graph6_bytes(g, header=False).decode("ascii").strip()
             for g in (nx.path_graph(4), nx.star_graph(3))]
    src.write_text(">>graph6<<" + lines[0] + "\n# 注释\n\n" + lines[1] + "\n")
    dst = str(tmp_path / "db.txt")
    assert convert_graph6_file(str(src), dst) == 2
    graphs = read_orbit_database(dst)
    assert graphs[0].edges() == [(0, 1, 1), (1, 2, 1), (2, 3, 1)]
    assert graphs[1].edges() == [(0, 1, 1), (0, 2, 1), (0, 3, 1)]


def test_graph6_errors_carry_line_numbers(tmp_path):
    src = tmp_path / "bad.g6"
    src.write_text("C~\n!!!\n")
    with pytest.raises(ParseError) as info:
        convert_graph6_file(str(src), str(tmp_path / "db.txt"))
    assert info.value.line == 2
