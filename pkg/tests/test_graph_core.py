from __future__ import annotations

import pytest

from pathcover.errors import GraphFormatError, InvalidPathError, VertexRangeError
from pathcover.graph_core import (
    Graph,
    Solution,
    classify_component,
    connected_components,
    dump_graph,
    induced_subgraph,
    load_graph,
    read_overlay,
    shape_of,
    split_long_path,
)


def _path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def test_load_graph_reads_header_edges_and_skips_comments() -> None:
    text = "c a comment\np 4 3\ne 1 2\ne 2 3\n\ne 3 4\nm 1 2\n"

    g = load_graph(text)

    assert g.n == 4
    assert g.m == 3
    assert g.edges() == ((0, 1), (1, 2), (2, 3))
    assert g.labels == (1, 2, 3, 4)
    assert g.neighbors(1) == (0, 2)


def test_load_graph_reports_the_offending_line() -> None:
    with pytest.raises(GraphFormatError) as excinfo:
        load_graph("p 3 2\ne 1 2\ne 2 x\n")

    assert excinfo.value.line == 3
    assert "line 3" in str(excinfo.value)


def test_load_graph_reports_invalid_utf8_with_its_line() -> None:
    with pytest.raises(GraphFormatError) as excinfo:
        load_graph(b"p 3 1\nc caf\xe9\ne 1 2\n")

    assert excinfo.value.line == 2
    assert "invalid UTF-8" in str(excinfo.value)
    assert load_graph(b"p 2 1\ne 1 2\n").m == 1


@pytest.mark.parametrize(
    "text",
    [
        "e 1 2\n",
        "p 3 1\ne 1 4\n",
        "p 3 1\ne 2 2\n",
        "p 3 2\ne 1 2\ne 2 1\n",
        "p 3 2\ne 1 2\n",
        "p 3 1\nq 1 2\n",
        "",
    ],
)
def test_load_graph_rejects_malformed_input(text: str) -> None:
    with pytest.raises(GraphFormatError):
        load_graph(text)


def test_graph_constructor_validates_vertices() -> None:
    with pytest.raises(VertexRangeError):
        Graph(3, [(0, 3)])
    with pytest.raises(GraphFormatError):
        Graph(3, [(1, 1)])


def test_dump_graph_keeps_overlays_readable() -> None:
    g = _path_graph(5)

    text = dump_graph(g, {"m": [(0, 1), (3, 4)], "d": [(1, 2)]}, comment="H dump")

    assert text.startswith("c H dump\np 5 4\n")
    assert load_graph(text).edge_set() == g.edge_set()
    assert read_overlay(text, "m") == [(0, 1), (3, 4)]
    assert read_overlay(text, "d") == [(1, 2)]


def test_induced_subgraph_maps_back_to_parent_ids() -> None:
    g = _path_graph(6)

    sub, new_to_old = induced_subgraph(g, [5, 1, 2, 4])

    assert new_to_old == (1, 2, 4, 5)
    assert sub.edges() == ((0, 1), (2, 3))
    assert sub.labels == (2, 3, 5, 6)


def test_connected_components_are_sorted_by_minimum() -> None:
    g = Graph(6, [(4, 5), (0, 2)])

    assert connected_components(g) == [[0, 2], [1], [3], [4, 5]]


def test_shape_of_treats_p3_as_a_star() -> None:
    shape = shape_of([0, 1, 2], [(0, 1), (1, 2)])

    assert shape.kind == "star"
    assert shape.center == 1


def test_classify_component_recognises_triangle_and_paths() -> None:
    g = Graph(8, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (5, 6), (6, 7)])

    assert classify_component(g, [0, 1, 2]).kind == "triangle"
    path = classify_component(g, [3, 4, 5, 6, 7])
    assert (path.kind, path.order) == ("path", 5)
    with pytest.raises(ValueError):
        classify_component(g, [3, 4])


def test_split_long_path_uses_pieces_of_order_four_to_seven() -> None:
    assert [len(p) for p in split_long_path(range(15))] == [7, 4, 4]
    assert [len(p) for p in split_long_path(range(8))] == [4, 4]
    assert [len(p) for p in split_long_path(range(10))] == [6, 4]
    assert split_long_path((3, 1, 2, 0)) == [(3, 1, 2, 0)]
    with pytest.raises(InvalidPathError):
        split_long_path((0, 1, 2))


def test_solution_relabel_and_split_keep_the_value() -> None:
    s = Solution.from_paths([range(9)])

    split = s.split()
    relabeled = split.relabel([10 + v for v in range(9)])

    assert split.value == s.value == 9
    assert [len(p) for p in split.paths] == [5, 4]
    assert relabeled.vertices() == set(range(10, 19))
