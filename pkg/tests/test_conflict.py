import json
import random

import networkx as nx
import pytest

from boxcolor.conflict import (
    ConflictGraph,
    build_graph,
    components,
    degeneracy,
    export_dot,
    export_edges_json,
    find_max_clique,
    graph_from_edges_json,
    max_clique,
)
from boxcolor.constructions import build_figure1, gen_random_guillotine
from boxcolor.errors import InvalidArrangement, Timeout
from boxcolor.geometry import Arrangement, Box
from conftest import graph_from_pairs, oracle_clique, oracle_edges, random_graph, to_nx


def test_gadget_x_graph_matches_oracle(gadget_x, graph_x):
    assert set(graph_x.edges) == oracle_edges(gadget_x)
    assert len(graph_x.edges) == 11


def test_gadget_y_graph_matches_oracle(gadget_y, graph_y):
    assert set(graph_y.edges) == oracle_edges(gadget_y)
    assert len(graph_y.edges) == 35


@pytest.mark.parametrize("seed", range(5))
def test_random_tiling_graph_matches_oracle(seed):
    arr = gen_random_guillotine(seed, 40, (8, 8, 8))
    assert set(build_graph(arr).edges) == oracle_edges(arr)


def test_build_graph_rejects_overlap():
    arr = Arrangement((Box.of("a", (0, 2), (0, 1), (0, 1)), Box.of("b", (1, 3), (0, 1), (0, 1))))
    with pytest.raises(InvalidArrangement):
        build_graph(arr)


def test_canonical_order_is_sorted(graph_y):
    assert list(graph_y.vertices) == sorted(graph_y.vertices)
    assert graph_y.source


def test_self_loop_rejected():
    with pytest.raises(ValueError):
        ConflictGraph.from_edges(["a"], [("a", "a")])


@pytest.mark.parametrize("seed", range(15))
def test_degeneracy_matches_networkx_core_number(seed):
    g = random_graph(random.Random(seed), 25, 0.25)
    d, order = degeneracy(g)
    core = nx.core_number(to_nx(g))
    assert d == max(core.values(), default=0)
    assert sorted(order) == list(g.vertices)
    # every vertex has at most d neighbours later in the order
    pos = {v: i for i, v in enumerate(order)}
    assert all(sum(pos[u] > pos[v] for u in g.adj[v]) <= d for v in order)


def test_degeneracy_of_x(graph_x):
    assert degeneracy(graph_x)[0] == 3


@pytest.mark.parametrize("seed", range(15))
def test_clique_matches_networkx(seed):
    g = random_graph(random.Random(100 + seed), 22, 0.45)
    q = find_max_clique(g)
    assert len(q) == oracle_clique(g)
    assert all(g.has_edge(u, v) for i, u in enumerate(q) for v in q[i + 1 :])


def test_clique_of_gadgets(graph_x, graph_y):
    assert max_clique(graph_x) == 3
    assert max_clique(graph_y) == oracle_clique(graph_y)


def test_k4_arrangement_has_clique_four():
    # three slabs around a corner post, all mutually touching
    boxes = (
        Box.of("a", (0, 1), (0, 2), (0, 2)),
        Box.of("b", (1, 3), (0, 1), (0, 2)),
        Box.of("c", (1, 3), (1, 2), (0, 1)),
        Box.of("d", (1, 3), (1, 2), (1, 2)),
    )
    g = build_graph(Arrangement(boxes))
    assert len(g.edges) == 6
    assert max_clique(g) == 4


def test_clique_node_limit():
    g = graph_from_pairs(30, [(a, b) for a in range(30) for b in range(a + 1, 30) if (a * b) % 7])
    with pytest.raises(Timeout):
        find_max_clique(g, node_limit=2)


def test_components_match_networkx():
    g = random_graph(random.Random(5), 40, 0.04)
    ours = {frozenset(c) for c in components(g)}
    theirs = {frozenset(c) for c in nx.connected_components(to_nx(g))}
    assert ours == theirs


def test_induced_and_without_edges(graph_x):
    sub = graph_x.induced(["A", "B", "T"])
    assert sub.vertices == ("A", "B", "T")
    assert set(sub.edges) <= set(graph_x.edges)
    e = graph_x.edges[0]
    assert not graph_x.without_edges([e]).has_edge(*e)


def test_export_dot_shape(graph_x):
    text = export_dot(graph_x)
    lines = text.splitlines()
    assert lines[0] == "graph G {" and lines[-1] == "}"
    assert len(lines) == 2 + len(graph_x) + len(graph_x.edges)
    u, v = graph_x.edges[0]
    assert f'  "{u}" -- "{v}";' in lines
    assert lines[1] == '  "A";'


def test_edges_json_round_trip(graph_y):
    text = export_edges_json(graph_y)
    assert json.loads(text)["vertices"] == list(graph_y.vertices)
    assert graph_from_edges_json(text) == graph_y


def test_content_hash_stable(graph_x):
    again = build_graph(build_figure1())
    assert again.content_hash() == build_graph(build_figure1()).content_hash()
    assert again.content_hash() != graph_x.content_hash()
