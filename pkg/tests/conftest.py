from __future__ import annotations

import itertools
import sys
from pathlib import Path

import networkx as nx
import pytest

from boxcolor.conflict import ConflictGraph, build_graph
from boxcolor.constructions import build_gadget_x, build_gadget_y

FIXTURES = Path(__file__).parent / "fixtures"
SAT_CMD = [sys.executable, str(FIXTURES / "pysat_dimacs.py")]


# --- independent oracles -----------------------------------------------------


def oracle_contact(a, b) -> bool:
    """Contact via the dimension of the closed intersection: exactly 2."""
    dims = 0
    for (al, ah), (bl, bh) in zip(a, b):
        lo, hi = max(al, bl), min(ah, bh)
        if lo > hi:
            return False
        dims += hi > lo
    return dims == 2


def oracle_edges(arr):
    coords = {b.id: [(iv.lo, iv.hi) for iv in b.extent] for b in arr.boxes}
    return {
        tuple(sorted((u, v))) for u, v in itertools.combinations(coords, 2) if oracle_contact(coords[u], coords[v])
    }


def oracle_probe(arr, axis, lo, hi, fixed):
    """Region by sampling unit-step midpoints along the probe."""
    others = [d for d in range(3) if d != axis]
    hit = set()
    for b in arr.boxes:
        if not all(b.lo(d) <= c <= b.hi(d) for d, c in zip(others, fixed)):
            continue
        if any(b.lo(axis) < t + 0.5 < b.hi(axis) for t in range(lo, hi)):
            hit.add(b.id)
    return hit


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]
        yield [[first]] + part


def oracle_count_colorings(g: ConflictGraph) -> int:
    """Proper colourings up to renaming = partitions into independent sets."""
    return sum(
        all(not g.has_edge(u, v) for block in p for u, v in itertools.combinations(block, 2))
        for p in set_partitions(list(g.vertices))
    )


def oracle_k_colorable(g: ConflictGraph, k: int) -> bool:
    verts = list(g.vertices)
    idx = {v: i for i, v in enumerate(verts)}
    edges = [(idx[u], idx[v]) for u, v in g.edges]
    return any(all(c[u] != c[v] for u, v in edges) for c in itertools.product(range(k), repeat=len(verts)))


def to_nx(g: ConflictGraph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(g.vertices)
    h.add_edges_from(g.edges)
    return h


def oracle_clique(g: ConflictGraph) -> int:
    h = to_nx(g)
    return max((len(c) for c in nx.find_cliques(h)), default=0)


def graph_from_pairs(n, pairs) -> ConflictGraph:
    names = [f"v{i:02d}" for i in range(n)]
    return ConflictGraph.from_edges(names, [(names[a], names[b]) for a, b in pairs])


def random_graph(rng, n, p):
    return graph_from_pairs(n, [(a, b) for a, b in itertools.combinations(range(n), 2) if rng.random() < p])


# --- fixtures ---------------------------------------------------------------


@pytest.fixture(scope="session")
def gadget_x():
    return build_gadget_x()


@pytest.fixture(scope="session")
def gadget_y():
    return build_gadget_y()


@pytest.fixture(scope="session")
def graph_x(gadget_x):
    return build_graph(gadget_x)


@pytest.fixture(scope="session")
def graph_y(gadget_y):
    return build_graph(gadget_y)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
