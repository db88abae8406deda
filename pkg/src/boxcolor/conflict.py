"""Conflict graphs of box arrangements and the structural measures used on them."""

from __future__ import annotations

import hashlib
import heapq
import json
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .errors import Timeout
from .geometry import Arrangement, require_valid


@dataclass(frozen=True, eq=False)
class ConflictGraph:
    """Undirected simple graph on box ids.

    ``vertices`` is the canonical order (sorted ids); ``adj`` maps each
    vertex to its neighbour set. ``source`` is the content hash of the
    arrangement the graph was built from, or ``""`` for abstract graphs.
    """

    vertices: tuple[str, ...]
    adj: Mapping[str, frozenset[str]]
    source: str = ""

    @classmethod
    def from_edges(cls, vertices: Iterable[str], edges: Iterable[tuple[str, str]], source: str = "") -> ConflictGraph:
        verts = tuple(sorted(set(vertices)))
        nbrs = {v: set() for v in verts}
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop on {u!r}")
            nbrs[u].add(v)
            nbrs[v].add(u)
        return cls(verts, {v: frozenset(s) for v, s in nbrs.items()}, source)

    def __len__(self):
        return len(self.vertices)

    def __eq__(self, other):
        if not isinstance(other, ConflictGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    @cached_property
    def index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edges(self) -> tuple[tuple[str, str], ...]:
        """Edges as ``(u, v)`` with ``u < v``, sorted lexicographically."""
        return tuple(sorted((u, v) for u in self.vertices for v in self.adj[u] if u < v))

    def has_edge(self, u: str, v: str) -> bool:
        return v in self.adj[u]

    def degree(self, v: str) -> int:
        return len(self.adj[v])

    def csr(self, order: list[str] | None = None) -> tuple[np.ndarray, np.ndarray]:
        order = list(self.vertices) if order is None else order
        pos = {v: i for i, v in enumerate(order)}
        indptr = [0]
        indices = []
        for v in order:
            nb = sorted(pos[u] for u in self.adj[v])
            indices.extend(nb)
            indptr.append(len(indices))
        return np.array(indptr, dtype=np.int64), np.array(indices, dtype=np.int64)

    def induced(self, keep: Iterable[str]) -> ConflictGraph:
        keep = set(keep)
        verts = [v for v in self.vertices if v in keep]
        return ConflictGraph(tuple(verts), {v: self.adj[v] & keep for v in verts}, self.source)

    def without_edges(self, drop: Iterable[tuple[str, str]]) -> ConflictGraph:
        gone = {frozenset(e) for e in drop}
        kept = [e for e in self.edges if frozenset(e) not in gone]
        return ConflictGraph.from_edges(self.vertices, kept, self.source)

    def relabel(self, mapping: Mapping[str, str]) -> ConflictGraph:
        return ConflictGraph.from_edges(
            (mapping[v] for v in self.vertices), ((mapping[u], mapping[v]) for u, v in self.edges), self.source
        )

    def content_hash(self) -> str:
        payload = json.dumps({"vertices": list(self.vertices), "edges": [list(e) for e in self.edges]})
        return hashlib.sha256(payload.encode()).hexdigest()


def build_graph(arr: Arrangement) -> ConflictGraph:
    require_valid(arr)
    lo, hi = arr.arrays()
    codes = _kernels.contact_codes(lo, hi)
    ids = arr.ids
    ii, jj = np.nonzero(np.triu(codes == _kernels.CONTACT))
    edges = [(ids[i], ids[j]) for i, j in zip(ii.tolist(), jj.tolist())]
    return ConflictGraph.from_edges(ids, edges, arr.content_hash())


def degeneracy(g: ConflictGraph) -> tuple[int, list[str]]:
    """Smallest-last elimination: repeatedly drop a minimum-degree vertex
    (ties to the smallest canonical index). Returns the largest degree seen
    at removal time and the removal order."""
    deg = {v: len(g.adj[v]) for v in g.vertices}
    heap = [(d, g.index[v], v) for v, d in deg.items()]
    heapq.heapify(heap)
    removed = set()
    order = []
    best = 0
    while heap:
        d, _, v = heapq.heappop(heap)
        if v in removed or d != deg[v]:
            continue
        removed.add(v)
        order.append(v)
        best = max(best, d)
        for u in g.adj[v]:
            if u not in removed:
                deg[u] -= 1
                heapq.heappush(heap, (deg[u], g.index[u], u))
    return best, order


def find_max_clique(g: ConflictGraph, node_limit: int = 5_000_000) -> list[str]:
    """A maximum clique (canonical order), by branch and bound with a greedy
    colouring bound on the candidate set."""
    n = len(g.vertices)
    nbr = [0] * n
    for v, i in g.index.items():
        for u in g.adj[v]:
            nbr[i] |= 1 << g.index[u]

    best: list[int] = []
    nodes = 0

    def colour_bounds(cand: int) -> list[tuple[int, int]]:
        # sequential greedy colouring; vertex listed with its colour class number
        out = []
        rest = cand
        k = 0
        while rest:
            k += 1
            avail = rest
            while avail:
                low = avail & -avail
                v = low.bit_length() - 1
                avail &= ~low & ~nbr[v]
                rest &= ~low
                out.append((v, k))
        return out

    def expand(cand: int, cur: list[int]):
        nonlocal best, nodes
        nodes += 1
        if nodes > node_limit:
            raise Timeout("clique search exceeded node budget", {"nodes": nodes})
        if not cand:
            if len(cur) > len(best):
                best = list(cur)
            return
        for v, bound in reversed(colour_bounds(cand)):
            if len(cur) + bound <= len(best):
                return
            cur.append(v)
            expand(cand & nbr[v], cur)
            cur.pop()
            cand &= ~(1 << v)

    expand((1 << n) - 1, [])
    return [g.vertices[i] for i in sorted(best)]


def max_clique(g: ConflictGraph, node_limit: int = 5_000_000) -> int:
    return len(find_max_clique(g, node_limit))


def components(g: ConflictGraph) -> list[list[str]]:
    seen = set()
    out = []
    for s in g.vertices:
        if s in seen:
            continue
        seen.add(s)
        comp = [s]
        stack = [s]
        while stack:
            v = stack.pop()
            for u in g.adj[v]:
                if u not in seen:
                    seen.add(u)
                    comp.append(u)
                    stack.append(u)
        out.append(sorted(comp, key=g.index.__getitem__))
    return out


def export_dot(g: ConflictGraph, name: str = "G") -> str:
    lines = [f"graph {name} {{"]
    lines += [f'  "{v}";' for v in g.vertices]
    lines += [f'  "{u}" -- "{v}";' for u, v in g.edges]
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_edges_json(g: ConflictGraph) -> str:
    return json.dumps({"vertices": list(g.vertices), "edges": [list(e) for e in g.edges]})


def graph_from_edges_json(text: str) -> ConflictGraph:
    data = json.loads(text)
    return ConflictGraph.from_edges(data["vertices"], [tuple(e) for e in data["edges"]])
