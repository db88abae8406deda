"""Exact and greedy colouring of conflict graphs, DIMACS export and external SAT runs."""

from __future__ import annotations

import json
import os
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from typing import Iterator, Mapping

import numpy as np

from . import _kernels
from .conflict import ConflictGraph, degeneracy, find_max_clique
from .errors import MissingVertex, ParseError, SizeLimit, SolverCrash, Timeout

Coloring = dict  # box id -> colour index (0-based)

DEFAULT_NODE_LIMIT = 50_000_000
ENUMERATION_CAP = 12


def palette_size(c: Mapping[str, int]) -> int:
    return 1 + max(c.values()) if c else 0


def verify_coloring(g: ConflictGraph, c: Mapping[str, int]) -> tuple[str, str] | None:
    """Return the first monochromatic edge in canonical order, or ``None`` if proper."""
    missing = [v for v in g.vertices if v not in c]
    if missing:
        raise MissingVertex(f"colouring misses {len(missing)} vertices, e.g. {missing[0]!r}")
    for u, v in g.edges:
        if c[u] == c[v]:
            return (u, v)
    return None


@dataclass
class SearchOutcome:
    sat: bool
    coloring: Coloring | None
    nodes: int
    stats: dict = field(default_factory=dict)


def _search(g: ConflictGraph, k: int, regions=None, caps=None, seed=None, node_limit=DEFAULT_NODE_LIMIT, jit=None):
    order = list(g.vertices)
    indptr, indices = g.csr(order)
    names = list(regions or {})
    member = np.zeros((len(order), len(names)), dtype=np.bool_)
    for r, name in enumerate(names):
        for v in regions[name]:
            member[g.index[v], r] = True
    cap_arr = np.array([caps[name] for name in names], dtype=np.int64)
    fixed = np.full(len(order), -1, dtype=np.int64)
    for colour, v in enumerate(seed or ()):
        fixed[g.index[v]] = colour
    status, colours, nodes = _kernels.color_search(indptr, indices, k, member, cap_arr, fixed, node_limit, jit)
    stats = {"nodes": nodes, "vertices": len(order), "k": k, "seeded": len(seed or ())}
    if status == _kernels.LIMIT:
        raise Timeout(f"colouring search exceeded {node_limit} nodes", stats)
    if status == _kernels.UNSAT:
        return SearchOutcome(False, None, nodes, stats)
    return SearchOutcome(True, {v: int(colours[i]) for i, v in enumerate(order)}, nodes, stats)


def k_colorable_outcome(g: ConflictGraph, k: int, *, seed_clique=True, node_limit=DEFAULT_NODE_LIMIT, jit=None):
    if k < 1:
        raise ValueError("k must be at least 1")
    if not g.vertices:
        return SearchOutcome(True, {}, 0, {"nodes": 0})
    seed = find_max_clique(g) if seed_clique else []
    if len(seed) > k:
        return SearchOutcome(False, None, 0, {"nodes": 0, "clique": len(seed)})
    return _search(g, k, seed=seed, node_limit=node_limit, jit=jit)


def k_colorable(g: ConflictGraph, k: int, **kw) -> Coloring | None:
    """A proper colouring with at most ``k`` colours, or ``None`` if none exists."""
    return k_colorable_outcome(g, k, **kw).coloring


def greedy_degeneracy_coloring(g: ConflictGraph) -> Coloring:
    _, order = degeneracy(g)
    c: Coloring = {}
    for v in reversed(order):
        taken = {c[u] for u in g.adj[v] if u in c}
        col = 0
        while col in taken:
            col += 1
        c[v] = col
    return {v: c[v] for v in g.vertices}


def chromatic_number(g: ConflictGraph, *, node_limit=DEFAULT_NODE_LIMIT, jit=None) -> tuple[int, Coloring]:
    if not g.vertices:
        return 0, {}
    lower = len(find_max_clique(g))
    best = greedy_degeneracy_coloring(g)
    upper = palette_size(best)
    for k in range(lower, upper):
        found = k_colorable_outcome(g, k, node_limit=node_limit, jit=jit).coloring
        if found is not None:
            return k, found
    return upper, best


def capped_coloring(g: ConflictGraph, regions: Mapping[str, frozenset], caps: Mapping[str, int], **kw):
    return capped_coloring_outcome(g, regions, caps, **kw).coloring


def capped_coloring_outcome(g, regions, caps, *, node_limit=DEFAULT_NODE_LIMIT, jit=None) -> SearchOutcome:
    """Proper colouring in which region ``r`` sees at most ``caps[r]`` colours.

    Only vertices covered by some region are searched; the rest are then
    coloured greedily, with new colours if needed, since they cannot affect
    feasibility.
    """
    for name, cap in caps.items():
        if cap < 1:
            raise ValueError(f"cap for {name!r} must be >= 1")
    regions = {name: frozenset(regions[name]) for name in caps}
    covered = frozenset().union(*regions.values()) if regions else frozenset()
    unknown = covered - set(g.vertices)
    if unknown:
        raise MissingVertex(f"region members not in graph: {sorted(unknown)[:3]}")
    core = g.induced(covered)
    if len(core):
        # n colours always suffice, so k = n leaves only the caps binding
        outcome = _search(core, len(core), regions, caps, find_max_clique(core), node_limit, jit)
    else:
        outcome = SearchOutcome(True, {}, 0, {"nodes": 0})
    if not outcome.sat:
        return outcome
    c = dict(outcome.coloring)
    for v in g.vertices:
        if v not in c:
            taken = {c[u] for u in g.adj[v] if u in c}
            col = 0
            while col in taken:
                col += 1
            c[v] = col
    outcome.coloring = {v: c[v] for v in g.vertices}
    return outcome


def enumerate_proper_colorings(g: ConflictGraph, max_vertices: int = ENUMERATION_CAP) -> Iterator[Coloring]:
    """Every proper colouring up to colour renaming, exactly once.

    Colours appear in first-occurrence order along the canonical vertex order.
    """
    n = len(g.vertices)
    if n > max_vertices:
        raise SizeLimit(f"{n} vertices exceeds enumeration cap {max_vertices}")
    verts = g.vertices
    earlier = [[g.index[u] for u in g.adj[v] if g.index[u] < i] for i, v in enumerate(verts)]
    colours = [0] * n

    def rec(i, top):
        if i == n:
            yield dict(zip(verts, colours))
            return
        blocked = {colours[j] for j in earlier[i]}
        for c in range(top + 2):
            if c not in blocked:
                colours[i] = c
                yield from rec(i + 1, max(top, c))

    yield from rec(0, -1)


def coloring_to_json(g: ConflictGraph, c: Mapping[str, int]) -> str:
    return json.dumps({"graph_hash": g.content_hash(), "colors": {v: int(c[v]) for v in g.vertices}})


def coloring_from_json(text: str) -> tuple[str, Coloring]:
    data = json.loads(text)
    return data.get("graph_hash", ""), {str(k): int(v) for k, v in data["colors"].items()}


# --- DIMACS ---------------------------------------------------------------


def cnf_var(i: int, colour: int, k: int) -> int:
    return i * k + colour + 1


def export_cnf(g: ConflictGraph, k: int, seed_clique: bool = True) -> str:
    """Direct encoding of k-colourability.

    One at-least-one clause per vertex, one binary clause per edge and
    colour, then (optionally) unit clauses fixing a maximum clique to
    colours ``0..q-1``.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    clauses = []
    for i in range(len(g.vertices)):
        clauses.append([cnf_var(i, c, k) for c in range(k)])
    for u, v in g.edges:
        i, j = sorted((g.index[u], g.index[v]))
        for c in range(k):
            clauses.append([-cnf_var(i, c, k), -cnf_var(j, c, k)])
    if seed_clique and g.vertices:
        clique = find_max_clique(g)
        for c, v in enumerate(clique[:k]):
            clauses.append([cnf_var(g.index[v], c, k)])
        if len(clique) > k:
            # a (k+1)-clique is unsatisfiable under seeding: emit the empty clause
            clauses.append([])
    lines = [f"p cnf {len(g.vertices) * k} {len(clauses)}"]
    lines += [" ".join(map(str, cl + [0])) for cl in clauses]
    return "\n".join(lines) + "\n"


def decode_model(g: ConflictGraph, k: int, model: list[int]) -> Coloring:
    true = {lit for lit in model if lit > 0}
    c = {}
    for i, v in enumerate(g.vertices):
        for colour in range(k):
            if cnf_var(i, colour, k) in true:
                c[v] = colour
                break
        else:
            raise ParseError(f"model assigns no colour to {v!r}")
    return c


def parse_sat_output(text: str) -> tuple[bool, list[int]]:
    verdict = None
    model: list[int] = []
    for line in text.splitlines():
        line = line.strip()
        if line.startswith("s "):
            word = line[2:].strip()
            if word == "SATISFIABLE":
                verdict = True
            elif word == "UNSATISFIABLE":
                verdict = False
            else:
                raise ParseError(f"unknown verdict line: {line!r}")
        elif line.startswith("v "):
            try:
                model.extend(int(tok) for tok in line[2:].split())
            except ValueError as exc:
                raise ParseError(f"bad model line: {line!r}") from exc
    if verdict is None:
        raise ParseError("no 's' verdict line in solver output")
    return verdict, [lit for lit in model if lit != 0]


def run_external_sat(cnf: str, command: str | list[str], timeout: float | None = None) -> tuple[bool, list[int]]:
    """Run a DIMACS solver on ``cnf`` (CNF path appended as last argument).

    Returns ``(True, model)`` or ``(False, [])``. Exit codes 10/20 are the
    usual SAT-competition conventions and are not treated as crashes.
    """
    argv = shlex.split(command) if isinstance(command, str) else list(command)
    fd, path = tempfile.mkstemp(suffix=".cnf")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(cnf)
        proc = subprocess.run(argv + [path], capture_output=True, text=True, timeout=timeout)
    except subprocess.TimeoutExpired as exc:
        raise Timeout(f"external solver exceeded {timeout} s", {"command": argv}) from exc
    except OSError as exc:
        raise SolverCrash(f"cannot start solver: {exc}") from exc
    finally:
        os.unlink(path)
    try:
        return parse_sat_output(proc.stdout)
    except ParseError:
        if proc.returncode not in (0, 10, 20):
            raise SolverCrash(f"solver exited {proc.returncode}: {proc.stderr.strip()[:200]}") from None
        raise
