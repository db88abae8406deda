"""Signatures, the two gadget claims, full overlap, and the chi(Z) = 8 certificate."""

from __future__ import annotations

import hashlib
import itertools
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping

from .conflict import ConflictGraph, build_graph, components
from .constructions import ZStructure, bottom_name, build_gadget_x, build_gadget_y, build_z_abstract, build_z_geometric
from .errors import CertificationError, EmptyRegion, MissingVertex, StructureError
from .geometry import Arrangement
from .solver import (
    ENUMERATION_CAP,
    capped_coloring_outcome,
    enumerate_proper_colorings,
    export_cnf,
    k_colorable,
    palette_size,
    verify_coloring,
)


@dataclass(frozen=True)
class Signature:
    c1: int
    c12: int
    c2: int
    c23: int
    c3: int

    def __post_init__(self):
        if not (self.c1 <= self.c12 and self.c2 <= self.c12 and self.c2 <= self.c23 and self.c3 <= self.c23):
            raise ValueError(f"inconsistent signature {self.astuple()}")

    def astuple(self) -> tuple[int, int, int, int, int]:
        return (self.c1, self.c12, self.c2, self.c23, self.c3)

    def __str__(self):
        return f"{self.c1}_{self.c12}{self.c2}_{self.c23}{self.c3}"


# a_x b_y c written as (a, x, b, y, c)
CLAIM1_THRESHOLDS = (Signature(3, 3, 2, 4, 4), Signature(3, 4, 3, 3, 2), Signature(2, 3, 3, 4, 3))
CLAIM2_CAPS = 3


def signature(c: Mapping[str, int], a1, a2, a3) -> Signature:
    missing = [v for v in itertools.chain(a1, a2, a3) if v not in c]
    if missing:
        raise MissingVertex(f"colouring misses {missing[0]!r}")
    s1, s2, s3 = ({c[v] for v in a} for a in (a1, a2, a3))
    return Signature(len(s1), len(s1 | s2), len(s2), len(s2 | s3), len(s3))


def signature_geq(s: Signature, t: Signature) -> bool:
    """Componentwise ``s >= t``; a partial order, so both directions may be False."""
    return all(a >= b for a, b in zip(s.astuple(), t.astuple()))


@dataclass
class Claim1Result:
    passed: bool
    colorings: int
    signature_counts: dict
    counterexample: dict | None = None
    counter_signature: str | None = None


@dataclass
class Claim2Result:
    passed: bool
    nodes: int
    counterexample: dict | None = None


def check_claim1_graph(g: ConflictGraph, regions: Mapping[str, frozenset], names=("X1", "X2", "X3"), max_vertices=ENUMERATION_CAP):
    counts: Counter = Counter()
    total = 0
    for c in enumerate_proper_colorings(g, max_vertices):
        total += 1
        sig = signature(c, *(regions[n] for n in names))
        counts[str(sig)] += 1
        if not any(signature_geq(sig, t) for t in CLAIM1_THRESHOLDS):
            return Claim1Result(False, total, dict(counts), c, str(sig))
    return Claim1Result(True, total, dict(sorted(counts.items())))


def check_claim1(x: Arrangement) -> Claim1Result:
    """Every proper colouring of X dominates one of the three threshold signatures."""
    return check_claim1_graph(build_graph(x), x.regions)


def check_claim2_graph(g: ConflictGraph, regions: Mapping[str, frozenset], names=("Y1", "Y2", "Y3"), **kw):
    caps = {n: CLAIM2_CAPS for n in names}
    outcome = capped_coloring_outcome(g, {n: regions[n] for n in names}, caps, **kw)
    if outcome.sat:
        return Claim2Result(False, outcome.nodes, outcome.coloring)
    return Claim2Result(True, outcome.nodes)


def check_claim2(y: Arrangement, **kw) -> Claim2Result:
    """No proper colouring of Y keeps every region to three colours."""
    return check_claim2_graph(build_graph(y), y.regions, **kw)


def full_overlap(g: ConflictGraph, s, t) -> bool:
    s, t = frozenset(s), frozenset(t)
    if not s or not t:
        raise EmptyRegion("full overlap needs two nonempty sets")
    if s & t:
        raise ValueError("full overlap sets must be disjoint")
    return all(g.has_edge(a, b) for a in s for b in t)


# --- composition ----------------------------------------------------------


@dataclass
class LowerBoundCertificate:
    claim1: dict
    claim2: dict
    structure: dict
    conclusion: dict | None
    hashes: dict = field(default_factory=dict)


def _sha(obj) -> str:
    if not isinstance(obj, str):
        obj = json.dumps(obj, sort_keys=True)
    return hashlib.sha256(obj.encode()).hexdigest()


def _check_copies(zs: ZStructure, g: ConflictGraph, regions):
    template = ConflictGraph.from_edges(zs.template_vertices, zs.template_edges)
    for copy in zs.copies:
        ids = {zs.vertex(copy, v): v for v in zs.template_vertices}
        absent = [v for v in ids if v not in g.index]
        if absent:
            raise StructureError("a", f"copy {copy} lacks vertex {absent[0]}")
        for a, b in itertools.combinations(sorted(ids), 2):
            if g.has_edge(a, b) != template.has_edge(ids[a], ids[b]):
                raise StructureError("a", f"copy {copy} differs from Y on pair {a} -- {b}")
        if regions is not None:
            for k in (1, 2, 3):
                stored = regions.get(f"{copy}.Y{k}")
                if stored is None or frozenset(stored) != zs.region_ids(copy, k):
                    raise StructureError("a", f"copy {copy} region Y{k} does not match Y")


def verify_composition(
    zs: ZStructure,
    g: ConflictGraph,
    *,
    regions: Mapping[str, frozenset] | None = None,
    claim1: Claim1Result | None = None,
    claim2: Claim2Result | None = None,
) -> LowerBoundCertificate:
    """Check the premises of the pigeonhole argument and conclude chi >= 8.

    (a) every copy is an induced copy of Y with Y's regions;
    (b) for each j and i1 < i2 < i3, region k of top copy (i2, j) fully
        overlaps region j of bottom copy i_k, for k = 1, 2, 3;
    (c) there are enough bottom copies for pigeonhole to give three
        four-coloured regions of a single index j.
    """
    if claim1 is None:
        claim1 = check_claim1(build_gadget_x())
    if claim2 is None:
        template = ConflictGraph.from_edges(zs.template_vertices, zs.template_edges)
        claim2 = check_claim2_graph(template, zs.template_regions)

    _check_copies(zs, g, regions)

    n = len(zs.bottom)
    checked = {}
    for j in (1, 2, 3):
        for i1, i2, i3 in itertools.combinations(range(1, n + 1), 3):
            top = zs.top_name(i2, j)
            if top is None:
                raise StructureError("b", f"no top copy for (i={i2}, j={j})")
            for k, ik in zip((1, 2, 3), (i1, i2, i3)):
                key = (top, k, ik, j)
                if key not in checked:
                    checked[key] = full_overlap(g, zs.region_ids(top, k), zs.region_ids(bottom_name(ik), j))
                if not checked[key]:
                    raise StructureError(
                        "b", f"region {k} of {top} does not fully overlap region Y{j} of {bottom_name(ik)}"
                    )

    regions_per_copy = 3
    colours_per_region = 4
    need = regions_per_copy * (regions_per_copy - 1) + 1  # some j holds >= 3 of n copies
    if n < need:
        raise StructureError("c", f"{n} bottom copies; pigeonhole needs at least {need}")

    structure = {
        "passed": True,
        "premises": {"a": True, "b": True, "c": True},
        "copies": len(zs.copies),
        "bottom_copies": n,
        "overlap_pairs_checked": len(checked),
    }
    ok = claim1.passed and claim2.passed
    conclusion = {"chi_at_least": 2 * colours_per_region} if ok else None
    return LowerBoundCertificate(
        _claim1_record(claim1),
        _claim2_record(claim2),
        structure,
        conclusion,
        {"z_structure": _sha(zs.to_dict()), "graph": g.content_hash()},
    )


def _claim1_record(r: Claim1Result) -> dict:
    return {
        "passed": r.passed,
        "colorings": r.colorings,
        "thresholds": [str(t) for t in CLAIM1_THRESHOLDS],
        "signature_counts": r.signature_counts,
        "counterexample": r.counterexample,
    }


def _claim2_record(r: Claim2Result) -> dict:
    return {"passed": r.passed, "unsat": r.passed, "caps": CLAIM2_CAPS, "nodes": r.nodes, "counterexample": r.counterexample}


# --- end to end -----------------------------------------------------------


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except CertificationError:
        raise
    except Exception as exc:
        raise CertificationError(name, f"{type(exc).__name__}: {exc}") from exc


def floor_coloring(arr: Arrangement, g: ConflictGraph, jobs: int = 1) -> dict:
    """Four-colour each floor component exactly; floor f uses colours 4f..4f+3."""
    floors = arr.floors()
    tasks = []
    for f_index, level in enumerate(floors):
        ids = [b.id for b in arr.boxes if b.lo(arr.floor_axis) == level]
        for comp in components(g.induced(ids)):
            tasks.append((f_index, g.induced(comp)))

    def solve(task):
        f_index, sub = task
        c = k_colorable(sub, 4)
        if c is None:
            raise CertificationError("upper", f"a floor-{f_index} component is not 4-colourable")
        return {v: col + 4 * f_index for v, col in c.items()}

    colouring = {}
    if jobs > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(solve, tasks))
    else:
        results = [solve(t) for t in tasks]
    for part in results:
        colouring.update(part)
    return {v: colouring[v] for v in g.vertices}


def _compact_graph(g: ConflictGraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [[g.index[u], g.index[v]] for u, v in g.edges]}


def _graph_from_compact(d) -> ConflictGraph:
    verts = d["vertices"]
    return ConflictGraph.from_edges(verts, [(verts[a], verts[b]) for a, b in d["edges"]])


def certify_z(jobs: int = 1, cnf_path: str | None = None) -> dict:
    """Run every stage and return a JSON-ready certificate that chi(Z) = 8."""
    x = build_gadget_x()
    y = build_gadget_y()
    claim1 = _stage("claim1", check_claim1, x)
    if not claim1.passed:
        raise CertificationError("claim1", f"counterexample with signature {claim1.counter_signature}")
    claim2 = _stage("claim2", check_claim2, y)
    if not claim2.passed:
        raise CertificationError("claim2", "found a colouring with three colours per region")

    abstract, zs = _stage("z-abstract", build_z_abstract)
    zgeo = _stage("z-geometric", build_z_geometric)
    geo = _stage("z-graph", build_graph, zgeo)
    missing = [e for e in abstract.edges if not geo.has_edge(*e)]
    if missing:
        raise CertificationError("embedding", f"{len(missing)} abstract edges are not contacts")

    lower = _stage("structure", verify_composition, zs, geo, regions=zgeo.regions, claim1=claim1, claim2=claim2)
    if lower.conclusion is None:
        raise CertificationError("structure", "claims did not pass")

    colouring = _stage("upper", floor_coloring, zgeo, geo, jobs)
    bad = verify_coloring(geo, colouring)
    if bad is not None:
        raise CertificationError("upper", f"edge {bad} is monochromatic")
    palette = palette_size(colouring)
    if palette > 8:
        raise CertificationError("upper", f"floor colouring used {palette} colours")

    xg = build_graph(x)
    cert = {
        "claim1": {**lower.claim1, "graph": _compact_graph(xg), "regions": {k: sorted(v) for k, v in x.regions.items()}},
        "claim2": lower.claim2,
        "structure": {**lower.structure, "embedding": True, "z_structure": zs.to_dict()},
        "upper": {"coloring": colouring, "palette": palette, "graph": _compact_graph(geo)},
        "conclusion": {"chi": 8, "lower": lower.conclusion["chi_at_least"], "upper": palette},
        "hashes": {
            "gadget_x": x.content_hash(),
            "gadget_y": y.content_hash(),
            "z_geometric": zgeo.content_hash(),
            "z_structure": _sha(zs.to_dict()),
            "z_graph": geo.content_hash(),
            "x_graph": xg.content_hash(),
            "coloring": _sha(colouring),
        },
    }
    if cnf_path is not None:
        cnf = export_cnf(abstract, 7)
        with open(cnf_path, "w") as fh:
            fh.write(cnf)
        cert["hashes"]["z_abstract_cnf_k7"] = _sha(cnf)
    return cert


def recheck_certificate(cert: Mapping) -> list[str]:
    """Replay a certificate from its own contents. Returns a list of failures."""
    problems = []
    try:
        xg = _graph_from_compact(cert["claim1"]["graph"])
        zs = ZStructure.from_dict(cert["structure"]["z_structure"])
        geo = _graph_from_compact(cert["upper"]["graph"])
        colouring = {k: int(v) for k, v in cert["upper"]["coloring"].items()}
        hashes = cert["hashes"]
    except (KeyError, TypeError, ValueError) as exc:
        return [f"malformed certificate: {exc}"]

    for key, actual in (
        ("x_graph", xg.content_hash()),
        ("z_structure", _sha(zs.to_dict())),
        ("z_graph", geo.content_hash()),
        ("coloring", _sha(colouring)),
    ):
        if hashes.get(key) != actual:
            problems.append(f"hash mismatch for {key}")

    regions = {k: frozenset(v) for k, v in cert["claim1"]["regions"].items()}
    c1 = check_claim1_graph(xg, regions)
    if not c1.passed or c1.colorings != cert["claim1"].get("colorings"):
        problems.append("claim1 replay disagrees")
    template = ConflictGraph.from_edges(zs.template_vertices, zs.template_edges)
    c2 = check_claim2_graph(template, zs.template_regions)
    if not c2.passed:
        problems.append("claim2 replay disagrees")
    try:
        lower = verify_composition(zs, geo, claim1=c1, claim2=c2)
        if lower.conclusion is None or lower.conclusion["chi_at_least"] < 8:
            problems.append("composition does not conclude chi >= 8")
    except StructureError as exc:
        problems.append(str(exc))
    try:
        bad = verify_coloring(geo, colouring)
    except MissingVertex as exc:
        problems.append(str(exc))
    else:
        if bad is not None:
            problems.append(f"upper colouring has monochromatic edge {bad}")
        elif palette_size(colouring) > 8:
            problems.append("upper colouring uses more than 8 colours")
    if cert.get("conclusion", {}).get("chi") != 8:
        problems.append("certificate does not state chi = 8")
    return problems
