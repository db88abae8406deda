"""Constructive colourings with palette guarantees from side length, surface or volume.

Each strategy returns ``(coloring, StrategyReport)``. The report carries the
cap for the integer parameter actually used (always enforced) and the
closed-form cap (enforced whenever the integer cap does not exceed it).
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .conflict import ConflictGraph, build_graph, components, degeneracy
from .errors import InternalError, PreconditionViolated
from .geometry import Arrangement
from .solver import greedy_degeneracy_coloring, k_colorable, palette_size, verify_coloring


@dataclass
class StrategyReport:
    strategy: str
    ell: int
    measure: str
    bound: float
    palette: int
    cap: float
    closed_form_cap: float
    closed_form_enforced: bool
    parts: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, indent=None) -> str:
        return json.dumps(self.to_dict(), indent=indent)


def _finish(g: ConflictGraph, colouring: dict, report: StrategyReport) -> tuple[dict, StrategyReport]:
    bad = verify_coloring(g, colouring)
    if bad is not None:
        raise InternalError(f"{report.strategy}: edge {bad} is monochromatic")
    report.palette = palette_size(colouring)
    if report.palette > report.cap:
        raise InternalError(f"{report.strategy}: palette {report.palette} exceeds cap {report.cap}")
    report.closed_form_enforced = report.cap <= report.closed_form_cap
    if report.closed_form_enforced and report.palette > report.closed_form_cap:
        raise InternalError(f"{report.strategy}: palette exceeds closed-form cap {report.closed_form_cap}")
    return {v: colouring[v] for v in g.vertices}, report


def _graph(arr, graph):
    return build_graph(arr) if graph is None else graph


def color_by_level(arr: Arrangement, axis: int, ell: int, *, graph=None, jobs: int = 1):
    """Colour boxes whose side along ``axis`` is at most ``ell`` with 4(ell+1) colours.

    Boxes go to part ``lo(axis) mod (ell+1)``. Within a part only boxes at
    one level can touch, so each part component is a rectangle contact
    graph and is four-coloured exactly with the part's own four colours.
    """
    if ell < 1:
        raise PreconditionViolated("ell must be >= 1")
    long = [b.id for b in arr.boxes if b.side(axis) > ell]
    if long:
        raise PreconditionViolated(f"{len(long)} boxes longer than {ell} on axis {axis}, e.g. {long[0]}")
    g = _graph(arr, graph)
    level = {b.id: b.lo(axis) for b in arr.boxes}
    parts = {}
    for b in arr.boxes:
        parts.setdefault(level[b.id] % (ell + 1), []).append(b.id)

    tasks = []
    stats = []
    for k in sorted(parts):
        sub = g.induced(parts[k])
        for u, v in sub.edges:
            if level[u] != level[v]:
                raise InternalError(f"boxes {u}, {v} at levels {level[u]} != {level[v]} touch in part {k}")
        comps = components(sub)
        stats.append({"part": k, "boxes": len(sub), "components": len(comps), "largest": max(map(len, comps))})
        tasks.extend((k, sub.induced(c)) for c in comps)

    def solve(task):
        k, comp = task
        c = k_colorable(comp, 4)
        if c is None:
            raise InternalError(f"a level component of part {k} needs more than 4 colours")
        return {v: col + 4 * k for v, col in c.items()}

    if jobs > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(jobs) as pool:
            results = list(pool.map(solve, tasks))
    else:
        results = [solve(t) for t in tasks]
    colouring = {}
    for r in results:
        colouring.update(r)
    cap = 4 * (ell + 1)
    report = StrategyReport("level", ell, "ell", ell, 0, cap, cap, True, stats)
    return _finish(g, colouring, report)


def color_by_own_dim(arr: Arrangement, ell: int, *, graph=None, jobs: int = 1):
    """Each box joins group d for its first axis d with side <= ell; groups are
    coloured by level along their own axis with disjoint palettes."""
    if ell < 1:
        raise PreconditionViolated("ell must be >= 1")
    g = _graph(arr, graph)
    groups = {0: [], 1: [], 2: []}
    for b in arr.boxes:
        for d in range(3):
            if b.side(d) <= ell:
                groups[d].append(b.id)
                break
        else:
            raise PreconditionViolated(f"box {b.id} has no side <= {ell}")
    per_group = 4 * (ell + 1)
    colouring = {}
    stats = []
    for d, ids in groups.items():
        if not ids:
            stats.append({"axis": d, "boxes": 0, "palette": 0})
            continue
        sub_arr = arr.subset(ids)
        c, rep = color_by_level(sub_arr, d, ell, graph=g.induced(ids), jobs=jobs)
        colouring.update({v: col + d * per_group for v, col in c.items()})
        stats.append({"axis": d, "boxes": len(ids), "palette": rep.palette})
    cap = 3 * per_group
    report = StrategyReport("own-dim", ell, "ell", ell, 0, cap, cap, True, stats)
    return _finish(g, colouring, report)


def _pick_ell(target: float, cost) -> int:
    cands = {max(1, math.floor(target)), max(1, math.ceil(target))}
    return min(cands, key=lambda l: (cost(l), l))


def surface_cap(s: float, ell: int) -> float:
    return 12 * ell + 3 * s / ell**2 + 13


def surface_closed_form(s: float) -> float:
    return 9 * (4 * s) ** (1 / 3) + 13


def _split_thin(arr: Arrangement, ell: int):
    thin = [b.id for b in arr.boxes if b.min_side < ell]
    thick = [b.id for b in arr.boxes if b.min_side >= ell]
    return thin, thick


def _surface_colouring(arr: Arrangement, s: float, g: ConflictGraph, jobs: int):
    ell = _pick_ell((s / 2) ** (1 / 3), lambda l: surface_cap(s, l))
    thin, thick = _split_thin(arr, ell)
    colouring = {}
    stats = []
    if thin:
        c, rep = color_by_own_dim(arr.subset(thin), ell - 1, graph=g.induced(thin), jobs=jobs)
        if rep.palette > 12 * ell:
            raise InternalError(f"thin part used {rep.palette} > {12 * ell} colours")
        colouring.update(c)
    stats.append({"part": "R", "boxes": len(thin), "palette": palette_size({v: colouring[v] for v in thin})})

    offset = 12 * ell
    for bid in thick:
        b = arr.box(bid)
        if 2 * ell * sum(b.sides) > b.surface:
            raise InternalError(f"box {bid} breaks 2*ell*(x+y+z) <= surface")
    sub = g.induced(thick)
    d, _ = degeneracy(sub)
    d_bound = 3 * s / ell**2 + 12
    if d > d_bound:
        raise InternalError(f"degeneracy {d} of the thick part exceeds {d_bound}")
    c = greedy_degeneracy_coloring(sub)
    colouring.update({v: col + offset for v, col in c.items()})
    stats.append(
        {"part": "U", "boxes": len(thick), "degeneracy": d, "degeneracy_bound": d_bound, "palette": palette_size(c)}
    )
    return ell, colouring, stats


def color_by_surface(arr: Arrangement, s: float, *, graph=None, jobs: int = 1):
    """Boxes of surface at most ``s``: thin boxes (min side < ell) by own
    dimension with parameter ell-1, the rest greedily along a degeneracy order."""
    big = [b.id for b in arr.boxes if b.surface > s]
    if big:
        raise PreconditionViolated(f"{len(big)} boxes have surface > {s}, e.g. {big[0]}")
    g = _graph(arr, graph)
    ell, colouring, stats = _surface_colouring(arr, s, g, jobs)
    report = StrategyReport("surface", ell, "s", s, 0, surface_cap(s, ell), surface_closed_form(s), True, stats)
    return _finish(g, colouring, report)


def volume_closed_form(v: float) -> float:
    return 24 * (6 * v) ** 0.25 + 13


def volume_composite(v: float, ell: int) -> float:
    return 9 * (24 * v / ell) ** (1 / 3) + 12 * ell + 13


def color_by_volume(arr: Arrangement, v: float, *, graph=None, jobs: int = 1):
    """Boxes of volume at most ``v``: thin boxes by own dimension, the rest
    (whose surfaces are then at most 6v/ell) by the surface strategy."""
    big = [b.id for b in arr.boxes if b.volume > v]
    if big:
        raise PreconditionViolated(f"{len(big)} boxes have volume > {v}, e.g. {big[0]}")
    g = _graph(arr, graph)
    ell = _pick_ell((3 * v / 8) ** 0.25, lambda l: volume_composite(v, l))
    thin, thick = _split_thin(arr, ell)
    colouring = {}
    stats = []
    if thin:
        c, rep = color_by_own_dim(arr.subset(thin), ell - 1, graph=g.induced(thin), jobs=jobs)
        colouring.update(c)
    stats.append({"part": "R", "boxes": len(thin), "palette": palette_size({b: colouring[b] for b in thin})})

    # integer surfaces, so the bound 6v/ell may be floored
    s_thick = math.floor(6 * v / ell)
    for bid in thick:
        if arr.box(bid).surface > 6 * v / ell:
            raise InternalError(f"box {bid} has surface above 6v/ell")
    offset = 12 * ell
    inner_cap = 0.0
    if thick:
        sub_arr = arr.subset(thick)
        inner_ell, c, inner_stats = _surface_colouring(sub_arr, s_thick, g.induced(thick), jobs)
        inner_cap = surface_cap(s_thick, inner_ell)
        colouring.update({b: col + offset for b, col in c.items()})
        stats.append({"part": "U", "boxes": len(thick), "surface_bound": s_thick, "ell": inner_ell, "inner": inner_stats})
    cap = offset + inner_cap
    report = StrategyReport("volume", ell, "v", v, 0, cap, volume_composite(v, ell), True, stats)
    return _finish(g, colouring, report)
