"""Generators for the gadget arrangements, the two-floor arrangement Z and
random guillotine tilings.

All plan coordinates of the figures are doubled so every region probe runs
along an integer line; floors are unit slabs on axis 2.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .conflict import ConflictGraph, build_graph
from .errors import Infeasible, RealizationError
from .geometry import (
    Arrangement,
    AxisRemap,
    Box,
    Interval,
    SegmentProbe,
    region_from_probe,
    remap,
    translate,
    validate,
)

X_FOOTPRINTS = {
    "A": ((0, 6), (0, 2)),
    "B": ((0, 6), (2, 4)),
    "C1": ((0, 2), (4, 8)),
    "C2": ((2, 4), (4, 8)),
    "D1": ((4, 6), (4, 6)),
    "D2": ((4, 6), (6, 8)),
    "T": ((0, 6), (8, 10)),
}

# Three copies of X laid along x; the zone of each copy (C1, C2, D1, D2)
# is stretched differently across y so the probe lines y=3,5,7 pick
# different X-regions in each copy.
Y_FOOTPRINTS = {
    "X1.T": ((0, 2), (0, 10)),
    "X1.C1": ((2, 6), (0, 4)),
    "X1.C2": ((2, 6), (4, 6)),
    "X1.D2": ((2, 4), (6, 10)),
    "X1.D1": ((4, 6), (6, 10)),
    "X1.B": ((6, 8), (0, 10)),
    "X1.A": ((8, 10), (0, 10)),
    "X2.T": ((10, 12), (0, 10)),
    "X2.C1": ((12, 16), (0, 2)),
    "X2.C2": ((12, 16), (2, 6)),
    "X2.D2": ((12, 14), (6, 10)),
    "X2.D1": ((14, 16), (6, 10)),
    "X2.B": ((16, 18), (0, 10)),
    "X2.A": ((18, 20), (0, 10)),
    "X3.T": ((20, 22), (0, 10)),
    "X3.D2": ((22, 24), (0, 4)),
    "X3.D1": ((24, 26), (0, 4)),
    "X3.C2": ((22, 26), (4, 8)),
    "X3.C1": ((22, 26), (8, 10)),
    "X3.B": ((26, 28), (0, 10)),
    "X3.A": ((28, 30), (0, 10)),
}

Y_LENGTH = 30
Y_WIDTH = 10

# Figure 1: middle floor (8 boxes), two top-floor halves, one bottom box.
FIGURE1_BOXES = {
    "M1": ((0, 10), (0, 2), (1, 2)),
    "M2": ((0, 2), (2, 6), (1, 2)),
    "M3": ((2, 4), (2, 6), (1, 2)),
    "M4": ((4, 6), (2, 4), (1, 2)),
    "M5": ((4, 6), (4, 6), (1, 2)),
    "M6": ((6, 8), (2, 6), (1, 2)),
    "M7": ((8, 10), (2, 6), (1, 2)),
    "M8": ((0, 10), (6, 8), (1, 2)),
    "U1": ((-1, 5), (-1, 9), (2, 3)),
    "U2": ((5, 11), (-1, 9), (2, 3)),
    "L1": ((1, 9), (1, 7), (0, 1)),
}


def _one_floor(footprints, z=(0, 1)):
    return tuple(Box.of(i, x, y, z) for i, (x, y) in footprints.items())


def build_gadget_x() -> Arrangement:
    arr = Arrangement(_one_floor(X_FOOTPRINTS), scale=2, floor_axis=2)
    regions = {
        f"X{k}": region_from_probe(arr, SegmentProbe(1, Interval(1, 9), (x, 0)))
        for k, x in ((1, 1), (2, 3), (3, 5))
    }
    return Arrangement(arr.boxes, regions, 2, 2)


def build_gadget_y() -> Arrangement:
    arr = Arrangement(_one_floor(Y_FOOTPRINTS), scale=2, floor_axis=2)
    regions = {
        f"Y{k}": region_from_probe(arr, SegmentProbe(0, Interval(1, Y_LENGTH - 1), (2 * k + 1, 0)))
        for k in (1, 2, 3)
    }
    copies = {f"X{j}": [i for i in Y_FOOTPRINTS if i.startswith(f"X{j}.")] for j in (1, 2, 3)}
    return Arrangement(arr.boxes, regions, 2, 2, {"copies": copies})


def build_figure1() -> Arrangement:
    return Arrangement(tuple(Box.of(i, *c) for i, c in FIGURE1_BOXES.items()), scale=2, floor_axis=2)


# --- arrangement Z ---------------------------------------------------------


@dataclass(frozen=True)
class Demand:
    top: str
    k: int
    bottom: int
    j: int


@dataclass(frozen=True)
class ZStructure:
    """Copy layout and full-overlap demands of Z.

    Every copy ``name`` of Y contributes vertices ``f"{name}.{y_id}"``; the
    template fields hold Y's own vertex list, edges and regions.
    """

    bottom: tuple[str, ...]
    top: tuple[tuple[str, int, int], ...]  # (name, i, j)
    demands: tuple[Demand, ...]
    template_vertices: tuple[str, ...]
    template_edges: tuple[tuple[str, str], ...]
    template_regions: dict

    @property
    def copies(self) -> list[str]:
        return list(self.bottom) + [t[0] for t in self.top]

    def vertex(self, copy: str, y_id: str) -> str:
        return f"{copy}.{y_id}"

    def region_ids(self, copy: str, k: int) -> frozenset[str]:
        return frozenset(self.vertex(copy, v) for v in self.template_regions[f"Y{k}"])

    def top_name(self, i: int, j: int) -> str | None:
        for name, ti, tj in self.top:
            if (ti, tj) == (i, j):
                return name
        return None

    def demands_for(self, top: str) -> list[Demand]:
        return [d for d in self.demands if d.top == top]

    def to_dict(self) -> dict:
        return {
            "bottom": list(self.bottom),
            "top": [list(t) for t in self.top],
            "demands": [[d.top, d.k, d.bottom, d.j] for d in self.demands],
            "template": {
                "vertices": list(self.template_vertices),
                "edges": [list(e) for e in self.template_edges],
                "regions": {k: sorted(v) for k, v in self.template_regions.items()},
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data) -> ZStructure:
        tpl = data["template"]
        return cls(
            tuple(data["bottom"]),
            tuple((t[0], int(t[1]), int(t[2])) for t in data["top"]),
            tuple(Demand(d[0], int(d[1]), int(d[2]), int(d[3])) for d in data["demands"]),
            tuple(tpl["vertices"]),
            tuple(tuple(e) for e in tpl["edges"]),
            {k: frozenset(v) for k, v in tpl["regions"].items()},
        )


def bottom_name(c: int) -> str:
    return f"B{c}"


def top_name(i: int, j: int) -> str:
    return f"T{i}_{j}"


def z_structure(n_bottom: int = 7) -> ZStructure:
    y = build_gadget_y()
    yg = build_graph(y)
    tops = []
    demands = []
    for j in (1, 2, 3):
        for i in range(2, n_bottom):
            name = top_name(i, j)
            tops.append((name, i, j))
            for c in range(1, n_bottom + 1):
                k = 1 if c < i else (2 if c == i else 3)
                demands.append(Demand(name, k, c, j))
    return ZStructure(
        tuple(bottom_name(c) for c in range(1, n_bottom + 1)),
        tuple(tops),
        tuple(demands),
        yg.vertices,
        yg.edges,
        dict(y.regions),
    )


def build_z_abstract(n_bottom: int = 7) -> tuple[ConflictGraph, ZStructure]:
    """Disjoint copies of Y's graph plus complete bipartite joins for each demand."""
    zs = z_structure(n_bottom)
    vertices = [zs.vertex(c, v) for c in zs.copies for v in zs.template_vertices]
    edges = [(zs.vertex(c, u), zs.vertex(c, v)) for c in zs.copies for u, v in zs.template_edges]
    for d in zs.demands:
        for t in zs.region_ids(d.top, d.k):
            for b in zs.region_ids(bottom_name(d.bottom), d.j):
                edges.append((t, b))
    return ConflictGraph.from_edges(vertices, edges), zs


def _lin(src0, src1, dst0, dst1):
    return ((src0, dst0), (src1, dst1))


def build_z_geometric(n_bottom: int = 7, unit: int = 48, gap: int = 2) -> Arrangement:
    """Two-floor realization of Z.

    Bottom copies sit unrotated side by side along x (``gap`` Y-units apart),
    so region j of every bottom copy covers the same y-band. Each top copy
    is Y with its axes swapped: its length is squeezed into a private slot
    inside band j, and its width is stretched piecewise so that region 1
    spans copies ``1..i-1``, region 2 spans copy ``i`` and region 3 spans
    copies ``i+1..n``. Every abstract edge is re-checked on the result.
    """
    y = build_gadget_y()
    slot = Y_LENGTH // 2  # top copies keep half their length
    margin = 3
    if margin + (n_bottom - 2) * (slot + margin) > 2 * unit - margin:
        raise RealizationError(f"unit {unit} too small for {n_bottom - 2} slots per band")
    if unit % 2:
        raise RealizationError("unit must be even so gap midpoints stay integral")

    left = 4 * unit
    pitch = (Y_LENGTH + gap) * unit
    starts = [left + (c - 1) * pitch for c in range(1, n_bottom + 1)]
    ends = [s + Y_LENGTH * unit for s in starts]

    parts = []
    regions = {}
    for c, x0 in enumerate(starts, start=1):
        m = AxisRemap((_lin(0, Y_LENGTH, x0, x0 + Y_LENGTH * unit), _lin(0, Y_WIDTH, 0, Y_WIDTH * unit), None))
        part = translate(remap(y, m), (0, 0, 0), prefix=f"{bottom_name(c)}.")
        parts.append(part)

    half_gap = gap * unit // 2
    for j in (1, 2, 3):
        band_lo = 2 * j * unit
        for i in range(2, n_bottom):
            y0 = band_lo + margin + (i - 2) * (slot + margin)
            cross = (
                (0, left - 2 * unit),
                (2, left - unit),
                (4, ends[i - 2] + half_gap),
                (6, ends[i - 1] + half_gap),
                (8, ends[-1] + unit),
                (10, ends[-1] + 2 * unit),
            )
            m = AxisRemap((_lin(0, Y_LENGTH, y0, y0 + slot), cross, _lin(0, 1, 1, 2)), perm=(1, 0, 2))
            parts.append(translate(remap(y, m), (0, 0, 0), prefix=f"{top_name(i, j)}."))

    boxes = []
    for part in parts:
        boxes.extend(part.boxes)
        for name, members in part.regions.items():
            copy = next(iter(members)).split(".", 1)[0]
            regions[f"{copy}.{name}"] = members
    arr = Arrangement(
        tuple(boxes),
        regions,
        scale=2 * unit,
        floor_axis=2,
        meta={"unit": unit, "gap": gap, "n_bottom": n_bottom},
    )
    _check_realization(arr, n_bottom)
    return arr


def _check_realization(arr: Arrangement, n_bottom: int) -> None:
    report = validate(arr)
    if not report.ok:
        raise RealizationError(f"geometric Z invalid: {report.summary()}")
    if {(b.lo(2), b.hi(2)) for b in arr.boxes} != {(0, 1), (1, 2)}:
        raise RealizationError("geometric Z does not span exactly two unit floors")
    geo = build_graph(arr)
    abstract, _ = build_z_abstract(n_bottom)
    if set(geo.vertices) != set(abstract.vertices):
        raise RealizationError("vertex sets of abstract and geometric Z differ")
    for u, v in abstract.edges:
        if not geo.has_edge(u, v):
            raise RealizationError(f"abstract edge {u} -- {v} is not a contact")


# --- random instances -------------------------------------------------------


def gen_random_guillotine(seed: int, count: int, bbox=(16, 16, 16), min_side: int = 1) -> Arrangement:
    """Tile ``[0,bbox]`` by ``count`` boxes via random guillotine cuts.

    Each step picks a cuttable box, then a cuttable axis of it, then an
    integer cut position, all uniformly; every piece keeps sides >= min_side.
    """
    if count < 1 or min_side < 1:
        raise Infeasible("count and min_side must be positive")
    if int(np.prod(bbox)) < count * min_side**3 or any(s < min_side for s in bbox):
        raise Infeasible(f"{count} boxes of side >= {min_side} cannot tile {bbox}")
    rng = np.random.default_rng(seed)
    pieces = [([0, 0, 0], list(bbox))]
    while len(pieces) < count:
        cuttable = [i for i, (lo, hi) in enumerate(pieces) if any(h - l >= 2 * min_side for l, h in zip(lo, hi))]
        if not cuttable:
            raise Infeasible(f"no piece can be cut further at {len(pieces)} boxes")
        i = cuttable[int(rng.integers(len(cuttable)))]
        lo, hi = pieces[i]
        axes = [d for d in range(3) if hi[d] - lo[d] >= 2 * min_side]
        d = axes[int(rng.integers(len(axes)))]
        cut = int(rng.integers(lo[d] + min_side, hi[d] - min_side + 1))
        upper_lo = list(lo)
        upper_lo[d] = cut
        lower_hi = list(hi)
        lower_hi[d] = cut
        pieces[i] = (lo, lower_hi)
        pieces.append((upper_lo, hi))
    boxes = tuple(
        Box(f"g{n:04d}", tuple(Interval(l, h) for l, h in zip(lo, hi))) for n, (lo, hi) in enumerate(pieces)
    )
    return Arrangement(boxes, {}, scale=1, floor_axis=None, meta={"seed": seed, "bbox": list(bbox), "min_side": min_side})
